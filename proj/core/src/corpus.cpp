#include "s2v/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "s2v/errors.hpp"
#include "s2v/text.hpp"

namespace s2v {

std::map<std::string, std::uint64_t> SpokenCorpus::vocabulary() const {
  std::map<std::string, std::uint64_t> vocab;
  for (const auto& sentence : sentences) {
    for (const auto& word : sentence) ++vocab[word.label];
  }
  return vocab;
}

PaddedWord pad_or_truncate(const MfccSequence& seq, int fixed_frames) {
  if (fixed_frames < 1) throw InvalidConfig("fixed_frames must be >= 1");
  if (seq.rows() < 1 || seq.cols() != kMfccDim) {
    throw ShapeError("MFCC sequence must be T x 13 with T >= 1");
  }
  PaddedWord padded;
  padded.frames = Eigen::MatrixXd::Zero(fixed_frames, kMfccDim);
  const int t = static_cast<int>(seq.rows());
  padded.valid_length = std::min(t, fixed_frames);
  padded.frames.topRows(padded.valid_length) = seq.topRows(padded.valid_length);
  return padded;
}

SpokenCorpus load_corpus(std::istream& in) {
  SpokenCorpus corpus;
  Sentence sentence;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (!sentence.empty()) {
        corpus.sentences.push_back(std::move(sentence));
        sentence.clear();
      }
      continue;
    }
    auto tokens = split_ws(line);
    if (tokens.size() != 3 || tokens[0] != "WORD") {
      throw FormatError(line_no, "expected `WORD <label> <T>`");
    }
    auto frames = parse_integer(tokens[2]);
    if (!frames || *frames < 1) throw FormatError(line_no, "frame count must be >= 1");
    SpokenWord word;
    word.label = to_lower(tokens[1]);
    word.audio.resize(*frames, kMfccDim);
    for (long long t = 0; t < *frames; ++t) {
      if (!std::getline(in, line)) throw FormatError(line_no, "unexpected end of frame block");
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::size_t start = 0;
      for (int c = 0; c < kMfccDim; ++c) {
        std::size_t end = line.find(',', start);
        const std::string field =
            line.substr(start, end == std::string::npos ? std::string::npos : end - start);
        auto v = parse_double(field);
        if (!v) throw FormatError(line_no, "bad frame value '" + field + "'");
        word.audio(t, c) = *v;
        if (c + 1 < kMfccDim) {
          if (end == std::string::npos) throw FormatError(line_no, "expected 13 values");
          start = end + 1;
        } else if (end != std::string::npos) {
          throw FormatError(line_no, "expected exactly 13 values");
        }
      }
    }
    sentence.push_back(std::move(word));
  }
  if (!sentence.empty()) corpus.sentences.push_back(std::move(sentence));
  return corpus;
}

SpokenCorpus load_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file: " + path);
  return load_corpus(in);
}

void save_corpus(const SpokenCorpus& corpus, std::ostream& out) {
  bool first = true;
  for (const auto& sentence : corpus.sentences) {
    if (!first) out << '\n';
    first = false;
    for (const auto& word : sentence) {
      out << "WORD " << word.label << ' ' << word.audio.rows() << '\n';
      for (Eigen::Index t = 0; t < word.audio.rows(); ++t) {
        for (int c = 0; c < kMfccDim; ++c) {
          if (c) out << ',';
          out << format_double(word.audio(t, c));
        }
        out << '\n';
      }
    }
  }
}

void save_corpus_file(const SpokenCorpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file: " + path);
  save_corpus(corpus, out);
}

}  // namespace s2v
