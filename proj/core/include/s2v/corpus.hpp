#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace s2v {

inline constexpr int kMfccDim = 13;

/// Variable-length sequence of 13-dim acoustic frames, one row per frame.
using MfccSequence = Eigen::MatrixXd;  // T x 13, T >= 1

struct SpokenWord {
  std::string label;  // lowercase, nonempty
  MfccSequence audio;
};

using Sentence = std::vector<SpokenWord>;

struct SpokenCorpus {
  std::vector<Sentence> sentences;

  // Label -> occurrence count over all sentences.
  std::map<std::string, std::uint64_t> vocabulary() const;
};

/// Fixed-length view of a spoken word: `frames` has exactly `fixed_frames`
/// rows; rows past `valid_length` are padding and must never influence any
/// computation.
struct PaddedWord {
  Eigen::MatrixXd frames;  // fixed_frames x 13
  int valid_length = 0;
};

/// T < fixed: zero frames appended, valid_length = T. T > fixed: tail
/// truncated, valid_length = fixed. T == fixed: identity.
PaddedWord pad_or_truncate(const MfccSequence& seq, int fixed_frames);

/// Text corpus format, one block per spoken word:
///   WORD <label> <T>
///   T lines of 13 comma-separated decimals
/// A blank line ends a sentence. Floats are shortest round-trip, so
/// save/load is bit-exact.
SpokenCorpus load_corpus(std::istream& in);
SpokenCorpus load_corpus_file(const std::string& path);
void save_corpus(const SpokenCorpus& corpus, std::ostream& out);
void save_corpus_file(const SpokenCorpus& corpus, const std::string& path);

}  // namespace s2v
