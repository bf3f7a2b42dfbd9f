#include "s2v/vocab.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "s2v/errors.hpp"
#include "s2v/simbench.hpp"
#include "s2v/text.hpp"

namespace s2v {

WordFrequency count_words(std::istream& in) {
  WordFrequency freq;
  std::string line;
  while (std::getline(in, line)) {
    for (const auto& token : split_ws(line)) {
      ++freq.counts[to_lower(token)];
      ++freq.total_tokens;
    }
  }
  return freq;
}

WordFrequency count_words_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open transcript file: " + path);
  return count_words(in);
}

void merge_counts(WordFrequency& into, const WordFrequency& from) {
  for (const auto& [word, count] : from.counts) {
    into.counts[word] += count;
  }
  into.total_tokens += from.total_tokens;
}

VocabSet filter_min_count(const WordFrequency& freq, std::uint64_t k) {
  VocabSet vocab;
  for (const auto& [word, count] : freq.counts) {
    if (count >= k) vocab.insert(vocab.end(), word);
  }
  return vocab;
}

VocabDiff vocab_diff(const VocabSet& reference, const VocabSet& corpus) {
  VocabDiff diff;
  diff.reference_size = reference.size();
  diff.corpus_size = corpus.size();
  std::set_difference(reference.begin(), reference.end(), corpus.begin(), corpus.end(),
                      std::back_inserter(diff.missing));
  return diff;
}

std::size_t benchmark_oov(const WordPairBenchmark& benchmark, const VocabSet& vocab) {
  std::size_t oov = 0;
  for (const auto& pair : benchmark.pairs) {
    if (!vocab.contains(pair.word1) || !vocab.contains(pair.word2)) ++oov;
  }
  return oov;
}

void save_vocab(const VocabSet& vocab, std::ostream& out) {
  for (const auto& word : vocab) out << word << '\n';
}

VocabSet load_vocab(std::istream& in) {
  VocabSet vocab;
  std::string line;
  while (std::getline(in, line)) {
    for (const auto& token : split_ws(line)) vocab.insert(to_lower(token));
  }
  return vocab;
}

}  // namespace s2v
