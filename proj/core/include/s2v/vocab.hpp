#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace s2v {

struct WordPairBenchmark;  // simbench.hpp

/// Token counts over a transcript stream. Tokenization is a pure whitespace
/// split after lowercasing, no punctuation stripping; the counted totals are
/// only meaningful against that fixed rule.
struct WordFrequency {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total_tokens = 0;
};

using VocabSet = std::set<std::string>;

struct VocabDiff {
  std::size_t reference_size = 0;
  std::size_t corpus_size = 0;
  std::vector<std::string> missing;  // reference \ corpus, sorted ascending
};

/// One sentence per line, tokens separated by whitespace. Empty stream gives
/// empty counts.
WordFrequency count_words(std::istream& in);
WordFrequency count_words_file(const std::string& path);

/// Merge counts from several transcript files.
void merge_counts(WordFrequency& into, const WordFrequency& from);

/// Words with count >= k. Monotone: larger k can only shrink the result.
VocabSet filter_min_count(const WordFrequency& freq, std::uint64_t k);

VocabDiff vocab_diff(const VocabSet& reference, const VocabSet& corpus);

/// Number of benchmark pairs with at least one word outside `vocab`.
std::size_t benchmark_oov(const WordPairBenchmark& benchmark, const VocabSet& vocab);

/// Vocabulary set file: one word per line, sorted ascending.
void save_vocab(const VocabSet& vocab, std::ostream& out);
VocabSet load_vocab(std::istream& in);

}  // namespace s2v
