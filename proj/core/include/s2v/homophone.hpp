#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "s2v/embedding_table.hpp"

namespace s2v {

/// Pairs of words that sound identical but differ in spelling. Invariants:
/// members of a pair differ, and no unordered pair appears twice.
struct HomophonePairSet {
  std::vector<std::pair<std::string, std::string>> pairs;

  static HomophonePairSet from_pairs(std::vector<std::pair<std::string, std::string>> pairs);
};

/// One pair per line, two lowercase words separated by a comma or a tab.
/// Lines starting with '#' are ignored. Throws FormatError on malformed
/// lines or invariant violations.
HomophonePairSet load_homophones(std::istream& in);
HomophonePairSet load_homophones_file(const std::string& path);

/// Mean/std of pair similarities. `std` is the population standard
/// deviation; the convention is fixed here so golden tolerances mean
/// something.
struct PairStats {
  std::size_t n_evaluated = 0;
  std::size_t n_skipped_oov = 0;
  double mean = 0.0;
  double std_dev = 0.0;
};

enum class Verdict { PhoneticallyConsistent, PhoneticallyInconsistent, Inconclusive };

std::string to_string(Verdict v);

struct PerPairResult {
  std::string word_a;
  std::string word_b;
  double similarity;
  std::size_t homophone_rank;  // rank of word_b among word_a's neighbors
};

struct ForensicReport {
  PairStats homophone;
  PairStats random_baseline;
  std::vector<PerPairResult> per_pair;  // evaluated pairs, input order
  Verdict verdict = Verdict::Inconclusive;
  std::uint64_t seed = 0;
  double margin = 0.0;
};

/// Cosine over every pair with both words in vocabulary; pairs with a
/// missing word are counted in n_skipped_oov and never imputed. Mean/std run
/// over the evaluated pairs after sorting them, with compensated summation,
/// so the result is invariant under any permutation of the input pairs.
/// Throws NoEvaluablePairs when nothing can be evaluated.
PairStats pair_similarity_stats(const EmbeddingTable& table, const HomophonePairSet& pairs);

/// Stats over n distinct unordered word pairs drawn uniformly without
/// replacement (across draws) from the full vocabulary, using the seeded
/// deterministic generator. Bit-reproducible for a given seed. Throws
/// InvalidN when n exceeds the number of unordered pairs.
PairStats random_pair_baseline(const EmbeddingTable& table, std::size_t n, std::uint64_t seed);

/// Position of w2 in the full similarity-descending neighbor list of w1
/// (rank 1 = nearest non-query word), ties broken as in knn.
std::size_t homophone_rank(const EmbeddingTable& table, const std::string& w1,
                           const std::string& w2);

/// Runs the homophone statistics against the seeded random baseline and
/// aggregates a provenance verdict:
///   homophone.mean >= random.mean + margin  -> PhoneticallyConsistent
///   homophone.mean <= random.mean - margin  -> PhoneticallyInconsistent
///   otherwise                               -> Inconclusive
ForensicReport forensic_report(const EmbeddingTable& table, const HomophonePairSet& pairs,
                               std::size_t n_random, std::uint64_t seed, double margin);

/// Machine-readable key=value block followed by an aligned summary table.
void write_forensic_summary(const ForensicReport& report, std::ostream& out);

/// CSV: word_a,word_b,similarity,homophone_rank (evaluated pairs only).
void write_forensic_pairs_csv(const ForensicReport& report, std::ostream& out);

}  // namespace s2v
