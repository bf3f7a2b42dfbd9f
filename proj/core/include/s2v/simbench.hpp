#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "s2v/embedding_table.hpp"

namespace s2v {

/// The 13 word-similarity benchmark identifiers, in report order.
inline constexpr std::array<std::string_view, 13> kBenchmarkNames = {
    "MC-30",      "MEN",      "MTurk-287",    "MTurk-771", "RG-65",
    "Rare-Word",  "SimLex-999", "SimVerb-3500", "Verb-143",  "WS-353",
    "WS-353-REL", "WS-353-SIM", "YP-130"};

struct ScoredPair {
  std::string word1;
  std::string word2;
  double gold;
};

struct WordPairBenchmark {
  std::string name;
  std::vector<ScoredPair> pairs;
};

/// Tab- or comma-separated lines `word1 word2 score`. A first line whose
/// score field is non-numeric is treated as a header and skipped. Words are
/// lowercased. Throws FormatError on malformed lines.
WordPairBenchmark load_benchmark(const std::string& name, std::istream& in);
WordPairBenchmark load_benchmark_file(const std::string& name, const std::string& path);

/// Canonical serialization: word1\tword2\tscore per line, shortest
/// round-trip floats.
void save_benchmark(const WordPairBenchmark& benchmark, std::ostream& out);

/// Spearman rank correlation with average (fractional) ranks for ties:
/// rank-transform both sequences, then Pearson. Requires equal lengths >= 2;
/// throws DegenerateRanks when either sequence is constant.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

struct BenchmarkResult {
  std::string name;
  std::optional<double> rho;  // set iff evaluation succeeded
  std::size_t n_used = 0;
  std::size_t n_oov = 0;
  std::string error;  // nonempty iff rho is unset
};

/// Cosine for every in-vocabulary pair, Spearman against the gold scores.
/// OOV pairs are counted and excluded, never imputed. Throws
/// InsufficientPairs when fewer than two pairs are usable.
BenchmarkResult evaluate(const EmbeddingTable& table, const WordPairBenchmark& benchmark);

/// Evaluates every benchmark; per-benchmark errors are recorded in the
/// result and do not abort the suite.
std::vector<BenchmarkResult> evaluate_suite(const EmbeddingTable& table,
                                            const std::vector<WordPairBenchmark>& benchmarks);

/// CSV rows `name,rho,n_used,n_oov` with 6-decimal fixed rho; errored rows
/// print rho as `nan`.
void write_suite_csv(const std::vector<BenchmarkResult>& results, std::ostream& out);

}  // namespace s2v
