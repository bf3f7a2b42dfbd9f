#include "s2v/simbench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "s2v/errors.hpp"
#include "s2v/text.hpp"

namespace s2v {

namespace {

// Splits a benchmark line on tabs or commas; falls back to whitespace when
// neither separator is present (some distributions are space-separated).
std::vector<std::string> split_fields(const std::string& line) {
  if (line.find_first_of(",\t") == std::string::npos) return split_ws(line);
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',' || c == '\t') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  // Trim blanks around each field.
  for (auto& f : fields) {
    const auto tokens = split_ws(f);
    f = tokens.empty() ? std::string() : tokens[0];
  }
  fields.erase(std::remove_if(fields.begin(), fields.end(),
                              [](const std::string& f) { return f.empty(); }),
               fields.end());
  return fields;
}

}  // namespace

WordPairBenchmark load_benchmark(const std::string& name, std::istream& in) {
  WordPairBenchmark bench;
  bench.name = name;
  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 3) {
      if (first_content_line) {  // header with a different field count
        first_content_line = false;
        continue;
      }
      throw FormatError(line_no, "expected `word1 word2 score`, got " +
                                     std::to_string(fields.size()) + " fields");
    }
    auto score = parse_double(fields[2]);
    if (!score) {
      if (first_content_line) {  // header line, score column is a label
        first_content_line = false;
        continue;
      }
      throw FormatError(line_no, "non-numeric score '" + fields[2] + "'");
    }
    first_content_line = false;
    bench.pairs.push_back({to_lower(fields[0]), to_lower(fields[1]), *score});
  }
  return bench;
}

WordPairBenchmark load_benchmark_file(const std::string& name, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open benchmark file: " + path);
  return load_benchmark(name, in);
}

void save_benchmark(const WordPairBenchmark& benchmark, std::ostream& out) {
  for (const auto& pair : benchmark.pairs) {
    out << pair.word1 << '\t' << pair.word2 << '\t' << format_double(pair.gold) << '\n';
  }
}

namespace {

// Average-rank transform: ranks are 1-based, tied values get the mean of
// the positions they span.
std::vector<double> fractional_ranks(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&xs](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
    // positions i+1 .. j+1 share the average rank
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    cov += dx * dy;
    vx += dx * dx;
    vy += dy * dy;
  }
  if (vx == 0.0 || vy == 0.0) throw DegenerateRanks("constant sequence has no rank order");
  return cov / std::sqrt(vx * vy);
}

}  // namespace

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw ShapeError("sequence lengths differ");
  if (xs.size() < 2) throw InsufficientPairs("need at least two observations");
  return pearson(fractional_ranks(xs), fractional_ranks(ys));
}

BenchmarkResult evaluate(const EmbeddingTable& table, const WordPairBenchmark& benchmark) {
  BenchmarkResult result;
  result.name = benchmark.name;
  std::vector<double> sims;
  std::vector<double> golds;
  for (const auto& pair : benchmark.pairs) {
    const bool usable = table.contains(pair.word1) && table.contains(pair.word2) &&
                        table.norm_of(pair.word1) > 0.0 && table.norm_of(pair.word2) > 0.0;
    if (!usable) {
      ++result.n_oov;
      continue;
    }
    sims.push_back(table.cosine(pair.word1, pair.word2));
    golds.push_back(pair.gold);
  }
  result.n_used = sims.size();
  if (result.n_used < 2) {
    throw InsufficientPairs(benchmark.name + ": only " + std::to_string(result.n_used) +
                            " usable pairs");
  }
  result.rho = spearman(sims, golds);
  return result;
}

std::vector<BenchmarkResult> evaluate_suite(const EmbeddingTable& table,
                                            const std::vector<WordPairBenchmark>& benchmarks) {
  std::vector<BenchmarkResult> results;
  results.reserve(benchmarks.size());
  for (const auto& bench : benchmarks) {
    try {
      results.push_back(evaluate(table, bench));
    } catch (const Error& e) {
      BenchmarkResult failed;
      failed.name = bench.name;
      failed.error = e.what();
      std::size_t oov = 0;
      for (const auto& pair : bench.pairs) {
        if (!table.contains(pair.word1) || !table.contains(pair.word2)) ++oov;
      }
      failed.n_oov = oov;
      failed.n_used = bench.pairs.size() - oov;
      results.push_back(std::move(failed));
    }
  }
  return results;
}

void write_suite_csv(const std::vector<BenchmarkResult>& results, std::ostream& out) {
  out << "name,rho,n_used,n_oov\n";
  for (const auto& r : results) {
    out << r.name << ',' << (r.rho ? format_fixed(*r.rho, 6) : std::string("nan")) << ','
        << r.n_used << ',' << r.n_oov << '\n';
  }
}

}  // namespace s2v
