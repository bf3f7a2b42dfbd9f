#include "s2v/homophone.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "s2v/errors.hpp"
#include "s2v/rng.hpp"
#include "s2v/text.hpp"

namespace s2v {

namespace {

std::pair<std::string, std::string> canonical(const std::string& a, const std::string& b) {
  return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
}

// Kahan-compensated sum in the order given.
double compensated_sum(const std::vector<double>& xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

// Mean and population std over similarities sorted by their pair key, so the
// result does not depend on input pair order.
PairStats stats_from_keyed(std::vector<std::pair<std::pair<std::string, std::string>, double>> keyed,
                           std::size_t n_skipped) {
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  std::vector<double> sims;
  sims.reserve(keyed.size());
  for (const auto& kv : keyed) sims.push_back(kv.second);

  PairStats stats;
  stats.n_evaluated = sims.size();
  stats.n_skipped_oov = n_skipped;
  const auto n = static_cast<double>(sims.size());
  stats.mean = compensated_sum(sims) / n;
  std::vector<double> sq;
  sq.reserve(sims.size());
  for (double s : sims) {
    const double d = s - stats.mean;
    sq.push_back(d * d);
  }
  stats.std_dev = std::sqrt(compensated_sum(sq) / n);
  return stats;
}

}  // namespace

HomophonePairSet HomophonePairSet::from_pairs(
    std::vector<std::pair<std::string, std::string>> pairs) {
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& [a, b] : pairs) {
    if (a.empty() || b.empty()) throw FormatError(0, "empty word in homophone pair");
    if (a == b) throw FormatError(0, "homophone pair members must differ: " + a);
    if (!seen.insert(canonical(a, b)).second) {
      throw FormatError(0, "duplicate homophone pair: " + a + "," + b);
    }
  }
  HomophonePairSet set;
  set.pairs = std::move(pairs);
  return set;
}

HomophonePairSet load_homophones(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') continue;
    const auto sep = line.find_first_of(",\t");
    if (sep == std::string::npos) {
      throw FormatError(line_no, "expected two words separated by comma or tab");
    }
    auto a_tokens = split_ws(line.substr(0, sep));
    auto b_tokens = split_ws(line.substr(sep + 1));
    if (a_tokens.size() != 1 || b_tokens.size() != 1) {
      throw FormatError(line_no, "expected exactly one word on each side");
    }
    const std::string a = to_lower(a_tokens[0]);
    const std::string b = to_lower(b_tokens[0]);
    if (a == b) throw FormatError(line_no, "homophone pair members must differ: " + a);
    if (!seen.insert(canonical(a, b)).second) {
      throw FormatError(line_no, "duplicate homophone pair: " + a + "," + b);
    }
    pairs.emplace_back(a, b);
  }
  HomophonePairSet set;
  set.pairs = std::move(pairs);
  return set;
}

HomophonePairSet load_homophones_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open homophone file: " + path);
  return load_homophones(in);
}

PairStats pair_similarity_stats(const EmbeddingTable& table, const HomophonePairSet& pairs) {
  std::vector<std::pair<std::pair<std::string, std::string>, double>> keyed;
  std::size_t skipped = 0;
  for (const auto& [a, b] : pairs.pairs) {
    if (!table.contains(a) || !table.contains(b)) {
      ++skipped;
      continue;
    }
    keyed.emplace_back(canonical(a, b), table.cosine(a, b));
  }
  if (keyed.empty()) throw NoEvaluablePairs();
  return stats_from_keyed(std::move(keyed), skipped);
}

PairStats random_pair_baseline(const EmbeddingTable& table, std::size_t n, std::uint64_t seed) {
  const std::size_t v = table.size();
  if (v < 2) throw InvalidN("vocabulary must contain at least two words");
  const std::size_t total_pairs = v * (v - 1) / 2;
  if (n < 1 || n > total_pairs) {
    throw InvalidN("n must satisfy 1 <= n <= " + std::to_string(total_pairs) + ", got " +
                   std::to_string(n));
  }
  Rng rng(seed);
  std::set<std::pair<std::size_t, std::size_t>> drawn;
  const auto& words = table.words();
  std::vector<std::pair<std::pair<std::string, std::string>, double>> keyed;
  keyed.reserve(n);
  while (keyed.size() < n) {
    std::size_t i = rng.next_below(v);
    std::size_t j = rng.next_below(v);
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    if (!drawn.insert({i, j}).second) continue;
    keyed.emplace_back(canonical(words[i], words[j]), table.cosine(words[i], words[j]));
  }
  return stats_from_keyed(std::move(keyed), 0);
}

std::size_t homophone_rank(const EmbeddingTable& table, const std::string& w1,
                           const std::string& w2) {
  return table.rank_of(w1, w2);
}

ForensicReport forensic_report(const EmbeddingTable& table, const HomophonePairSet& pairs,
                               std::size_t n_random, std::uint64_t seed, double margin) {
  if (margin <= 0.0) throw InvalidConfig("margin must be positive");
  ForensicReport report;
  report.seed = seed;
  report.margin = margin;
  report.homophone = pair_similarity_stats(table, pairs);
  report.random_baseline = random_pair_baseline(table, n_random, seed);
  for (const auto& [a, b] : pairs.pairs) {
    if (!table.contains(a) || !table.contains(b)) continue;
    report.per_pair.push_back(
        {a, b, table.cosine(a, b), homophone_rank(table, a, b)});
  }
  const double diff = report.homophone.mean - report.random_baseline.mean;
  if (diff >= margin) {
    report.verdict = Verdict::PhoneticallyConsistent;
  } else if (diff <= -margin) {
    report.verdict = Verdict::PhoneticallyInconsistent;
  } else {
    report.verdict = Verdict::Inconclusive;
  }
  return report;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::PhoneticallyConsistent:
      return "PhoneticallyConsistent";
    case Verdict::PhoneticallyInconsistent:
      return "PhoneticallyInconsistent";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

void write_forensic_summary(const ForensicReport& report, std::ostream& out) {
  out << "homophone_n_evaluated=" << report.homophone.n_evaluated << '\n';
  out << "homophone_n_skipped_oov=" << report.homophone.n_skipped_oov << '\n';
  out << "homophone_mean=" << format_fixed(report.homophone.mean, 6) << '\n';
  out << "homophone_std=" << format_fixed(report.homophone.std_dev, 6) << '\n';
  out << "random_n=" << report.random_baseline.n_evaluated << '\n';
  out << "random_seed=" << report.seed << '\n';
  out << "random_mean=" << format_fixed(report.random_baseline.mean, 6) << '\n';
  out << "random_std=" << format_fixed(report.random_baseline.std_dev, 6) << '\n';
  out << "margin=" << format_double(report.margin) << '\n';
  out << "verdict=" << to_string(report.verdict) << '\n';
  out << '\n';
  out << "pair set      mean     std      evaluated  skipped\n";
  auto row = [&out](const char* name, const PairStats& s) {
    std::string mean = format_fixed(s.mean, 4);
    std::string sd = format_fixed(s.std_dev, 4);
    out << name << "  " << mean << "   " << sd << "   ";
    std::string n = std::to_string(s.n_evaluated);
    out << n << std::string(11 - std::min<std::size_t>(n.size(), 10), ' ')
        << s.n_skipped_oov << '\n';
  };
  row("homophone ", report.homophone);
  row("random    ", report.random_baseline);
  out << "verdict: " << to_string(report.verdict) << " (margin "
      << format_double(report.margin) << ")\n";
}

void write_forensic_pairs_csv(const ForensicReport& report, std::ostream& out) {
  out << "word_a,word_b,similarity,homophone_rank\n";
  for (const auto& p : report.per_pair) {
    out << p.word_a << ',' << p.word_b << ',' << format_fixed(p.similarity, 6) << ','
        << p.homophone_rank << '\n';
  }
}

}  // namespace s2v
