#include "s2v/embedding_table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "s2v/errors.hpp"
#include "s2v/text.hpp"

namespace s2v {

EmbeddingTable::EmbeddingTable(
    std::size_t dim, std::vector<std::pair<std::string, std::vector<double>>> entries)
    : dim_(dim) {
  words_.reserve(entries.size());
  vectors_.reserve(entries.size());
  units_.reserve(entries.size());
  norms_.reserve(entries.size());
  for (auto& [word, vec] : entries) {
    if (word.empty()) throw ShapeError("empty word");
    if (vec.size() != dim_) {
      throw ShapeError("vector for '" + word + "' has length " +
                       std::to_string(vec.size()) + ", expected " + std::to_string(dim_));
    }
    if (index_.contains(word)) throw DuplicateWord(word);
    index_.emplace(word, words_.size());
    double sq = 0.0;
    for (double v : vec) sq += v * v;
    const double norm = std::sqrt(sq);
    std::vector<double> unit(vec.size(), 0.0);
    if (norm > 0.0) {
      for (std::size_t i = 0; i < vec.size(); ++i) unit[i] = vec[i] / norm;
    }
    words_.push_back(word);
    vectors_.push_back(std::move(vec));
    units_.push_back(std::move(unit));
    norms_.push_back(norm);
  }
}

bool EmbeddingTable::contains(std::string_view word) const {
  return index_.find(std::string(word)) != index_.end();
}

std::size_t EmbeddingTable::index_of(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) throw WordNotFound(std::string(word));
  return it->second;
}

const std::vector<double>& EmbeddingTable::vector_of(std::string_view word) const {
  return vectors_[index_of(word)];
}

double EmbeddingTable::norm_of(std::string_view word) const {
  return norms_[index_of(word)];
}

double EmbeddingTable::cosine_by_index(std::size_t a, std::size_t b) const {
  const auto& ua = units_[a];
  const auto& ub = units_[b];
  double dot = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) dot += ua[i] * ub[i];
  return dot;
}

double EmbeddingTable::cosine(std::string_view w1, std::string_view w2) const {
  const std::size_t a = index_of(w1);
  const std::size_t b = index_of(w2);
  if (norms_[a] == 0.0) throw DegenerateVector(std::string(w1));
  if (norms_[b] == 0.0) throw DegenerateVector(std::string(w2));
  return cosine_by_index(a, b);
}

std::vector<std::pair<std::string, double>> EmbeddingTable::knn(std::string_view query,
                                                                std::size_t k) const {
  const std::size_t q = index_of(query);
  if (k < 1 || k >= size()) {
    throw InvalidK("k must satisfy 1 <= k < vocabulary size, got " + std::to_string(k));
  }
  if (norms_[q] == 0.0) throw DegenerateVector(std::string(query));

  std::vector<std::pair<double, std::size_t>> scored;  // (similarity, index)
  scored.reserve(size() - 1);
  for (std::size_t i = 0; i < size(); ++i) {
    if (i == q) continue;
    scored.emplace_back(cosine_by_index(q, i), i);
  }
  const auto better = [this](const auto& lhs, const auto& rhs) {
    if (lhs.first != rhs.first) return lhs.first > rhs.first;
    return words_[lhs.second] < words_[rhs.second];
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k),
                    scored.end(), better);
  std::vector<std::pair<std::string, double>> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.emplace_back(words_[scored[i].second], scored[i].first);
  }
  return out;
}

std::size_t EmbeddingTable::rank_of(std::string_view query, std::string_view target) const {
  const std::size_t q = index_of(query);
  const std::size_t t = index_of(target);
  if (q == t) throw InvalidK("rank of a word against itself is undefined");
  if (norms_[q] == 0.0) throw DegenerateVector(std::string(query));
  const double target_sim = cosine_by_index(q, t);
  // Count neighbors strictly ahead of `target` under (similarity desc, word asc).
  std::size_t ahead = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (i == q || i == t) continue;
    const double sim = cosine_by_index(q, i);
    if (sim > target_sim || (sim == target_sim && words_[i] < words_[t])) ++ahead;
  }
  return ahead + 1;
}

namespace {

struct ParsedLine {
  std::string word;
  std::vector<double> values;
};

ParsedLine parse_entry(const std::vector<std::string>& tokens, std::size_t line_no) {
  ParsedLine entry;
  entry.word = to_lower(tokens[0]);
  entry.values.reserve(tokens.size() - 1);
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    auto v = parse_double(tokens[i]);
    if (!v) throw FormatError(line_no, "non-numeric field '" + tokens[i] + "'");
    entry.values.push_back(*v);
  }
  return entry;
}

}  // namespace

EmbeddingTable load_embeddings(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_checked = false;
  long long header_count = -1;
  long long header_dim = -1;
  std::size_t dim = 0;
  std::vector<std::pair<std::string, std::vector<double>>> entries;

  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (!header_checked) {
      header_checked = true;
      if (tokens.size() == 2) {
        auto a = parse_integer(tokens[0]);
        auto b = parse_integer(tokens[1]);
        if (a && b) {
          header_count = *a;
          header_dim = *b;
          continue;
        }
      }
    }
    if (tokens.size() < 2) throw FormatError(line_no, "entry needs a word and at least one value");
    auto entry = parse_entry(tokens, line_no);
    if (entries.empty()) {
      dim = entry.values.size();
      if (header_dim >= 0 && static_cast<long long>(dim) != header_dim) {
        throw FormatError(line_no, "entry dimension " + std::to_string(dim) +
                                       " does not match header dim " + std::to_string(header_dim));
      }
    } else if (entry.values.size() != dim) {
      throw FormatError(line_no, "inconsistent dimension: got " +
                                     std::to_string(entry.values.size()) + ", expected " +
                                     std::to_string(dim));
    }
    entries.emplace_back(std::move(entry.word), std::move(entry.values));
  }
  if (header_count >= 0 && static_cast<long long>(entries.size()) != header_count) {
    throw FormatError(line_no, "header declares " + std::to_string(header_count) +
                                   " entries, file has " + std::to_string(entries.size()));
  }
  // Duplicate detection happens in the constructor.
  return EmbeddingTable(dim, std::move(entries));
}

EmbeddingTable load_embeddings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embeddings file: " + path);
  return load_embeddings(in);
}

void save_embeddings(const EmbeddingTable& table, std::ostream& out) {
  out << table.size() << ' ' << table.dim() << '\n';
  for (const auto& word : table.words()) {
    out << word;
    for (double v : table.vector_of(word)) {
      out << ' ' << format_double(v);
    }
    out << '\n';
  }
}

void save_embeddings_file(const EmbeddingTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file: " + path);
  save_embeddings(table, out);
}

}  // namespace s2v
