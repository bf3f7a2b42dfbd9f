#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace s2v {

/// Immutable word -> vector table. Entries keep file order so that
/// serialization round-trips byte-identically. Unit-norm copies of every
/// vector are cached at construction; similarity queries are dot products
/// of those cached units, which makes thousands of pair lookups cheap and
/// makes cosine invariant under positive rescaling of the stored vectors.
///
/// Construction is single-threaded; afterwards the table is read-only and
/// safe to query from any number of threads.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;

  // Builds a table from (word, vector) entries in the given order.
  // Throws DuplicateWord / ShapeError on invariant violations.
  EmbeddingTable(std::size_t dim,
                 std::vector<std::pair<std::string, std::vector<double>>> entries);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  bool contains(std::string_view word) const;

  // Insertion-ordered word list.
  const std::vector<std::string>& words() const { return words_; }

  // Raw stored vector (throws WordNotFound).
  const std::vector<double>& vector_of(std::string_view word) const;

  // L2 norm of the stored vector (throws WordNotFound).
  double norm_of(std::string_view word) const;

  // Cosine similarity of two stored vectors, computed as the dot product of
  // the cached unit vectors. Element products commute exactly and the
  // summation runs in index order, so cosine(a,b) == cosine(b,a) bitwise.
  // Throws WordNotFound / DegenerateVector.
  double cosine(std::string_view w1, std::string_view w2) const;

  // The k most similar words to `query` (query excluded), similarity
  // descending, ties broken by ascending word order. Exact full scan.
  // Throws WordNotFound; throws InvalidK unless 1 <= k < size().
  std::vector<std::pair<std::string, double>> knn(std::string_view query,
                                                  std::size_t k) const;

  // 1-based position of `target` in the full similarity-descending neighbor
  // list of `query`, with the same tie order as knn.
  std::size_t rank_of(std::string_view query, std::string_view target) const;

 private:
  std::size_t index_of(std::string_view word) const;  // throws WordNotFound
  double cosine_by_index(std::size_t a, std::size_t b) const;

  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<std::vector<double>> vectors_;
  std::vector<std::vector<double>> units_;
  std::vector<double> norms_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Parses the embedding text format: an optional "count dim" header line
/// (auto-detected: exactly two integer tokens) followed by one entry per
/// line, `word v1 ... v_dim`. Words are lowercased. Throws FormatError with
/// the offending line number, or DuplicateWord.
EmbeddingTable load_embeddings(std::istream& in);
EmbeddingTable load_embeddings_file(const std::string& path);

/// Writes `count dim` then one entry per line in insertion order. Floats use
/// the shortest round-trip decimal form, so load(save(t)) == t exactly.
void save_embeddings(const EmbeddingTable& table, std::ostream& out);
void save_embeddings_file(const EmbeddingTable& table, const std::string& path);

}  // namespace s2v
