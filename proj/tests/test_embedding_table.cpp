#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "s2v/embedding_table.hpp"
#include "s2v/errors.hpp"
#include "s2v/rng.hpp"
#include "s2v/text.hpp"

using namespace s2v;

namespace {

EmbeddingTable make_table(std::size_t dim,
                          std::vector<std::pair<std::string, std::vector<double>>> entries) {
  return EmbeddingTable(dim, std::move(entries));
}

EmbeddingTable random_table(std::size_t words, std::size_t dim, Rng& rng) {
  std::vector<std::pair<std::string, std::vector<double>>> entries;
  for (std::size_t i = 0; i < words; ++i) {
    std::vector<double> v(dim);
    for (auto& x : v) x = rng.next_double(-3.0, 3.0);
    entries.emplace_back("word" + std::to_string(i), std::move(v));
  }
  return EmbeddingTable(dim, std::move(entries));
}

}  // namespace

TEST_CASE("single entry line parses") {
  std::istringstream in("a 1.0 2.0\n");
  const auto table = load_embeddings(in);
  CHECK(table.dim() == 2);
  CHECK(table.size() == 1);
  CHECK(table.vector_of("a") == std::vector<double>{1.0, 2.0});
}

TEST_CASE("header line is auto-detected") {
  std::istringstream with_header("2 3\nfoo 1 2 3\nbar 4 5 6\n");
  const auto a = load_embeddings(with_header);
  CHECK(a.size() == 2);
  CHECK(a.dim() == 3);

  std::istringstream headerless("foo 1 2 3\nbar 4 5 6\n");
  const auto b = load_embeddings(headerless);
  CHECK(b.size() == 2);
  CHECK(b.dim() == 3);
}

TEST_CASE("words are lowercased at load") {
  std::istringstream in("Apple 1 2\nBANANA 3 4\n");
  const auto table = load_embeddings(in);
  CHECK(table.contains("apple"));
  CHECK(table.contains("banana"));
  CHECK_FALSE(table.contains("Apple"));
}

TEST_CASE("format errors carry the line number") {
  std::istringstream bad_dim("a 1 2\nb 1 2 3\n");
  CHECK_THROWS_AS(load_embeddings(bad_dim), FormatError);
  try {
    std::istringstream again("a 1 2\nb 1 2 3\n");
    load_embeddings(again);
  } catch (const FormatError& e) {
    CHECK(e.line() == 2);
  }

  std::istringstream bad_num("a 1 x\n");
  CHECK_THROWS_AS(load_embeddings(bad_num), FormatError);

  std::istringstream dup("a 1 2\nA 3 4\n");
  CHECK_THROWS_AS(load_embeddings(dup), DuplicateWord);

  std::istringstream bad_count("3 2\na 1 2\nb 3 4\n");
  CHECK_THROWS_AS(load_embeddings(bad_count), FormatError);
}

TEST_CASE("save/load round-trips 100 random tables byte-stably") {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t words = 1 + rng.next_below(12);
    const std::size_t dim = 1 + rng.next_below(8);
    const auto table = random_table(words, dim, rng);

    std::ostringstream first;
    save_embeddings(table, first);
    std::istringstream back(first.str());
    const auto reloaded = load_embeddings(back);

    REQUIRE(reloaded.size() == table.size());
    REQUIRE(reloaded.dim() == table.dim());
    CHECK(reloaded.words() == table.words());
    for (const auto& word : table.words()) {
      const auto& a = table.vector_of(word);
      const auto& b = reloaded.vector_of(word);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);  // exact
    }
    std::ostringstream second;
    save_embeddings(reloaded, second);
    CHECK(first.str() == second.str());
  }
}

TEST_CASE("cosine of identical and orthogonal vectors") {
  const auto table = make_table(2, {{"x", {3.0, 4.0}}, {"e1", {1.0, 0.0}}, {"e2", {0.0, 1.0}}});
  CHECK(table.cosine("x", "x") == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(table.cosine("e1", "e2") == 0.0);
}

TEST_CASE("cosine errors") {
  const auto table = make_table(2, {{"a", {1.0, 2.0}}, {"z", {0.0, 0.0}}});
  CHECK_THROWS_AS(table.cosine("a", "missing"), WordNotFound);
  CHECK_THROWS_AS(table.cosine("a", "z"), DegenerateVector);
}

TEST_CASE("cosine is bitwise symmetric") {
  Rng rng(5);
  const auto table = random_table(20, 7, rng);
  const auto& words = table.words();
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = i + 1; j < words.size(); ++j) {
      CHECK(table.cosine(words[i], words[j]) == table.cosine(words[j], words[i]));
    }
  }
}

TEST_CASE("positive power-of-two scaling leaves cosine bit-unchanged") {
  Rng rng(6);
  std::vector<std::pair<std::string, std::vector<double>>> entries;
  std::vector<std::pair<std::string, std::vector<double>>> scaled;
  for (int i = 0; i < 10; ++i) {
    std::vector<double> v(5);
    for (auto& x : v) x = rng.next_double(-2.0, 2.0);
    std::vector<double> sv(5);
    const double scale = i % 2 ? 0.25 : 1024.0;
    for (std::size_t k = 0; k < v.size(); ++k) sv[k] = scale * v[k];
    entries.emplace_back("w" + std::to_string(i), v);
    scaled.emplace_back("w" + std::to_string(i), sv);
  }
  const auto a = make_table(5, entries);
  const auto b = make_table(5, scaled);
  for (int i = 0; i < 10; ++i) {
    for (int j = i + 1; j < 10; ++j) {
      const auto wi = "w" + std::to_string(i);
      const auto wj = "w" + std::to_string(j);
      CHECK(a.cosine(wi, wj) == b.cosine(wi, wj));
    }
  }
}

TEST_CASE("arbitrary positive scaling leaves cosine unchanged to 1e-12") {
  Rng rng(7);
  std::vector<std::pair<std::string, std::vector<double>>> entries;
  std::vector<std::pair<std::string, std::vector<double>>> scaled;
  for (int i = 0; i < 10; ++i) {
    std::vector<double> v(5);
    for (auto& x : v) x = rng.next_double(-2.0, 2.0);
    std::vector<double> sv(5);
    for (std::size_t k = 0; k < v.size(); ++k) sv[k] = 3.7 * v[k];
    entries.emplace_back("w" + std::to_string(i), v);
    scaled.emplace_back("w" + std::to_string(i), sv);
  }
  const auto a = make_table(5, entries);
  const auto b = make_table(5, scaled);
  for (int i = 0; i < 10; ++i) {
    for (int j = i + 1; j < 10; ++j) {
      const auto wi = "w" + std::to_string(i);
      const auto wj = "w" + std::to_string(j);
      CHECK(a.cosine(wi, wj) == doctest::Approx(b.cosine(wi, wj)).epsilon(1e-12));
    }
  }
}

TEST_CASE("knn in a 2-word vocabulary returns the other word") {
  const auto table = make_table(2, {{"a", {1.0, 0.0}}, {"b", {0.0, 1.0}}});
  const auto nn = table.knn("a", 1);
  REQUIRE(nn.size() == 1);
  CHECK(nn[0].first == "b");
}

TEST_CASE("knn matches an exhaustive sort oracle") {
  Rng rng(17);
  const auto table = random_table(10, 5, rng);
  const auto& words = table.words();
  for (const auto& query : words) {
    // Oracle: full sort of all non-query words by (similarity desc, word asc).
    std::vector<std::pair<double, std::string>> expected;
    for (const auto& w : words) {
      if (w == query) continue;
      expected.emplace_back(table.cosine(query, w), w);
    }
    std::sort(expected.begin(), expected.end(), [](const auto& l, const auto& r) {
      if (l.first != r.first) return l.first > r.first;
      return l.second < r.second;
    });
    for (std::size_t k = 1; k < words.size(); ++k) {
      const auto got = table.knn(query, k);
      REQUIRE(got.size() == k);
      for (std::size_t i = 0; i < k; ++i) {
        CHECK(got[i].first == expected[i].second);
        CHECK(got[i].second == expected[i].first);
      }
    }
  }
}

TEST_CASE("knn(q,k) is a prefix of knn(q,k+1)") {
  Rng rng(23);
  const auto table = random_table(12, 4, rng);
  for (std::size_t k = 1; k + 1 < table.size(); ++k) {
    const auto a = table.knn("word0", k);
    const auto b = table.knn("word0", k + 1);
    for (std::size_t i = 0; i < k; ++i) CHECK(a[i] == b[i]);
  }
}

TEST_CASE("knn breaks ties by ascending word order") {
  // Three words with identical vectors tie at similarity 1.
  const auto table = make_table(
      2, {{"q", {1.0, 1.0}}, {"zeta", {2.0, 2.0}}, {"alpha", {3.0, 3.0}}, {"mid", {4.0, 4.0}}});
  const auto nn = table.knn("q", 3);
  CHECK(nn[0].first == "alpha");
  CHECK(nn[1].first == "mid");
  CHECK(nn[2].first == "zeta");
}

TEST_CASE("knn rejects out-of-range k") {
  const auto table = make_table(2, {{"a", {1.0, 0.0}}, {"b", {0.0, 1.0}}});
  CHECK_THROWS_AS(table.knn("a", 0), InvalidK);
  CHECK_THROWS_AS(table.knn("a", 2), InvalidK);
  CHECK_THROWS_AS(table.knn("missing", 1), WordNotFound);
}

TEST_CASE("float formatting round-trips exactly") {
  Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.next_double(-1e6, 1e6) * std::pow(10.0, -(int)rng.next_below(12));
    const auto s = format_double(x);
    CHECK(*parse_double(s) == x);
  }
}
