#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "s2v/rng.hpp"

using namespace s2v;

// Frozen reference sequences, generated from an independent transcription of
// the published splitmix64 / xoshiro256** algorithms. These pin the stream
// so every seeded experiment stays reproducible across platforms.
TEST_CASE("splitmix64 matches the published sequence") {
  SplitMix64 sm(0);
  const std::uint64_t expected0[] = {16294208416658607535ULL, 7960286522194355700ULL,
                                     487617019471545679ULL, 17909611376780542444ULL};
  for (auto e : expected0) CHECK(sm.next() == e);

  SplitMix64 sm42(42);
  const std::uint64_t expected42[] = {13679457532755275413ULL, 2949826092126892291ULL,
                                      5139283748462763858ULL, 6349198060258255764ULL};
  for (auto e : expected42) CHECK(sm42.next() == e);
}

TEST_CASE("xoshiro256** stream is stable for a given seed") {
  Rng rng(0);
  const std::uint64_t expected0[] = {11091344671253066420ULL, 13793997310169335082ULL,
                                     1900383378846508768ULL,  7684712102626143532ULL,
                                     13521403990117723737ULL, 18442103541295991498ULL};
  for (auto e : expected0) CHECK(rng.next_u64() == e);

  Rng rng2(12345);
  const std::uint64_t expected12345[] = {13720838825685603483ULL, 2398916695208396998ULL,
                                         17770384849984869256ULL, 891717726879801395ULL,
                                         10241316046318454344ULL, 196975429884907396ULL};
  for (auto e : expected12345) CHECK(rng2.next_u64() == e);
}

TEST_CASE("bounded draws stay in range and reproduce") {
  Rng a(7);
  Rng b(7);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t x = a.next_below(17);
    CHECK(x < 17);
    CHECK(x == b.next_below(17));
  }
}

TEST_CASE("bounded draws cover the full range roughly uniformly") {
  Rng rng(3);
  std::vector<int> counts(8, 0);
  const int draws = 80000;
  for (int i = 0; i < draws; ++i) ++counts[rng.next_below(8)];
  for (int c : counts) {
    CHECK(c > draws / 8 - 800);
    CHECK(c < draws / 8 + 800);
  }
}

TEST_CASE("uniform doubles live in [0,1)") {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal draws have sane moments and reproduce") {
  Rng a(99);
  Rng b(99);
  double sum = 0.0, sq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = a.next_normal();
    CHECK(x == b.next_normal());
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.03);
}
