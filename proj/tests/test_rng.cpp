#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "photocount/rng.hpp"

using namespace photocount;

// Published test vectors for ten-round Philox4x32 (counter words v0..v3, key
// words k0..k1, expected output words).
TEST_CASE("philox4x32-10 known answers") {
  {
    std::uint32_t c[4] = {0, 0, 0, 0};
    philox::rounds(c, 0, 0);
    CHECK(c[0] == 0x6627e8d5u);
    CHECK(c[1] == 0xe169c58du);
    CHECK(c[2] == 0xbc57ac4cu);
    CHECK(c[3] == 0x9b00dbd8u);
  }
  {
    std::uint32_t c[4] = {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu};
    philox::rounds(c, 0xffffffffu, 0xffffffffu);
    CHECK(c[0] == 0x408f276du);
    CHECK(c[1] == 0x41c83b0eu);
    CHECK(c[2] == 0xa20bc7c6u);
    CHECK(c[3] == 0x6d5451fdu);
  }
  {
    std::uint32_t c[4] = {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u};
    philox::rounds(c, 0xa4093822u, 0x299f31d0u);
    CHECK(c[0] == 0xd16cfe09u);
    CHECK(c[1] == 0x94fdccebu);
    CHECK(c[2] == 0x5001e420u);
    CHECK(c[3] == 0x24126ea1u);
  }
}

TEST_CASE("draws are pure functions of (seed, stream, index)") {
  const CounterRng a(123);
  const CounterRng b(123);
  const CounterRng c(124);
  CHECK(a.normal(stream_id(7, 0), 99) == b.normal(stream_id(7, 0), 99));
  CHECK(a.uniform(stream_id(7, 1), 99) == b.uniform(stream_id(7, 1), 99));
  CHECK(a.normal(stream_id(7, 0), 99) != c.normal(stream_id(7, 0), 99));
  // tags separate lanes that share an index
  CHECK(a.normal(stream_id(7, 0), 99) != a.normal(stream_id(7, 2), 99));
  CHECK(a.normal(stream_id(7, 0), 99) != a.normal(stream_id(8, 0), 99));
}

TEST_CASE("uniform draws stay inside the open unit interval") {
  const CounterRng rng(2);
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double u = rng.uniform(stream_id(0, 1), i);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal draws have credible first moments") {
  const CounterRng rng(3);
  const int n = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal(stream_id(0, 0), static_cast<std::uint64_t>(i));
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::fabs(var - 1.0) < 0.02);
}

TEST_CASE("stream ids keep tag and lane bits apart") {
  const auto s = stream_id(0x00ab'cdef'1234'5678ull, 3);
  CHECK((s >> 56) == 3);
  CHECK((s & ((1ull << 56) - 1)) == 0x00ab'cdef'1234'5678ull);
}
