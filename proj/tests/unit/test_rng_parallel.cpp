#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "invasion/parallel.hpp"
#include "invasion/rng.hpp"

using namespace invasion;

// Known-answer vectors of the reference Philox4x32-10 implementation.
TEST(Philox, KnownAnswers) {
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;
  EXPECT_EQ(Philox::block(A4{0, 0, 0, 0}, A2{0, 0}),
            (A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(Philox::block(A4{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          A2{0xffffffffu, 0xffffffffu}),
            (A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(Philox::block(A4{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          A2{0xa4093822u, 0x299f31d0u}),
            (A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, StreamsAreReproducibleAndDistinct) {
  Philox a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
    EXPECT_NE(x, d.next_u64());
  }
}

TEST(Philox, UniformAndNormalMoments) {
  Philox r(1, 0);
  RunningStats u, z, z2;
  for (int i = 0; i < 200000; ++i) {
    const double x = r.uniform();
    ASSERT_GT(x, 0.0);
    ASSERT_LT(x, 1.0);
    u.add(x);
    const double n = r.normal();
    z.add(n);
    z2.add(n * n);
  }
  EXPECT_NEAR(u.mean, 0.5, 4 * u.std_error());
  EXPECT_NEAR(u.variance(), 1.0 / 12.0, 1e-3);
  EXPECT_NEAR(z.mean, 0.0, 4 * z.std_error());
  EXPECT_NEAR(z2.mean, 1.0, 4 * z2.std_error());
}

TEST(RunningStats, MergeMatchesSequential) {
  RunningStats all, a, b;
  for (int i = 0; i < 1000; ++i) {
    const double x = std::sin(i * 0.37) * 3 + i * 1e-3;
    all.add(x);
    (i < 321 ? a : b).add(x);
  }
  a.merge(b);
  EXPECT_EQ(a.n, all.n);
  EXPECT_NEAR(a.mean, all.mean, 1e-13);
  EXPECT_NEAR(a.variance(), all.variance(), 1e-11);
}

TEST(Parallel, ReductionIndependentOfWorkerCount) {
  auto f = [](std::uint64_t p) {
    Philox r(9, p);
    return r.normal();
  };
  const auto one = reduce_paths(20000, 1, f);
  const auto three = reduce_paths(20000, 3, f);
  const auto eight = reduce_paths(20000, 8, f);
  EXPECT_EQ(one.mean, three.mean);
  EXPECT_EQ(one.m2, three.m2);
  EXPECT_EQ(one.mean, eight.mean);
  EXPECT_EQ(one.n, 20000u);
}

TEST(Parallel, MapKeepsOrderAndRethrows) {
  const auto out = parallel_map<int>(50, 4, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], static_cast<int>(i * i));
  EXPECT_THROW(parallel_map<int>(10, 3,
                                 [](std::size_t i) -> int {
                                   if (i == 5) throw std::runtime_error("boom");
                                   return 0;
                                 }),
               std::runtime_error);
}
