#include <gtest/gtest.h>

#include <set>

#include "bootcopula/rng.hpp"

using namespace bootcopula;

// Known-answer vectors for Philox4x32-10.
TEST(Philox, KnownAnswers) {
  using A4 = std::array<std::uint32_t, 4>;
  EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RngStream, Deterministic) {
  RngStream a(42, 3), b(42, 3);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
  EXPECT_EQ(a.counter(), 1000u);
}

TEST(RngStream, RandomAccessMatchesSequential) {
  RngStream seq(7, 1);
  std::vector<std::uint64_t> values;
  for (int i = 0; i < 100; ++i) values.push_back(seq.next_u64());
  const RngStream base(7, 1);
  for (std::uint64_t i = 0; i < 100; i += 7) {
    auto r = base.at(i);
    EXPECT_EQ(r.next_u64(), values[i]);
  }
}

TEST(RngStream, StreamsAndSeedsDiffer) {
  std::set<std::uint64_t> first;
  for (std::uint64_t s = 0; s < 50; ++s) {
    first.insert(RngStream(s, 0).next_u64());
    first.insert(RngStream(0, s + 1).next_u64());
  }
  EXPECT_EQ(first.size(), 100u);
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(RngStream, UniformStrictlyInsideUnitInterval) {
  RngStream r(1);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.next_uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000.0, 0.5, 0.005);
}
