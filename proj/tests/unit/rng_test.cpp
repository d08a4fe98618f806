#include <gtest/gtest.h>

#include <set>

#include "capnn/rng.hpp"

namespace capnn {
namespace {

// Known-answer vectors published with the Random123 library.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                          {0xffffffff, 0xffffffff}),
            (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                          {0xa4093822, 0x299f31d0}),
            (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(SeededStream, ReproducibleAndLabelSeparated) {
  SeededStream a(42, stream_label(StreamPurpose::anchor, 3));
  SeededStream b(42, stream_label(StreamPurpose::anchor, 3));
  SeededStream c(42, stream_label(StreamPurpose::offset, 3));
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u32();
    EXPECT_EQ(x, b.next_u32());
    differs = differs || x != c.next_u32();
  }
  EXPECT_TRUE(differs);
  EXPECT_EQ(a.counter(), 100u);
}

TEST(SeededStream, UniformBelowStaysInRange) {
  SeededStream s(1, 1);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = s.uniform_below(7);
    ASSERT_LT(v, 7u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
  EXPECT_EQ(s.uniform_below(1), 0u);
}

TEST(SeededStream, UniformBitsWidth) {
  SeededStream s(2, 2);
  for (std::uint64_t bits : {1u, 31u, 32u, 33u, 100u, 4096u}) {
    const mpz_class v = s.uniform_bits(bits);
    EXPECT_GE(v, 0);
    EXPECT_LE(mpz_sizeinbase(v.get_mpz_t(), 2), bits);
  }
}

TEST(UniformDyadic, OrderIsExact) {
  SeededStream s(3, 3);
  for (std::uint64_t p : {1u, 2u, 5u, 64u, 300u}) {
    for (int i = 0; i < 50; ++i) EXPECT_EQ(order_of(uniform_dyadic_order(s, p)), p);
  }
}

TEST(UniformDyadic, BitsBoundExponent) {
  SeededStream s(4, 4);
  for (int i = 0; i < 200; ++i) EXPECT_LE(uniform_dyadic_bits(s, 32).exponent(), 32u);
}

TEST(DeriveSeed, DistinctPerIndex) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(derive_seed(7, i));
  EXPECT_EQ(seeds.size(), 1000u);
  EXPECT_EQ(derive_seed(7, 5), derive_seed(7, 5));
  EXPECT_NE(derive_seed(7, 5), derive_seed(8, 5));
}

}  // namespace
}  // namespace capnn
