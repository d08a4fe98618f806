#include <gtest/gtest.h>

#include <cmath>

#include "capnn/partitions.hpp"
#include "capnn/rng.hpp"

namespace capnn {
namespace {

Dyadic D(const char* s) { return Dyadic::parse(s); }

Trajectory from_points(const std::vector<Dyadic>& xs) {
  Trajectory tr;
  Time t = 1;
  for (const auto& x : xs) tr.samples.push_back({t++, x, Label(0), Provenance::iid});
  return tr;
}

TEST(Centered, LeftCellTwo) {
  const auto p = PartitionSpec::centered(D("1/2"));
  // Both lie in [1/4, 1/3).
  for (const char* x : {"19/64", "77/256", "1/4"}) {
    const CellId id = cell_id(p, D(x));
    EXPECT_EQ(id.kind, CellKind::left) << x;
    EXPECT_EQ(id.index, 2) << x;
    EXPECT_TRUE(cell_contains(p, id, D(x)));
  }
  EXPECT_EQ(cell_id(p, D("1/2")).kind, CellKind::center);
  EXPECT_EQ(cell_id(p, D("0")).index, 1);
}

TEST(Centered, RightCells) {
  const auto p = PartitionSpec::centered(D("1/2"));
  // Right cell k is (s + (1-s)/(k+1), s + (1-s)/k].
  EXPECT_EQ(cell_id(p, D("1")).index, 1);
  EXPECT_EQ(cell_id(p, D("3/4")).index, 2);
  EXPECT_EQ(cell_id(p, D("5/8")).index, 4);
}

TEST(Centered, IdAgreesWithMembership) {
  SeededStream s(1, 1);
  for (int i = 0; i < 500; ++i) {
    const auto p = PartitionSpec::centered(uniform_dyadic_bits(s, 1 + s.uniform_below(20)));
    const Dyadic x = uniform_dyadic_bits(s, 1 + s.uniform_below(40));
    const CellId id = cell_id(p, x);
    ASSERT_TRUE(cell_contains(p, id, x)) << p.to_string() << " " << x.to_string();
    CellId other = id;
    other.index += 1;
    EXPECT_FALSE(cell_contains(p, other, x));
  }
}

TEST(Grid, Examples) {
  const auto p = PartitionSpec::grid(D("1/2"));
  EXPECT_EQ(cell_id(p, D("1/4")).index, 0);
  EXPECT_EQ(cell_id(p, D("3/4")).index, 1);
  EXPECT_EQ(cell_id(p, D("1")).index, 1);
  EXPECT_EQ(*p.cell_count(), 2);
  EXPECT_EQ(*PartitionSpec::grid(D("3/8")).cell_count(), 3);
  EXPECT_EQ(cell_id(PartitionSpec::grid(D("3/8")), D("1")).index, 2);
  EXPECT_THROW(PartitionSpec::grid(Dyadic::zero()), std::invalid_argument);
}

TEST(Grid, IdAgreesWithMembership) {
  SeededStream s(2, 2);
  for (int i = 0; i < 500; ++i) {
    const auto p = PartitionSpec::grid(Dyadic::normalize(1 + s.uniform_below(255), 8));
    const Dyadic x = uniform_dyadic_bits(s, 1 + s.uniform_below(30));
    ASSERT_TRUE(cell_contains(p, cell_id(p, x), x)) << p.to_string() << " " << x.to_string();
  }
  const auto p = PartitionSpec::grid(D("3/8"));
  EXPECT_TRUE(cell_contains(p, cell_id(p, D("1")), D("1")));
}

TEST(Product, ComponentsAndText) {
  const auto p = PartitionSpec::parse("grid:1/2^1*centered:1/2^2");
  ASSERT_EQ(p.kind(), PartitionSpec::Kind::product);
  EXPECT_EQ(PartitionSpec::parse(p.to_string()), p);
  const CellId id = cell_id(p, D("1/8"));
  ASSERT_EQ(id.parts.size(), 2u);
  EXPECT_EQ(id.parts[0].index, 0);
  EXPECT_EQ(id.parts[1].kind, CellKind::left);
  EXPECT_TRUE(cell_contains(p, id, D("1/8")));
  EXPECT_FALSE(p.cell_count().has_value());
}

TEST(VisitCurve, Examples) {
  std::vector<Dyadic> xs;
  for (int i = 0; i < 100; ++i) xs.push_back(i % 3 ? D("1/4") : D("3/4"));
  const auto curve = cells_visited_curve(from_points(xs), PartitionSpec::grid(D("1/2")), {10, 100});
  EXPECT_EQ(curve[0].count, 2u);
  EXPECT_EQ(curve[1].count, 2u);

  std::vector<Dyadic> fresh;
  for (std::uint64_t t = 1; t <= 64; ++t) fresh.push_back(Dyadic::normalize(2 * t - 1, 7));
  const auto c2 = cells_visited_curve(from_points(fresh), PartitionSpec::distinct_points(), {8, 64});
  EXPECT_EQ(c2[0].count, 8u);
  EXPECT_EQ(c2[1].count, 64u);
  const auto c3 = cells_visited_curve(from_points(fresh), PartitionSpec::grid(D("1/2^3")), {64});
  EXPECT_LE(c3[0].count, 8u);

  EXPECT_THROW(cells_visited_curve(from_points(fresh), PartitionSpec::grid(D("1/2")), {65}),
               std::invalid_argument);
}

TEST(SmvReport, Verdicts) {
  EXPECT_EQ(smv_ratio_report({{100, 100}, {1000, 1000}}).verdict, SmvVerdict::linear);
  EXPECT_EQ(smv_ratio_report({{100, 5}, {1000, 5}, {10000, 5}}).verdict, SmvVerdict::shrinking);
  const auto r = smv_ratio_report({{100, 10}, {10000, 100}});
  EXPECT_DOUBLE_EQ(r.rows[0].ratio, 0.1);
  EXPECT_DOUBLE_EQ(r.rows[1].ratio, 0.01);
  EXPECT_EQ(r.verdict, SmvVerdict::shrinking);
  EXPECT_EQ(smv_ratio_report({{100, 30}, {1000, 300}}).verdict, SmvVerdict::flat);
  EXPECT_THROW(smv_ratio_report({}), std::invalid_argument);
}

TEST(PartitionSpec, TextRoundTrip) {
  for (const char* t : {"centered:1/2^1", "grid:1/2^10", "points", "grid:1/2^2*points"}) {
    EXPECT_EQ(PartitionSpec::parse(t).to_string(), t);
  }
  EXPECT_THROW(PartitionSpec::parse("bogus"), std::invalid_argument);
}

}  // namespace
}  // namespace capnn
