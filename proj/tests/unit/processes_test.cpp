#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "capnn/error.hpp"
#include "capnn/learners.hpp"
#include "capnn/processes.hpp"

namespace capnn {
namespace {

Dyadic D(const char* s) { return Dyadic::parse(s); }

TEST(Schedule, OneNnBlockStarts) {
  const ScheduleParams s = ScheduleParams::one_nn_desk(100);
  const std::vector<std::uint64_t> expect{1, 3, 6, 9, 13};
  for (std::uint64_t k = 1; k <= 5; ++k) EXPECT_EQ(s.n(k), expect[k - 1]) << k;
  ScheduleParams exact = s;
  exact.preset = SchedulePreset::paper_exact;
  for (std::uint64_t k = 1; k <= 5; ++k) EXPECT_EQ(exact.n(k), expect[k - 1]) << k;
  EXPECT_EQ(exact.p(4), 16u);
  EXPECT_EQ(s.p(2), 2 * s.n(3) + 2 + s.density_guard);
}

TEST(Schedule, KnnDeskValues) {
  const ScheduleParams s = ScheduleParams::knn_desk(1000);
  EXPECT_EQ(s.n(10), 100u);
  EXPECT_EQ(s.n(11) - s.n(10), 21u);
  EXPECT_EQ(s.d(10), 15u);  // ceil(4 log2 12) = ceil(14.34)
  EXPECT_EQ(s.d(2), 8u);    // 4 log2 4 = 8 exactly
  EXPECT_LT(s.d(10), 21u);
}

TEST(Schedule, BlocksTileTheHorizon) {
  for (auto s : {ScheduleParams::one_nn_desk(777), ScheduleParams::knn_desk(777)}) {
    Time next = 1;
    for (const Block& b : s.blocks()) {
      EXPECT_EQ(b.start, next);
      next += b.length;
    }
    EXPECT_EQ(next, 778u);
  }
}

TEST(Schedule, ValidateRejectsBadParameters) {
  ScheduleParams s = ScheduleParams::one_nn_desk(1000);
  s.exponent_cap = 200;
  EXPECT_THROW(s.validate(), PrecisionError);

  ScheduleParams k = ScheduleParams::knn_desk(1000);
  k.preset = SchedulePreset::paper_exact;
  k.epsilon = 0.1;  // (1.2 / 0.8) = 1.5 is not below 1 + delta / 2
  EXPECT_THROW(k.validate(), ConfigError);

  ScheduleParams weak = ScheduleParams::knn_desk(5000);
  weak.paired_schedule = KnnSchedule::floor_sqrt();
  EXPECT_THROW(weak.validate(), ConfigError);
}

TEST(Schedule, KnnWarnsAboutTruncatedBlocks) {
  const auto warnings = ScheduleParams::knn_desk(400).validate();
  ASSERT_FALSE(warnings.empty());
  EXPECT_NE(warnings.front().find("truncated"), std::string::npos);
}

TEST(PerturbedPoint, DisplayedExample) {
  EXPECT_EQ(perturbed_point(D("3/16"), D("1/2"), 5), D("101/512"));
  EXPECT_EQ(perturbed_point(D("1/2"), D("0"), 1), D("1/4"));
}

TEST(EnumeratedPoint, Sequence) {
  const char* expect[] = {"1/2", "1/4", "3/4", "1/8", "3/8", "5/8", "7/8", "1/16"};
  for (std::uint64_t t = 1; t <= 8; ++t) EXPECT_EQ(enumerated_point(t), D(expect[t - 1]));
}

TEST(OneNnProcess, BlockStructure) {
  const Trajectory tr = gen_1nn_adversarial(3, ScheduleParams::one_nn_desk(2000));
  ASSERT_EQ(tr.samples.size(), 2000u);
  for (const BlockDraw& bd : tr.blocks) {
    const LabeledSample& a = tr.samples[bd.block.start - 1];
    EXPECT_EQ(a.provenance, Provenance::anchor_dyadic);
    EXPECT_EQ(a.x, bd.anchor);
    EXPECT_EQ(a.y, Label(1));
    EXPECT_EQ(order_of(bd.anchor), bd.block.p);
    if (bd.block.length > 1) {
      const LabeledSample& first = tr.samples[bd.block.start];
      EXPECT_EQ(first.provenance, Provenance::perturbed);
      EXPECT_EQ(first.y, Label(0));
      // |X - D| <= 2^-(n_k + 2).
      const std::uint64_t nk = ScheduleParams::one_nn_desk(2000).n(bd.block.k);
      EXPECT_TRUE(compare(abs_diff(first.x, bd.anchor), Dyadic::inverse_pow2(nk + 2)) <= 0);
    }
  }
}

// Every perturbed point's nearest earlier point is its block anchor.
TEST(OneNnProcess, AnchorIsNearestNeighbor) {
  const Trajectory tr = gen_1nn_adversarial(5, ScheduleParams::one_nn_desk(3000));
  Learner l(LearnerConfig::one_nn());
  for (const auto& s : tr.samples) l.step(s.x, s.y);
  const LearnerState st = l.state();
  for (const BlockDraw& bd : tr.blocks) {
    for (Time t = bd.block.start + 1; t < bd.block.start + bd.block.length; ++t) {
      EXPECT_EQ(st.parent[t - 1], bd.block.start) << "t=" << t;
    }
  }
}

TEST(KnnProcess, PlantedNeighborsThenPerturbed) {
  const ScheduleParams params = ScheduleParams::knn_desk(3000);
  const Trajectory tr = gen_knn_adversarial(9, params);
  for (const BlockDraw& bd : tr.blocks) {
    const std::uint64_t planted = std::min(bd.block.d + 1, bd.block.length);
    for (std::uint64_t i = 0; i < bd.block.length; ++i) {
      const LabeledSample& s = tr.samples[bd.block.start - 1 + i];
      if (i < planted) {
        EXPECT_EQ(s.x, nth_closest_dyadic(bd.anchor, bd.block.p, i + 1));
        EXPECT_EQ(s.y, Label(1));
      } else {
        EXPECT_EQ(s.provenance, Provenance::perturbed);
        EXPECT_EQ(s.y, Label(0));
      }
    }
  }
}

TEST(Process, SameSeedSameTrajectory) {
  GeneratorConfig g;
  g.horizon = 500;
  g.schedule = ScheduleParams::one_nn_desk(500);
  EXPECT_EQ(generate(g, 11).samples, generate(g, 11).samples);
  EXPECT_NE(generate(g, 11).samples, generate(g, 12).samples);
}

TEST(SimpleProcesses, Examples) {
  const std::vector<Dyadic> support{D("1/4"), D("3/4")};
  for (const auto& s : gen_finite_support(1, support, 200, TargetFunction::dyadics()).samples) {
    EXPECT_TRUE(s.x == support[0] || s.x == support[1]);
  }
  std::set<Dyadic, DyadicLess> seen;
  for (const auto& s : gen_enumerated_fresh(8, TargetFunction::dyadics()).samples) seen.insert(s.x);
  EXPECT_EQ(seen.size(), 8u);
  for (const auto& s : gen_iid_uniform(1, 300, 12, TargetFunction::dyadics()).samples) {
    EXPECT_LE(s.x.exponent(), 12u);
    EXPECT_EQ(s.y, Label(0));
  }
  EXPECT_THROW(gen_finite_support(1, {}, 10, TargetFunction::dyadics()), ConfigError);
}

TEST(TrajectoryIo, BinaryRoundTripAndCsv) {
  const Trajectory tr = gen_knn_adversarial(2, ScheduleParams::knn_desk(300));
  const Trajectory back = decode_trajectory(encode_trajectory(tr));
  EXPECT_EQ(back.samples, tr.samples);
  EXPECT_EQ(back.seed, tr.seed);
  EXPECT_EQ(back.generator, tr.generator);

  std::ostringstream csv;
  write_trajectory_csv(csv, tr);
  const std::string text = csv.str();
  EXPECT_EQ(text.rfind("t,x,y,provenance\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 301);

  auto bytes = encode_trajectory(tr);
  bytes[0] ^= 0xff;
  EXPECT_THROW(decode_trajectory(bytes), std::invalid_argument);
}

TEST(ProcessKind, TextRoundTrip) {
  for (auto k : {ProcessKind::adversarial_1nn, ProcessKind::adversarial_knn,
                 ProcessKind::iid_uniform, ProcessKind::enumerated_fresh,
                 ProcessKind::finite_support}) {
    EXPECT_EQ(parse_process_kind(to_string(k)), k);
  }
}

}  // namespace
}  // namespace capnn
