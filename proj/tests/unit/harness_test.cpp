#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "capnn/harness.hpp"
#include "capnn/report.hpp"
#include "capnn/rng.hpp"

namespace capnn {
namespace {

Dyadic D(const char* s) { return Dyadic::parse(s); }

Trajectory from_points(const std::vector<Dyadic>& xs) {
  Trajectory tr;
  tr.generator = "fixed";
  Time t = 1;
  for (const auto& x : xs) tr.samples.push_back({t++, x, Label(0), Provenance::iid});
  return tr;
}

// Logs every call; tries to peek at the label before predicting.
class SpyLearner final : public OnlineLearner {
 public:
  explicit SpyLearner(std::vector<std::string>& log) : log_(log) {}
  Label predict(const Dyadic& x) override {
    log_.push_back("predict " + x.to_string() + (last_ ? " after " + std::to_string(last_->tag) : ""));
    return Label(0);
  }
  void reveal(Label y) override {
    log_.push_back("reveal " + std::to_string(y.tag));
    last_ = y;
  }

 private:
  std::vector<std::string>& log_;
  std::optional<Label> last_;
};

TEST(RunTrajectory, TwoCappedTraceErrors) {
  const Trajectory tr = from_points({D("1/4"), D("3/4"), D("5/16")});
  const RunReport r =
      run_trajectory(tr, TargetFunction::below(D("1/2")), LearnerConfig::kc1nn(2), {1, 2, 3});
  EXPECT_EQ(r.error_times, (std::vector<Time>{1, 2}));
  EXPECT_EQ(r.errors_through(1), 1u);
  EXPECT_EQ(r.errors_through(2), 2u);
  EXPECT_EQ(r.errors_through(3), 2u);
  EXPECT_DOUBLE_EQ(r.loss[2], 2.0 / 3.0);
  EXPECT_EQ(r.dataset_size, (std::vector<std::uint64_t>{1, 2, 2}));
  EXPECT_EQ(r.deletions, 1u);
  EXPECT_EQ(r.tree.max_children, 2u);
  EXPECT_EQ(r.tree.depth_histogram, (std::vector<std::uint64_t>{1, 2}));
}

TEST(RunTrajectory, MemorizationOnFiniteSupport) {
  const std::vector<Dyadic> support{D("1/4"), D("3/4")};
  const Trajectory tr = gen_finite_support(3, support, 1000, TargetFunction::below(D("1/2")));
  const RunReport r =
      run_trajectory(tr, TargetFunction::below(D("1/2")), LearnerConfig::memo(), {10, 1000});
  EXPECT_LE(r.error_times.size(), 2u);
  EXPECT_LE(r.loss[1], 2.0 / 1000.0);
}

TEST(RunTrajectory, ConstantTargetNeverErrs) {
  const Trajectory tr = gen_iid_uniform(1, 500, 16, TargetFunction::constant(Label(0)));
  const RunReport r = run_trajectory(tr, TargetFunction::constant(Label(0)),
                                     LearnerConfig::kc1nn(2), default_checkpoints(500));
  for (double l : r.loss) EXPECT_EQ(l, 0.0);
}

TEST(RunTrajectory, LossCurveReplaysFromErrorTimes) {
  const Trajectory tr = gen_1nn_adversarial(4, ScheduleParams::one_nn_desk(3000));
  const auto cps = default_checkpoints(3000);
  const RunReport r = run_trajectory(tr, TargetFunction::dyadics(), LearnerConfig::kc1nn(2), cps);
  for (std::size_t c = 0; c < cps.size(); ++c) {
    EXPECT_DOUBLE_EQ(r.loss[c], static_cast<double>(r.errors_through(cps[c])) / cps[c]);
    EXPECT_GE(r.loss[c], 0.0);
    EXPECT_LE(r.loss[c], 1.0);
  }
}

TEST(RunTrajectory, HorizonShortfallThrows) {
  const Trajectory tr = from_points({D("1/4")});
  EXPECT_THROW(run_trajectory(tr, TargetFunction::dyadics(), LearnerConfig::one_nn(), {2}),
               std::invalid_argument);
}

TEST(RunLearner, PredictionPrecedesReveal) {
  std::vector<std::string> log;
  SpyLearner spy(log);
  const Trajectory tr = from_points({D("1/4"), D("3/4")});
  run_learner(spy, tr, TargetFunction::below(D("1/2")), {2});
  EXPECT_EQ(log, (std::vector<std::string>{"predict 1/2^2", "reveal 1", "predict 3/2^2 after 1",
                                           "reveal 0"}));
}

TEST(DefaultCheckpoints, PowersOfTwoThenHorizon) {
  EXPECT_EQ(default_checkpoints(1000), (std::vector<std::uint64_t>{256, 512, 1000}));
  EXPECT_EQ(default_checkpoints(1024), (std::vector<std::uint64_t>{256, 512, 1024}));
  EXPECT_EQ(default_checkpoints(100), (std::vector<std::uint64_t>{100}));
}

TEST(MonteCarlo, SingleTrialEqualsItsCurve) {
  GeneratorConfig g;
  g.horizon = 1000;
  g.schedule = ScheduleParams::one_nn_desk(1000);
  const std::vector<std::uint64_t> cps{250, 500, 1000};
  const auto agg = run_monte_carlo(g, TargetFunction::dyadics(), {LearnerConfig::one_nn()}, cps,
                                   {1, 9, 1});
  const Trajectory tr = generate(g, derive_seed(9, 0));
  const RunReport r = run_trajectory(tr, TargetFunction::dyadics(), LearnerConfig::one_nn(), cps);
  for (std::size_t c = 0; c < cps.size(); ++c) {
    EXPECT_DOUBLE_EQ(agg[0].mean[c], r.loss[c]);
    EXPECT_DOUBLE_EQ(agg[0].q10[c], r.loss[c]);
  }
}

TEST(MonteCarlo, ConstantSetupHasNoSpread) {
  GeneratorConfig g;
  g.kind = ProcessKind::iid_uniform;
  g.horizon = 400;
  g.target = TargetFunction::constant(Label(0));
  const auto agg = run_monte_carlo(g, g.target, {LearnerConfig::one_nn()}, {400}, {5, 1, 2});
  EXPECT_EQ(agg[0].q10[0], agg[0].q90[0]);
  EXPECT_EQ(agg[0].min[0], agg[0].max[0]);
}

TEST(MonteCarlo, WorkerCountDoesNotChangeResults) {
  GeneratorConfig g;
  g.horizon = 800;
  g.schedule = ScheduleParams::one_nn_desk(800);
  const std::vector<LearnerConfig> ls{LearnerConfig::one_nn(), LearnerConfig::kc1nn(2)};
  const auto a = run_monte_carlo(g, TargetFunction::dyadics(), ls, {400, 800}, {6, 3, 1});
  const auto b = run_monte_carlo(g, TargetFunction::dyadics(), ls, {400, 800}, {6, 3, 3});
  ASSERT_EQ(a.size(), 2u);
  for (std::size_t l = 0; l < a.size(); ++l) {
    EXPECT_EQ(a[l].trial_errors, b[l].trial_errors);
    EXPECT_EQ(a[l].mean, b[l].mean);
    for (std::size_t c = 0; c < 2; ++c) {
      EXPECT_GE(a[l].mean[c], a[l].min[c]);
      EXPECT_LE(a[l].mean[c], a[l].max[c]);
    }
  }
}

TEST(Quantile, LinearInterpolation) {
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4, 5}, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(quantile({1, 2}, 0.1), 1.1);
  EXPECT_DOUBLE_EQ(quantile({4}, 0.9), 4.0);
  EXPECT_THROW(quantile({}, 0.5), std::invalid_argument);
}

TEST(Crf, Examples) {
  const Trajectory constant = from_points(std::vector<Dyadic>(50, D("1/4")));
  for (const auto& pt : crf_frequency(constant, IntervalSet::parse("[0,1/2)"), {10, 50})) {
    EXPECT_EQ(pt.frequency, 1.0);
  }
  const Trajectory mixed = from_points({D("0"), D("1/2"), D("1"), D("3/4")});
  EXPECT_EQ(crf_frequency(mixed, IntervalSet::parse("[0,1]"), {4})[0].frequency, 1.0);
  EXPECT_EQ(crf_frequency(mixed, IntervalSet::parse("[0,1/2)"), {4})[0].hits, 1u);
  EXPECT_EQ(crf_frequency(mixed, IntervalSet::parse("(0,1/2]u[3/4,3/4]"), {4})[0].hits, 2u);
}

TEST(Crf, MalformedIntervalsRejected) {
  EXPECT_THROW(IntervalSet::parse("[1/2,1/4]"), std::invalid_argument);
  EXPECT_THROW(IntervalSet::parse("[1/2,1/2)"), std::invalid_argument);
  EXPECT_THROW(IntervalSet::parse("[0,1/2"), std::invalid_argument);
  EXPECT_THROW(IntervalSet::parse("0,1/2"), std::invalid_argument);
  EXPECT_THROW(IntervalSet::parse(""), std::invalid_argument);
  EXPECT_EQ(IntervalSet::parse("[0,1/2)u(3/4,1]").to_string(), "[0/2^0,1/2^1)u(3/2^2,1/2^0]");
}

TEST(PathCheck, SingleNodeIsVacuous) {
  Learner l(LearnerConfig::kc1nn(2));
  l.step(D("1/2"), Label(1));
  const LearnerState st = l.state();
  const PathCheckResult r = path_inequality_check(build_tree(st), st.points, 1);
  EXPECT_TRUE(r.violations.empty());
  EXPECT_EQ(r.checked, 0u);
}

TEST(PathCheck, IdenticalPathsSkipped) {
  const std::vector<Dyadic> pts{D("1/4"), D("3/4")};
  EXPECT_FALSE(check_path_pair({1}, {1}, pts).has_value());
  EXPECT_FALSE(check_path_pair({2}, {1}, pts).has_value());
  EXPECT_EQ(check_path_pair({1}, {2}, pts), std::optional<int>(0));
}

TEST(PathCheck, DetectsAViolation) {
  // p = (1 -> 3), q = (2): rho(x1, x2) = 1/2 exceeds 2^2 * rho(x3, x2) = 4 * 2^-10.
  const std::vector<Dyadic> pts{D("1/4"), D("3/4"), sub(D("3/4"), Dyadic::inverse_pow2(10))};
  EXPECT_EQ(check_path_pair({1, 3}, {2}, pts), std::optional<int>(1));
}

TEST(PathCheck, RecordedRunsHaveNoViolations) {
  for (int fam = 0; fam < 2; ++fam) {
    const Trajectory tr = fam == 0 ? gen_1nn_adversarial(6, ScheduleParams::one_nn_desk(2500))
                                   : gen_knn_adversarial(6, ScheduleParams::knn_desk(2500));
    Learner l(LearnerConfig::kc1nn(2));
    for (const auto& s : tr.samples) l.step(s.x, s.y);
    const LearnerState st = l.state();
    const PathCheckResult r = path_inequality_check(build_tree(st), st.points, 6, 3000);
    EXPECT_TRUE(r.violations.empty());
    EXPECT_GT(r.checked, 0u);
  }
}

TEST(Report, CsvSchemaAndMeta) {
  GeneratorConfig g;
  g.horizon = 600;
  g.schedule = ScheduleParams::one_nn_desk(600);
  const auto agg = run_monte_carlo(g, TargetFunction::dyadics(), {LearnerConfig::kc1nn(2)},
                                   {300, 600}, {2, 5, 1});
  const OutputMeta meta{"run", "", 5, 0xabcdef, "x=1\n"};
  std::ostringstream csv;
  write_report_csv(csv, agg, meta);
  const std::string text = csv.str();
  EXPECT_EQ(text.rfind("# capnn 0.1.0 seed=5 config_hash=0000000000abcdef", 0), 0u);
  EXPECT_NE(text.find("\nT,learner,mean_loss,q10,q90\n300,2c1nn,"), std::string::npos);

  const std::string json = report_json(agg, meta);
  EXPECT_NE(json.find("\"version\": \"0.1.0\""), std::string::npos);
  EXPECT_NE(json.find("\"config_hash\": \"0000000000abcdef\""), std::string::npos);

  const std::string svg = loss_curve_svg(agg, meta);
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  std::size_t polylines = 0;
  for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos) {
    ++polylines;
  }
  EXPECT_EQ(polylines, 1u);
}

TEST(Fnv1a, KnownValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

}  // namespace
}  // namespace capnn
