#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "capnn/dyadic.hpp"
#include "capnn/learners.hpp"
#include "capnn/processes.hpp"
#include "capnn/spaces.hpp"

namespace capnn {

inline constexpr std::string_view kVersion = "0.1.0";

std::uint64_t fnv1a64(std::string_view text);

// Powers of two from 256 below the horizon, then the horizon itself.
std::vector<std::uint64_t> default_checkpoints(std::uint64_t horizon);

struct TreeSummary {
  std::uint32_t max_children = 0;
  std::vector<std::uint64_t> depth_histogram;
};

struct RunReport {
  std::string learner;
  std::string generator;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::vector<std::uint64_t> checkpoints;
  // Average loss at each checkpoint.
  std::vector<double> loss;
  std::vector<Time> error_times;
  // Dataset size right after each checkpoint time.
  std::vector<std::uint64_t> dataset_size;
  std::uint64_t deletions = 0;
  TreeSummary tree;

  // Errors among times 1..T, from the error-time list.
  std::uint64_t errors_through(std::uint64_t T) const;
};

// Feeds the trajectory (labels from f*) into any learner, predicting before
// revealing each label. Dataset and tree fields stay empty.
RunReport run_learner(OnlineLearner& learner, const Trajectory& traj,
                      const TargetFunction& target,
                      const std::vector<std::uint64_t>& checkpoints);

// Fresh Learner for `config`; fills every report field.
RunReport run_trajectory(const Trajectory& traj, const TargetFunction& target,
                         const LearnerConfig& config,
                         const std::vector<std::uint64_t>& checkpoints);

struct AggregateReport {
  std::string learner;
  std::string generator;
  std::uint64_t base_seed = 0;
  std::uint64_t config_hash = 0;
  std::vector<std::uint64_t> checkpoints;
  std::vector<std::uint64_t> trial_seeds;
  // trial_errors[i][c]: errors of trial i through checkpoint c.
  std::vector<std::vector<std::uint64_t>> trial_errors;
  // Mean over trials, computed as (sum of errors) / (trials * T).
  std::vector<double> mean;
  std::vector<double> q10;
  std::vector<double> q90;
  std::vector<double> min;
  std::vector<double> max;

  std::size_t trials() const { return trial_seeds.size(); }
  double trial_loss(std::size_t trial, std::size_t checkpoint) const;
  // Average loss of each trial at the final checkpoint.
  std::vector<double> final_losses() const;
};

struct MonteCarloOptions {
  std::uint64_t trials = 1;
  std::uint64_t base_seed = 0;
  // 0 means hardware concurrency.
  unsigned workers = 0;
};

// Each trial draws one trajectory from derive_seed(base_seed, i) and runs every
// learner on it. Result i belongs to learners[i].
std::vector<AggregateReport> run_monte_carlo(const GeneratorConfig& generator,
                                             const TargetFunction& target,
                                             const std::vector<LearnerConfig>& learners,
                                             const std::vector<std::uint64_t>& checkpoints,
                                             const MonteCarloOptions& options);

// Empirical quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

struct Interval {
  Dyadic lo;
  Dyadic hi;
  bool lo_closed = true;
  bool hi_closed = false;

  bool contains(const Dyadic& x) const;
  std::string to_string() const;
};

// Finite union of intervals, e.g. "[0,1/2)" or "[0,1/4]u(1/2,1]".
class IntervalSet {
 public:
  IntervalSet() = default;
  // Throws std::invalid_argument on an empty or reversed interval.
  explicit IntervalSet(std::vector<Interval> parts);

  bool contains(const Dyadic& x) const;
  const std::vector<Interval>& parts() const { return parts_; }
  std::string to_string() const;
  static IntervalSet parse(std::string_view text);

 private:
  std::vector<Interval> parts_;
};

struct FrequencyPoint {
  std::uint64_t T = 0;
  std::uint64_t hits = 0;
  double frequency = 0.0;
};

std::vector<FrequencyPoint> crf_frequency(const Trajectory& traj, const IntervalSet& set,
                                          const std::vector<std::uint64_t>& checkpoints);

struct PathViolation {
  // Root-to-node paths, root first.
  std::vector<Time> p;
  std::vector<Time> q;
  // 1: the bound on rho(x_{p_v}, x_{q_0}); 2: the bound on rho(x_{p_v}, x_{p_d}).
  int inequality = 0;
};

struct PathCheckResult {
  std::vector<PathViolation> violations;
  std::uint64_t checked = 0;
  std::uint64_t skipped = 0;
};

// Path from the error-cut root down to t.
std::vector<Time> root_path(const PredictionTree& tree, Time t);

// Checks the path inequality on one ordered pair; nullopt when the pair does
// not qualify (same root, or p_0 >= q_0). Returns 0 when both bounds hold.
std::optional<int> check_path_pair(const std::vector<Time>& p, const std::vector<Time>& q,
                                   const std::vector<Dyadic>& points);

// Samples distinct pairs of final-dataset nodes until `max_pairs` qualifying
// pairs have been checked or the attempt budget runs out.
PathCheckResult path_inequality_check(const PredictionTree& tree, const std::vector<Dyadic>& points,
                              std::uint64_t seed, std::uint64_t max_pairs = 10000);

}  // namespace capnn
