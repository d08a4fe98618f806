#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "capnn/dyadic.hpp"
#include "capnn/spaces.hpp"

namespace capnn {

// 1-based time index; 0 means "none".
using Time = std::uint64_t;
inline constexpr Time kNoTime = 0;

enum class RuleKind { memo, one_nn, knn, kc1nn };

// Neighbor count k_n for the (k_n)-NN rule; always >= 1.
class KnnSchedule {
 public:
  enum class Kind { constant, floor_log2, floor_sqrt, table };

  static KnnSchedule constant(std::uint64_t k);
  static KnnSchedule floor_log2() { return KnnSchedule(Kind::floor_log2); }
  static KnnSchedule floor_sqrt() { return KnnSchedule(Kind::floor_sqrt); }
  // k_n = values[n - 1]; the last value extends past the end.
  static KnnSchedule table(std::vector<std::uint64_t> values);

  KnnSchedule() = default;

  Kind kind() const { return kind_; }
  std::uint64_t at(std::uint64_t n) const;

  // "log2", "sqrt", "const:N", "table:a,b,c".
  std::string to_string() const;
  static KnnSchedule parse(std::string_view text);

  friend bool operator==(const KnnSchedule&, const KnnSchedule&) = default;

 private:
  explicit KnnSchedule(Kind kind) : kind_(kind) {}

  Kind kind_ = Kind::floor_log2;
  std::uint64_t k_ = 1;
  std::vector<std::uint64_t> table_;
};

struct LearnerConfig {
  RuleKind rule = RuleKind::kc1nn;
  // Cap for kC1NN; ignored by the other rules.
  std::uint32_t cap_k = 2;
  KnnSchedule schedule;
  Label default_label{0};
  // Test hook: nearest-neighbor ties go to the largest time index.
  bool corrupt_tie_break = false;

  static LearnerConfig memo();
  static LearnerConfig one_nn();
  static LearnerConfig knn(KnnSchedule schedule);
  static LearnerConfig kc1nn(std::uint32_t k);

  // Infinite cap for the uncapped rules.
  std::optional<std::uint32_t> cap() const;

  // Display name: "memo", "1nn", "2c1nn", "knn-log2".
  std::string name() const;
  // Accepts "memo", "1nn", "kc1nn:K", "<K>c1nn", "knn:<schedule>".
  static LearnerConfig parse(std::string_view text);

  friend bool operator==(const LearnerConfig&, const LearnerConfig&) = default;
};

// Two-phase online interface: the label of time t is only passed in after the
// prediction for t has been returned.
class OnlineLearner {
 public:
  virtual ~OnlineLearner() = default;
  virtual Label predict(const Dyadic& x) = 0;
  virtual void reveal(Label y) = 0;

  Label step(const Dyadic& x, Label y) {
    const Label prediction = predict(x);
    reveal(y);
    return prediction;
  }
};

// Comparable snapshot of the rule's state after the last revealed step.
struct LearnerState {
  Time next_time = 1;
  // D_t: times eligible as neighbors, increasing.
  std::vector<Time> dataset;
  // Indexed by t - 1.
  std::vector<Dyadic> points;
  std::vector<Label> labels;
  std::vector<Label> predictions;
  std::vector<std::uint32_t> child_count;
  std::vector<Time> parent;
  // Earliest time carrying the same exact point (t itself when new).
  std::vector<Time> first_seen;
  // (deleted time, step at which it was deleted).
  std::vector<std::pair<Time, Time>> deletions;
  std::optional<std::uint32_t> cap_k;

  friend bool operator==(const LearnerState&, const LearnerState&) = default;
};

// Forest over non-duplicate times with edges t -> phi(t).
struct PredictionTree {
  // Non-duplicate times, increasing.
  std::vector<Time> nodes;
  // The vectors below are indexed by time (slot 0 unused).
  std::vector<Time> parent;
  std::vector<std::vector<Time>> children;
  std::vector<bool> deleted;
  std::vector<bool> in_dataset;
  // Prediction at t was wrong.
  std::vector<bool> error;

  bool is_node(Time t) const;
  // Root of t once the edges of mistaken predictions are cut.
  Time error_root(Time t) const;
  std::uint64_t depth(Time t) const;
  std::uint32_t max_children() const;
  // histogram[d] = number of nodes at depth d in the full forest.
  std::vector<std::uint64_t> depth_histogram() const;
};

PredictionTree build_tree(const LearnerState& state);

// Incremental implementation: ordered map keyed by exact point, nearest
// neighbors found by predecessor/successor probes.
class Learner final : public OnlineLearner {
 public:
  // Throws std::invalid_argument when cap_k = 0 for kC1NN.
  explicit Learner(LearnerConfig config);

  Label predict(const Dyadic& x) override;
  void reveal(Label y) override;

  const LearnerConfig& config() const { return config_; }
  Time next_time() const { return next_; }
  std::size_t dataset_size() const { return dataset_.size(); }
  std::uint64_t deletion_count() const { return deletions_.size(); }

  LearnerState state() const;
  PredictionTree snapshot_tree() const { return build_tree(state()); }

 private:
  using Dataset = std::map<Dyadic, Time, DyadicLess>;

  Time nearest(const Dyadic& x) const;
  std::vector<Time> k_nearest(const Dyadic& x, std::uint64_t k) const;
  bool closer(const Dyadic& da, Time ta, const Dyadic& db, Time tb) const;

  LearnerConfig config_;
  Time next_ = 1;
  std::vector<Dyadic> points_;
  std::vector<Label> labels_;
  std::vector<Label> predictions_;
  std::vector<std::uint32_t> child_count_;
  std::vector<Time> parent_;
  std::vector<Time> first_seen_;
  std::vector<std::pair<Time, Time>> deletions_;
  Dataset dataset_;
  std::unordered_map<Dyadic, Time, DyadicHash> seen_;

  struct Pending {
    Dyadic x;
    Label prediction;
    Time duplicate_of = kNoTime;
    Time representant = kNoTime;
  };
  std::optional<Pending> pending_;
};

// Naive oracle: linear scans over the full history, no index structures.
class ReferenceLearner final : public OnlineLearner {
 public:
  explicit ReferenceLearner(LearnerConfig config);

  Label predict(const Dyadic& x) override;
  void reveal(Label y) override;

  LearnerState state() const;

 private:
  LearnerConfig config_;
  std::vector<Dyadic> points_;
  std::vector<Label> labels_;
  std::vector<Label> predictions_;
  std::vector<std::uint32_t> child_count_;
  std::vector<Time> parent_;
  std::vector<Time> first_seen_;
  std::vector<bool> alive_;
  std::vector<std::pair<Time, Time>> deletions_;

  std::optional<Dyadic> pending_x_;
  Label pending_prediction_;
  Time pending_duplicate_ = kNoTime;
  Time pending_representant_ = kNoTime;
};

// Replays the full history through a fresh reference learner.
LearnerState replay_reference(const LearnerConfig& config,
                              const std::vector<Dyadic>& xs,
                              const std::vector<Label>& ys);

// Majority label, ties to the smallest label id.
Label majority_vote(const std::vector<Label>& votes);

}  // namespace capnn
