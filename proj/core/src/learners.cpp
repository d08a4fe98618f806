#include "capnn/learners.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace capnn {
namespace {

std::uint64_t parse_count(std::string_view s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("bad integer: " + std::string(s));
  }
  return v;
}

std::uint64_t ilog2(std::uint64_t n) {
  std::uint64_t r = 0;
  while (n >>= 1) ++r;
  return r;
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool uses_neighbors(RuleKind rule) { return rule != RuleKind::memo; }

}  // namespace

// ---------------------------------------------------------------------------
// KnnSchedule

KnnSchedule KnnSchedule::constant(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("k_n must be >= 1");
  KnnSchedule s(Kind::constant);
  s.k_ = k;
  return s;
}

KnnSchedule KnnSchedule::table(std::vector<std::uint64_t> values) {
  if (values.empty()) throw std::invalid_argument("empty k_n table");
  if (std::find(values.begin(), values.end(), 0) != values.end()) {
    throw std::invalid_argument("k_n must be >= 1");
  }
  KnnSchedule s(Kind::table);
  s.table_ = std::move(values);
  return s;
}

std::uint64_t KnnSchedule::at(std::uint64_t n) const {
  switch (kind_) {
    case Kind::constant:
      return k_;
    case Kind::floor_log2:
      return std::max<std::uint64_t>(1, ilog2(n));
    case Kind::floor_sqrt:
      return std::max<std::uint64_t>(1, isqrt(n));
    case Kind::table:
      return table_[std::min<std::uint64_t>(std::max<std::uint64_t>(n, 1),
                                            table_.size()) -
                    1];
  }
  return 1;
}

std::string KnnSchedule::to_string() const {
  switch (kind_) {
    case Kind::constant:
      return "const:" + std::to_string(k_);
    case Kind::floor_log2:
      return "log2";
    case Kind::floor_sqrt:
      return "sqrt";
    case Kind::table: {
      std::string out = "table:";
      for (std::size_t i = 0; i < table_.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(table_[i]);
      }
      return out;
    }
  }
  return "?";
}

KnnSchedule KnnSchedule::parse(std::string_view text) {
  if (text == "log2") return floor_log2();
  if (text == "sqrt") return floor_sqrt();
  if (text.starts_with("const:")) return constant(parse_count(text.substr(6)));
  if (text.starts_with("table:")) {
    std::vector<std::uint64_t> values;
    std::string_view body = text.substr(6);
    while (true) {
      const auto comma = body.find(',');
      values.push_back(parse_count(body.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      body = body.substr(comma + 1);
    }
    return table(std::move(values));
  }
  throw std::invalid_argument("unknown k_n schedule: " + std::string(text));
}

// ---------------------------------------------------------------------------
// LearnerConfig

LearnerConfig LearnerConfig::memo() {
  LearnerConfig c;
  c.rule = RuleKind::memo;
  return c;
}

LearnerConfig LearnerConfig::one_nn() {
  LearnerConfig c;
  c.rule = RuleKind::one_nn;
  return c;
}

LearnerConfig LearnerConfig::knn(KnnSchedule schedule) {
  LearnerConfig c;
  c.rule = RuleKind::knn;
  c.schedule = std::move(schedule);
  return c;
}

LearnerConfig LearnerConfig::kc1nn(std::uint32_t k) {
  LearnerConfig c;
  c.rule = RuleKind::kc1nn;
  c.cap_k = k;
  return c;
}

std::optional<std::uint32_t> LearnerConfig::cap() const {
  if (rule == RuleKind::kc1nn) return cap_k;
  return std::nullopt;
}

std::string LearnerConfig::name() const {
  switch (rule) {
    case RuleKind::memo:
      return "memo";
    case RuleKind::one_nn:
      return "1nn";
    case RuleKind::knn:
      return "knn-" + schedule.to_string();
    case RuleKind::kc1nn:
      return std::to_string(cap_k) + "c1nn";
  }
  return "?";
}

LearnerConfig LearnerConfig::parse(std::string_view text) {
  if (text == "memo") return memo();
  if (text == "1nn") return one_nn();
  if (text == "knn") return knn(KnnSchedule::floor_log2());
  if (text.starts_with("knn:")) return knn(KnnSchedule::parse(text.substr(4)));
  if (text.starts_with("knn-")) return knn(KnnSchedule::parse(text.substr(4)));
  if (text == "kc1nn") return kc1nn(2);
  if (text.starts_with("kc1nn:")) {
    return kc1nn(static_cast<std::uint32_t>(parse_count(text.substr(6))));
  }
  if (text.ends_with("c1nn") && text.size() > 4) {
    return kc1nn(static_cast<std::uint32_t>(
        parse_count(text.substr(0, text.size() - 4))));
  }
  throw std::invalid_argument("unknown learner: " + std::string(text));
}

Label majority_vote(const std::vector<Label>& votes) {
  std::map<Label, std::uint64_t> counts;
  for (Label v : votes) ++counts[v];
  Label best{0};
  std::uint64_t best_count = 0;
  // std::map iterates labels in increasing order, so strict > keeps the
  // smallest label among equal counts.
  for (const auto& [label, count] : counts) {
    if (count > best_count) {
      best = label;
      best_count = count;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// PredictionTree

bool PredictionTree::is_node(Time t) const {
  return std::binary_search(nodes.begin(), nodes.end(), t);
}

Time PredictionTree::error_root(Time t) const {
  while (!error[t] && parent[t] != kNoTime) t = parent[t];
  return t;
}

std::uint64_t PredictionTree::depth(Time t) const {
  std::uint64_t d = 0;
  while (parent[t] != kNoTime) {
    t = parent[t];
    ++d;
  }
  return d;
}

std::uint32_t PredictionTree::max_children() const {
  std::size_t m = 0;
  for (const auto& c : children) m = std::max(m, c.size());
  return static_cast<std::uint32_t>(m);
}

std::vector<std::uint64_t> PredictionTree::depth_histogram() const {
  std::vector<std::uint64_t> depth_of(parent.size(), 0);
  std::vector<std::uint64_t> hist;
  // Parents precede children in time, so one forward pass suffices.
  for (Time t : nodes) {
    depth_of[t] = parent[t] == kNoTime ? 0 : depth_of[parent[t]] + 1;
    if (hist.size() <= depth_of[t]) hist.resize(depth_of[t] + 1, 0);
    ++hist[depth_of[t]];
  }
  return hist;
}

PredictionTree build_tree(const LearnerState& state) {
  const std::size_t n = state.points.size();
  PredictionTree tree;
  tree.parent.assign(n + 1, kNoTime);
  tree.children.assign(n + 1, {});
  tree.deleted.assign(n + 1, false);
  tree.in_dataset.assign(n + 1, false);
  tree.error.assign(n + 1, false);
  for (Time t = 1; t <= n; ++t) {
    tree.error[t] = state.predictions[t - 1] != state.labels[t - 1];
    if (state.first_seen[t - 1] != t) continue;
    tree.nodes.push_back(t);
    const Time p = state.parent[t - 1];
    tree.parent[t] = p;
    if (p != kNoTime) tree.children[p].push_back(t);
  }
  for (const auto& [t, at] : state.deletions) tree.deleted[t] = true;
  for (Time t : state.dataset) tree.in_dataset[t] = true;
  return tree;
}

// ---------------------------------------------------------------------------
// Learner

Learner::Learner(LearnerConfig config) : config_(std::move(config)) {
  if (config_.rule == RuleKind::kc1nn && config_.cap_k == 0) {
    throw std::invalid_argument("kC1NN cap k must be >= 1");
  }
}

bool Learner::closer(const Dyadic& da, Time ta, const Dyadic& db, Time tb) const {
  const auto c = compare(da, db);
  if (c != 0) return c < 0;
  return config_.corrupt_tie_break ? ta > tb : ta < tb;
}

Time Learner::nearest(const Dyadic& x) const {
  auto succ = dataset_.lower_bound(x);
  if (succ == dataset_.begin()) return succ->second;
  auto pred = std::prev(succ);
  if (succ == dataset_.end()) return pred->second;
  const Dyadic dl = sub(x, pred->first);
  const Dyadic dr = sub(succ->first, x);
  return closer(dl, pred->second, dr, succ->second) ? pred->second
                                                      : succ->second;
}

std::vector<Time> Learner::k_nearest(const Dyadic& x, std::uint64_t k) const {
  std::vector<Time> out;
  auto right = dataset_.lower_bound(x);
  auto left = right;  // one past the next left candidate
  while (out.size() < k && (left != dataset_.begin() || right != dataset_.end())) {
    if (left == dataset_.begin()) {
      out.push_back((right++)->second);
      continue;
    }
    auto l = std::prev(left);
    if (right == dataset_.end()) {
      out.push_back(l->second);
      left = l;
      continue;
    }
    if (closer(sub(x, l->first), l->second, sub(right->first, x), right->second)) {
      out.push_back(l->second);
      left = l;
    } else {
      out.push_back((right++)->second);
    }
  }
  return out;
}

Label Learner::predict(const Dyadic& x) {
  if (pending_) throw std::logic_error("predict called twice without reveal");
  Pending p{x, config_.default_label};
  if (next_ > 1) {
    if (auto it = seen_.find(x); it != seen_.end()) {
      p.duplicate_of = it->second;
      p.prediction = labels_[it->second - 1];
    } else if (uses_neighbors(config_.rule)) {
      if (config_.rule == RuleKind::knn) {
        const auto nbrs = k_nearest(x, config_.schedule.at(next_));
        std::vector<Label> votes;
        votes.reserve(nbrs.size());
        for (Time u : nbrs) votes.push_back(labels_[u - 1]);
        p.representant = nbrs.front();
        p.prediction = majority_vote(votes);
      } else {
        p.representant = nearest(x);
        p.prediction = labels_[p.representant - 1];
      }
    }
  }
  const Label out = p.prediction;
  pending_ = std::move(p);
  return out;
}

void Learner::reveal(Label y) {
  if (!pending_) throw std::logic_error("reveal called before predict");
  Pending p = std::move(*pending_);
  pending_.reset();
  const Time t = next_++;

  points_.push_back(p.x);
  labels_.push_back(y);
  predictions_.push_back(p.prediction);
  child_count_.push_back(0);
  parent_.push_back(p.representant);

  if (p.duplicate_of != kNoTime) {
    first_seen_.push_back(p.duplicate_of);
    return;
  }
  first_seen_.push_back(t);
  seen_.emplace(p.x, t);
  if (p.representant != kNoTime) {
    const Time phi = p.representant;
    ++child_count_[phi - 1];
    if (const auto cap = config_.cap(); cap && child_count_[phi - 1] == *cap) {
      dataset_.erase(points_[phi - 1]);
      deletions_.emplace_back(phi, t);
    }
  }
  dataset_.emplace(std::move(p.x), t);
}

LearnerState Learner::state() const {
  LearnerState s;
  s.next_time = next_;
  s.dataset.reserve(dataset_.size());
  for (const auto& [x, t] : dataset_) s.dataset.push_back(t);
  std::sort(s.dataset.begin(), s.dataset.end());
  s.points = points_;
  s.labels = labels_;
  s.predictions = predictions_;
  s.child_count = child_count_;
  s.parent = parent_;
  s.first_seen = first_seen_;
  s.deletions = deletions_;
  s.cap_k = config_.cap();
  return s;
}

// ---------------------------------------------------------------------------
// ReferenceLearner

ReferenceLearner::ReferenceLearner(LearnerConfig config)
    : config_(std::move(config)) {
  if (config_.rule == RuleKind::kc1nn && config_.cap_k == 0) {
    throw std::invalid_argument("kC1NN cap k must be >= 1");
  }
}

Label ReferenceLearner::predict(const Dyadic& x) {
  if (pending_x_) throw std::logic_error("predict called twice without reveal");
  const Time t = points_.size() + 1;
  pending_duplicate_ = kNoTime;
  pending_representant_ = kNoTime;
  pending_prediction_ = config_.default_label;

  if (t > 1) {
    for (Time u = 1; u < t; ++u) {
      if (compare_exact(points_[u - 1], x) == 0) {
        pending_duplicate_ = u;
        break;
      }
    }
  }
  if (pending_duplicate_ != kNoTime) {
    pending_prediction_ = labels_[pending_duplicate_ - 1];
  } else if (t > 1 && uses_neighbors(config_.rule)) {
    struct Candidate {
      Dyadic dist;
      Time time;
    };
    std::vector<Candidate> candidates;
    for (Time u = 1; u < t; ++u) {
      if (alive_[u - 1]) candidates.push_back({abs_diff(x, points_[u - 1]), u});
    }
    // The oracle ignores corrupt_tie_break: it always states the true rule.
    auto before = [](const Candidate& a, const Candidate& b) {
      const auto c = compare_exact(a.dist, b.dist);
      if (c != 0) return c < 0;
      return a.time < b.time;
    };
    if (config_.rule == RuleKind::knn) {
      std::sort(candidates.begin(), candidates.end(), before);
      const std::size_t k = std::min<std::uint64_t>(config_.schedule.at(t),
                                                     candidates.size());
      std::vector<Label> votes;
      for (std::size_t i = 0; i < k; ++i) {
        votes.push_back(labels_[candidates[i].time - 1]);
      }
      pending_representant_ = candidates.front().time;
      pending_prediction_ = majority_vote(votes);
    } else {
      const auto best =
          std::min_element(candidates.begin(), candidates.end(), before);
      pending_representant_ = best->time;
      pending_prediction_ = labels_[best->time - 1];
    }
  }
  pending_x_ = x;
  return pending_prediction_;
}

void ReferenceLearner::reveal(Label y) {
  if (!pending_x_) throw std::logic_error("reveal called before predict");
  const Time t = points_.size() + 1;
  points_.push_back(*pending_x_);
  pending_x_.reset();
  labels_.push_back(y);
  predictions_.push_back(pending_prediction_);
  child_count_.push_back(0);
  parent_.push_back(pending_representant_);

  if (pending_duplicate_ != kNoTime) {
    first_seen_.push_back(pending_duplicate_);
    alive_.push_back(false);
    return;
  }
  first_seen_.push_back(t);
  alive_.push_back(true);
  if (pending_representant_ != kNoTime) {
    const Time phi = pending_representant_;
    ++child_count_[phi - 1];
    const auto cap = config_.cap();
    if (cap && child_count_[phi - 1] == *cap) {
      alive_[phi - 1] = false;
      deletions_.emplace_back(phi, t);
    }
  }
}

LearnerState ReferenceLearner::state() const {
  LearnerState s;
  s.next_time = points_.size() + 1;
  for (Time u = 1; u <= points_.size(); ++u) {
    if (alive_[u - 1]) s.dataset.push_back(u);
  }
  s.points = points_;
  s.labels = labels_;
  s.predictions = predictions_;
  s.child_count = child_count_;
  s.parent = parent_;
  s.first_seen = first_seen_;
  s.deletions = deletions_;
  s.cap_k = config_.cap();
  return s;
}

LearnerState replay_reference(const LearnerConfig& config,
                              const std::vector<Dyadic>& xs,
                              const std::vector<Label>& ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("replay_reference: length mismatch");
  }
  ReferenceLearner ref(config);
  for (std::size_t i = 0; i < xs.size(); ++i) ref.step(xs[i], ys[i]);
  return ref.state();
}

}  // namespace capnn
