#include "capnn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "capnn/rng.hpp"

namespace capnn {
namespace {

void check_checkpoints(const std::vector<std::uint64_t>& checkpoints, std::uint64_t horizon) {
  if (checkpoints.empty()) throw std::invalid_argument("no checkpoints");
  if (checkpoints.front() == 0) throw std::invalid_argument("checkpoint T must be >= 1");
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()) ||
      std::adjacent_find(checkpoints.begin(), checkpoints.end()) != checkpoints.end()) {
    throw std::invalid_argument("checkpoints must be strictly increasing");
  }
  if (checkpoints.back() > horizon) {
    throw std::invalid_argument("trajectory horizon " + std::to_string(horizon) +
                                " is shorter than checkpoint " +
                                std::to_string(checkpoints.back()));
  }
}

std::string checkpoint_text(const std::vector<std::uint64_t>& checkpoints) {
  std::string out;
  for (auto T : checkpoints) out += std::to_string(T) + ",";
  return out;
}

// a <= 2^shift * b, exactly.
bool leq_scaled(const Dyadic& a, const Dyadic& b, std::uint64_t shift) {
  mpz_class lhs = a.numerator();
  mpz_class rhs = b.numerator();
  mpz_mul_2exp(lhs.get_mpz_t(), lhs.get_mpz_t(), b.exponent());
  mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(), a.exponent() + shift);
  return lhs <= rhs;
}

// Drives one learner and collects the fields every learner can report.
template <typename OnCheckpoint>
RunReport drive(OnlineLearner& learner, const Trajectory& traj, const TargetFunction& target,
                const std::vector<std::uint64_t>& checkpoints, OnCheckpoint&& on_checkpoint) {
  check_checkpoints(checkpoints, traj.samples.size());
  RunReport report;
  report.generator = traj.generator;
  report.seed = traj.seed;
  report.checkpoints = checkpoints;
  std::size_t next = 0;
  const std::uint64_t last = checkpoints.back();
  for (std::uint64_t t = 1; t <= last; ++t) {
    const LabeledSample& s = traj.samples[t - 1];
    const Label prediction = learner.predict(s.x);
    const Label truth = eval_target(target, s.x, s.provenance);
    learner.reveal(truth);
    if (loss(prediction, truth) != 0.0) report.error_times.push_back(t);
    if (t == checkpoints[next]) {
      report.loss.push_back(static_cast<double>(report.error_times.size()) /
                            static_cast<double>(t));
      on_checkpoint(report);
      ++next;
    }
  }
  return report;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::uint64_t> default_checkpoints(std::uint64_t horizon) {
  if (horizon == 0) throw std::invalid_argument("horizon must be >= 1");
  std::vector<std::uint64_t> out;
  for (std::uint64_t T = 256; T < horizon; T *= 2) out.push_back(T);
  out.push_back(horizon);
  return out;
}

std::uint64_t RunReport::errors_through(std::uint64_t T) const {
  return static_cast<std::uint64_t>(
      std::upper_bound(error_times.begin(), error_times.end(), T) - error_times.begin());
}

RunReport run_learner(OnlineLearner& learner, const Trajectory& traj,
                      const TargetFunction& target,
                      const std::vector<std::uint64_t>& checkpoints) {
  return drive(learner, traj, target, checkpoints, [](RunReport&) {});
}

RunReport run_trajectory(const Trajectory& traj, const TargetFunction& target,
                         const LearnerConfig& config,
                         const std::vector<std::uint64_t>& checkpoints) {
  Learner learner(config);
  RunReport report = drive(learner, traj, target, checkpoints, [&](RunReport& r) {
    r.dataset_size.push_back(learner.dataset_size());
  });
  report.learner = config.name();
  report.deletions = learner.deletion_count();
  const PredictionTree tree = learner.snapshot_tree();
  report.tree.max_children = tree.max_children();
  report.tree.depth_histogram = tree.depth_histogram();
  report.config_hash = fnv1a64(traj.generator + "|" + std::to_string(traj.seed) + "|" +
                               report.learner + "|" + target.to_string() + "|" +
                               checkpoint_text(checkpoints));
  return report;
}

double AggregateReport::trial_loss(std::size_t trial, std::size_t checkpoint) const {
  return static_cast<double>(trial_errors.at(trial).at(checkpoint)) /
         static_cast<double>(checkpoints.at(checkpoint));
}

std::vector<double> AggregateReport::final_losses() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < trials(); ++i) out.push_back(trial_loss(i, checkpoints.size() - 1));
  return out;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level outside [0,1]");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<AggregateReport> run_monte_carlo(const GeneratorConfig& generator,
                                             const TargetFunction& target,
                                             const std::vector<LearnerConfig>& learners,
                                             const std::vector<std::uint64_t>& checkpoints,
                                             const MonteCarloOptions& options) {
  if (options.trials == 0) throw std::invalid_argument("trials must be >= 1");
  if (learners.empty()) throw std::invalid_argument("no learners");
  check_checkpoints(checkpoints, generator.horizon);

  const std::size_t trials = options.trials;
  std::vector<std::uint64_t> seeds(trials);
  for (std::size_t i = 0; i < trials; ++i) seeds[i] = derive_seed(options.base_seed, i);

  // errors[l][i][c]
  std::vector<std::vector<std::vector<std::uint64_t>>> errors(
      learners.size(), std::vector<std::vector<std::uint64_t>>(trials));
  std::string generator_name;
  std::mutex name_mutex;

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= trials) return;
      try {
        const Trajectory traj = generate(generator, seeds[i]);
        if (i == 0) {
          std::lock_guard lock(name_mutex);
          generator_name = traj.generator;
        }
        for (std::size_t l = 0; l < learners.size(); ++l) {
          const RunReport r = run_trajectory(traj, target, learners[l], checkpoints);
          auto& row = errors[l][i];
          for (auto T : checkpoints) row.push_back(r.errors_through(T));
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(trials);
      }
    }
  };

  unsigned workers = options.workers != 0 ? options.workers
                                          : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, trials));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<AggregateReport> out;
  for (std::size_t l = 0; l < learners.size(); ++l) {
    AggregateReport agg;
    agg.learner = learners[l].name();
    agg.generator = generator_name;
    agg.base_seed = options.base_seed;
    agg.checkpoints = checkpoints;
    agg.trial_seeds = seeds;
    agg.trial_errors = std::move(errors[l]);
    agg.config_hash = fnv1a64(generator_name + "|" + std::to_string(generator.horizon) + "|" +
                              agg.learner + "|" + target.to_string() + "|" +
                              checkpoint_text(checkpoints) + "|" +
                              std::to_string(options.base_seed) + "|" +
                              std::to_string(trials));
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      std::uint64_t sum = 0;
      std::vector<double> losses;
      for (std::size_t i = 0; i < trials; ++i) {
        sum += agg.trial_errors[i][c];
        losses.push_back(agg.trial_loss(i, c));
      }
      agg.mean.push_back(static_cast<double>(sum) /
                         (static_cast<double>(trials) * static_cast<double>(checkpoints[c])));
      agg.q10.push_back(quantile(losses, 0.1));
      agg.q90.push_back(quantile(losses, 0.9));
      agg.min.push_back(*std::min_element(losses.begin(), losses.end()));
      agg.max.push_back(*std::max_element(losses.begin(), losses.end()));
    }
    out.push_back(std::move(agg));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Interval sets

bool Interval::contains(const Dyadic& x) const {
  const auto lo_cmp = compare(lo, x);
  const auto hi_cmp = compare(x, hi);
  const bool above = lo_closed ? lo_cmp <= 0 : lo_cmp < 0;
  const bool below = hi_closed ? hi_cmp <= 0 : hi_cmp < 0;
  return above && below;
}

std::string Interval::to_string() const {
  return std::string(lo_closed ? "[" : "(") + lo.to_string() + "," + hi.to_string() +
         (hi_closed ? "]" : ")");
}

IntervalSet::IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) {
  for (const auto& iv : parts_) {
    const auto c = compare(iv.lo, iv.hi);
    if (c > 0) throw std::invalid_argument("reversed interval " + iv.to_string());
    if (c == 0 && !(iv.lo_closed && iv.hi_closed)) {
      throw std::invalid_argument("empty interval " + iv.to_string());
    }
  }
}

bool IntervalSet::contains(const Dyadic& x) const {
  return std::any_of(parts_.begin(), parts_.end(),
                     [&](const Interval& iv) { return iv.contains(x); });
}

std::string IntervalSet::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i > 0) out += 'u';
    out += parts_[i].to_string();
  }
  return out;
}

IntervalSet IntervalSet::parse(std::string_view text) {
  std::vector<Interval> parts;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (!parts.empty()) {
      if (text[pos] != 'u') throw std::invalid_argument("expected 'u' between intervals");
      ++pos;
    }
    if (pos >= text.size() || (text[pos] != '[' && text[pos] != '(')) {
      throw std::invalid_argument("interval must open with '[' or '('");
    }
    const std::size_t close = text.find_first_of("])", pos);
    if (close == std::string_view::npos) throw std::invalid_argument("unterminated interval");
    const std::string_view body = text.substr(pos + 1, close - pos - 1);
    const std::size_t comma = body.find(',');
    if (comma == std::string_view::npos) throw std::invalid_argument("interval needs two ends");
    Interval iv;
    iv.lo_closed = text[pos] == '[';
    iv.hi_closed = text[close] == ']';
    iv.lo = Dyadic::parse(body.substr(0, comma));
    iv.hi = Dyadic::parse(body.substr(comma + 1));
    parts.push_back(iv);
    pos = close + 1;
  }
  if (parts.empty()) throw std::invalid_argument("empty interval list");
  return IntervalSet(std::move(parts));
}

std::vector<FrequencyPoint> crf_frequency(const Trajectory& traj, const IntervalSet& set,
                                          const std::vector<std::uint64_t>& checkpoints) {
  check_checkpoints(checkpoints, traj.samples.size());
  std::vector<FrequencyPoint> out;
  std::uint64_t hits = 0;
  std::size_t next = 0;
  for (std::uint64_t t = 1; t <= checkpoints.back(); ++t) {
    if (set.contains(traj.samples[t - 1].x)) ++hits;
    if (t == checkpoints[next]) {
      out.push_back({t, hits, static_cast<double>(hits) / static_cast<double>(t)});
      ++next;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Path inequality

std::vector<Time> root_path(const PredictionTree& tree, Time t) {
  std::vector<Time> path{t};
  while (!tree.error[t] && tree.parent[t] != kNoTime) {
    t = tree.parent[t];
    path.push_back(t);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::optional<int> check_path_pair(const std::vector<Time>& p, const std::vector<Time>& q,
                                   const std::vector<Dyadic>& points) {
  if (p.empty() || q.empty() || p == q || p.front() >= q.front()) return std::nullopt;
  const std::uint64_t d = p.size() - 1;
  const std::uint64_t f = q.size() - 1;
  std::size_t v = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < q.front()) v = i;
  }
  const Dyadic& x_pv = points.at(p[v] - 1);
  const Dyadic& x_q0 = points.at(q.front() - 1);
  const Dyadic& x_pd = points.at(p.back() - 1);
  const Dyadic& x_qf = points.at(q.back() - 1);
  const Dyadic gap = abs_diff(x_pd, x_qf);
  if (!leq_scaled(abs_diff(x_pv, x_q0), gap, f + d + 1)) return 1;
  if (!leq_scaled(abs_diff(x_pv, x_pd), gap, f + d + 1)) return 2;
  return 0;
}

PathCheckResult path_inequality_check(const PredictionTree& tree, const std::vector<Dyadic>& points,
                              std::uint64_t seed, std::uint64_t max_pairs) {
  PathCheckResult result;
  std::vector<Time> members;
  for (Time t : tree.nodes) {
    if (tree.in_dataset[t]) members.push_back(t);
  }
  if (members.size() < 2 || max_pairs == 0) return result;

  std::vector<std::vector<Time>> paths(members.size());
  auto path_of = [&](std::size_t i) -> const std::vector<Time>& {
    if (paths[i].empty()) paths[i] = root_path(tree, members[i]);
    return paths[i];
  };

  const std::uint64_t n = members.size();
  const std::uint64_t all_pairs = n * (n - 1) / 2;
  auto visit = [&](std::size_t i, std::size_t j) {
    const auto& a = path_of(i);
    const auto& b = path_of(j);
    const bool a_first = a.front() < b.front();
    const auto& p = a_first ? a : b;
    const auto& q = a_first ? b : a;
    const auto verdict = check_path_pair(p, q, points);
    if (!verdict) {
      ++result.skipped;
      return;
    }
    ++result.checked;
    if (*verdict != 0) result.violations.push_back({p, q, *verdict});
  };

  if (all_pairs <= max_pairs) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) visit(i, j);
    }
    return result;
  }
  SeededStream stream(seed, stream_label(StreamPurpose::sampling, 0));
  const std::uint64_t budget = 20 * max_pairs;
  for (std::uint64_t attempt = 0; attempt < budget && result.checked < max_pairs; ++attempt) {
    const std::size_t i = stream.uniform_below(n);
    std::size_t j = stream.uniform_below(n - 1);
    if (j >= i) ++j;
    visit(i, j);
  }
  return result;
}

}  // namespace capnn
