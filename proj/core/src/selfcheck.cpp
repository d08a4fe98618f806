#include "capnn/selfcheck.hpp"

#include <algorithm>
#include <set>

#include "capnn/harness.hpp"
#include "capnn/rng.hpp"

namespace capnn {
namespace {

constexpr std::uint64_t kFuzzLabelBase = 1ULL << 40;

Dyadic random_dyadic(SeededStream& s, std::uint64_t max_bits) {
  const std::uint64_t e = 1 + s.uniform_below(max_bits);
  return uniform_dyadic_bits(s, e);
}

mpq_class as_rational(const Dyadic& d) {
  mpq_class q(d.numerator());
  mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), d.exponent());
  return q;
}

int sign_of(std::strong_ordering o) { return o < 0 ? -1 : (o > 0 ? 1 : 0); }

std::string first_failure(std::string& slot, const std::string& what) {
  if (slot.empty()) slot = what;
  return slot;
}

}  // namespace

FuzzSequence fuzz_sequence(std::uint64_t seed, std::uint64_t index, std::uint64_t max_len) {
  SeededStream s(seed, stream_label(StreamPurpose::sampling, kFuzzLabelBase + index));
  FuzzSequence seq;
  const std::uint64_t len = 1 + s.uniform_below(max_len);
  for (std::uint64_t t = 0; t < len; ++t) {
    if (t > 0 && s.uniform_below(10) < 3) {
      seq.xs.push_back(seq.xs[s.uniform_below(t)]);
    } else {
      const std::uint64_t e = 1 + s.uniform_below(6);
      seq.xs.push_back(Dyadic::normalize(s.uniform_below((1ULL << e) + 1), e));
    }
    seq.ys.push_back(Label{static_cast<std::uint32_t>(s.uniform_below(3))});
  }
  return seq;
}

CheckResult check_dyadic_filter(std::uint64_t seed, std::uint64_t cases, std::uint64_t max_bits) {
  CheckResult r{"dyadic filter vs exact", true, 0, 0, {}};
  SeededStream s(seed, stream_label(StreamPurpose::sampling, 1));
  for (std::uint64_t i = 0; i < cases; ++i) {
    Dyadic a, b;
    switch (i % 5) {
      case 0:
        a = random_dyadic(s, max_bits);
        b = random_dyadic(s, max_bits);
        break;
      case 1: {
        // Neighbors 2^-j apart.
        a = random_dyadic(s, max_bits);
        const Dyadic step = Dyadic::inverse_pow2(1 + s.uniform_below(max_bits));
        b = compare_exact(a, sub(Dyadic::one(), step)) <= 0 ? add(a, step) : sub(a, step);
        break;
      }
      case 2: {
        // Same value, built through an unnormalized numerator.
        a = random_dyadic(s, max_bits);
        const std::uint64_t extra = s.uniform_below(64);
        mpz_class m = a.numerator();
        mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), extra);
        b = Dyadic::normalize(m, a.exponent() + extra);
        break;
      }
      case 3: {
        // Equal leading doubles, different tails.
        a = uniform_dyadic_bits(s, 53);
        const Dyadic step = Dyadic::inverse_pow2(60 + s.uniform_below(max_bits > 60 ? max_bits - 59 : 1));
        b = compare_exact(a, sub(Dyadic::one(), step)) <= 0 ? add(a, step) : sub(a, step);
        break;
      }
      default: {
        auto small = [&] {
          const std::uint64_t e = s.uniform_below(9);
          return Dyadic::normalize(s.uniform_below((1ULL << e) + 1), e);
        };
        a = small();
        b = small();
        break;
      }
    }
    if (s.uniform_below(2) == 1) std::swap(a, b);
    ++r.cases;
    const int filtered = sign_of(compare(a, b));
    const int exact = sign_of(compare_exact(a, b));
    const int rational = cmp(as_rational(a), as_rational(b));
    const int rational_sign = rational < 0 ? -1 : (rational > 0 ? 1 : 0);
    if (filtered != exact || exact != rational_sign) {
      ++r.failures;
      first_failure(r.detail, "case " + std::to_string(i) + ": " + a.to_string() + " vs " +
                                  b.to_string());
    }
  }
  r.passed = r.failures == 0;
  return r;
}

std::vector<LearnerConfig> oracle_variants() {
  return {LearnerConfig::memo(),
          LearnerConfig::one_nn(),
          LearnerConfig::kc1nn(1),
          LearnerConfig::kc1nn(2),
          LearnerConfig::kc1nn(4),
          LearnerConfig::knn(KnnSchedule::floor_log2()),
          LearnerConfig::knn(KnnSchedule::floor_sqrt()),
          LearnerConfig::knn(KnnSchedule::constant(3))};
}

CheckResult check_oracle_equivalence(const LearnerConfig& config, std::uint64_t seed,
                                     std::uint64_t sequences, std::uint64_t max_len) {
  CheckResult r{"oracle equivalence " + config.name(), true, 0, 0, {}};
  LearnerConfig clean = config;
  clean.corrupt_tie_break = false;
  for (std::uint64_t i = 0; i < sequences; ++i) {
    const FuzzSequence seq = fuzz_sequence(seed, i, max_len);
    Learner fast(config);
    ReferenceLearner slow(clean);
    bool ok = true;
    for (std::size_t t = 0; t < seq.xs.size() && ok; ++t) {
      const Label a = fast.step(seq.xs[t], seq.ys[t]);
      const Label b = slow.step(seq.xs[t], seq.ys[t]);
      if (a != b) {
        ok = false;
        first_failure(r.detail, "sequence " + std::to_string(i) + ": prediction differs at t=" +
                                    std::to_string(t + 1));
      } else if ((t + 1) % 25 == 0 && !(fast.state() == slow.state())) {
        ok = false;
        first_failure(r.detail, "sequence " + std::to_string(i) + ": state differs at t=" +
                                    std::to_string(t + 1));
      }
    }
    if (ok && !(fast.state() == slow.state())) {
      ok = false;
      first_failure(r.detail, "sequence " + std::to_string(i) + ": final state differs");
    }
    ++r.cases;
    if (!ok) ++r.failures;
  }
  r.passed = r.failures == 0;
  return r;
}

CheckResult check_cap_invariant(std::uint32_t k, std::uint64_t seed, std::uint64_t sequences,
                                std::uint64_t max_len) {
  CheckResult r{"cap invariant k=" + std::to_string(k), true, 0, 0, {}};
  auto audit = [&](const LearnerState& st, std::uint64_t seq) {
    std::set<Time> deleted;
    for (const auto& [t, at] : st.deletions) {
      deleted.insert(t);
      if (st.child_count[t - 1] != k || at <= t) {
        first_failure(r.detail, "sequence " + std::to_string(seq) + ": bad deletion of t=" +
                                    std::to_string(t));
        return false;
      }
    }
    const std::set<Time> members(st.dataset.begin(), st.dataset.end());
    for (Time t = 1; t < st.next_time; ++t) {
      if (st.child_count[t - 1] > k) {
        first_failure(r.detail, "sequence " + std::to_string(seq) + ": child_count over cap at t=" +
                                    std::to_string(t));
        return false;
      }
      const bool expect = st.first_seen[t - 1] == t && deleted.count(t) == 0;
      if (expect != (members.count(t) == 1)) {
        first_failure(r.detail, "sequence " + std::to_string(seq) + ": membership law fails at t=" +
                                    std::to_string(t));
        return false;
      }
    }
    return true;
  };
  for (std::uint64_t i = 0; i < sequences; ++i) {
    const FuzzSequence seq = fuzz_sequence(seed ^ (0x9e37ULL * k), i, max_len);
    Learner learner(LearnerConfig::kc1nn(k));
    std::set<Dyadic, DyadicLess> distinct;
    bool ok = true;
    for (std::size_t t = 0; t < seq.xs.size() && ok; ++t) {
      learner.step(seq.xs[t], seq.ys[t]);
      distinct.insert(seq.xs[t]);
      if (learner.dataset_size() + learner.deletion_count() != distinct.size()) {
        ok = false;
        first_failure(r.detail, "sequence " + std::to_string(i) + ": size law fails at t=" +
                                    std::to_string(t + 1));
      } else if ((t + 1) % 50 == 0) {
        ok = audit(learner.state(), i);
      }
    }
    if (ok) ok = audit(learner.state(), i);
    ++r.cases;
    if (!ok) ++r.failures;
  }
  r.passed = r.failures == 0;
  return r;
}

CheckResult check_path_inequality_on(const GeneratorConfig& generator, std::uint64_t seed,
                             std::uint64_t max_pairs) {
  const Trajectory traj = generate(generator, seed);
  Learner learner(LearnerConfig::kc1nn(2));
  for (const auto& s : traj.samples) {
    learner.step(s.x, eval_target(generator.target, s.x, s.provenance));
  }
  const LearnerState st = learner.state();
  const PathCheckResult res = path_inequality_check(build_tree(st), st.points, seed, max_pairs);
  CheckResult r{"path inequality " + std::string(to_string(generator.kind)), true, res.checked,
                res.violations.size(), {}};
  r.detail = "checked=" + std::to_string(res.checked) + " skipped=" + std::to_string(res.skipped);
  if (!res.violations.empty()) {
    const auto& v = res.violations.front();
    r.detail += " first violation: inequality " + std::to_string(v.inequality) + " between t=" +
                std::to_string(v.p.back()) + " and t=" + std::to_string(v.q.back());
  }
  r.passed = res.violations.empty();
  return r;
}

std::vector<CheckResult> run_selftest(const SelftestOptions& options) {
  std::vector<CheckResult> out;
  out.push_back(check_dyadic_filter(options.seed, 20000));
  for (auto config : oracle_variants()) {
    config.corrupt_tie_break = options.corrupt_tie_break;
    out.push_back(check_oracle_equivalence(config, options.seed, 100, 200));
  }
  for (std::uint32_t k : {1u, 2u, 4u}) {
    out.push_back(check_cap_invariant(k, options.seed, 200, 500));
  }
  GeneratorConfig canned;
  canned.kind = ProcessKind::adversarial_1nn;
  canned.horizon = 2000;
  canned.schedule = ScheduleParams::one_nn_desk(canned.horizon);
  out.push_back(check_path_inequality_on(canned, options.seed, 2000));
  return out;
}

}  // namespace capnn
