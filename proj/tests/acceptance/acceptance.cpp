// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "capnn/harness.hpp"
#include "capnn/partitions.hpp"
#include "capnn/processes.hpp"
#include "capnn/rng.hpp"
#include "capnn/selfcheck.hpp"
#include "cli.hpp"

namespace {

using namespace capnn;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSeed = 0xacce97;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::size_t index_of(const std::vector<std::uint64_t>& cps, std::uint64_t T) {
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (cps[i] == T) return i;
  }
  throw std::logic_error("checkpoint " + std::to_string(T) + " missing");
}

std::string curve(const AggregateReport& r, const std::vector<std::size_t>& at) {
  std::string s;
  for (std::size_t i : at) s += (s.empty() ? "" : " -> ") + fmt(r.mean[i]);
  return s;
}

// Shared by criteria 1 and 2: one set of trajectories, both learners.
struct OneNnRuns {
  std::vector<AggregateReport> reports;
  double seconds = 0.0;
  std::vector<std::size_t> at;
};

const OneNnRuns& one_nn_runs() {
  static const OneNnRuns runs = [] {
    const cli::ExperimentConfig cfg = cli::make_preset("thm4-2c1nn-succeeds");
    OneNnRuns r;
    const auto start = Clock::now();
    r.reports = run_monte_carlo(cfg.generator(), cfg.target,
                                {LearnerConfig::one_nn(), LearnerConfig::kc1nn(2)},
                                cfg.resolved_checkpoints(), {20, cfg.seed, 0});
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    const auto& cps = r.reports[0].checkpoints;
    r.at = {index_of(cps, 5000), index_of(cps, 10000), index_of(cps, 20000)};
    return r;
  }();
  return runs;
}

Outcome one_nn_fails() {
  const OneNnRuns& runs = one_nn_runs();
  const AggregateReport& r = runs.reports[0];
  std::size_t monotone = 0;
  for (std::size_t t = 0; t < r.trials(); ++t) {
    bool ok = true;
    for (std::size_t j = 1; j < runs.at.size(); ++j) {
      ok = ok && r.trial_loss(t, runs.at[j]) >= r.trial_loss(t, runs.at[j - 1]);
    }
    monotone += ok;
  }
  const double final_loss = r.mean[runs.at.back()];
  return {final_loss >= 0.75 && monotone >= 18 && runs.seconds < 300.0,
          "mean loss " + fmt(final_loss) + " (need >= 0.75), non-decreasing in " +
              std::to_string(monotone) + "/20 seeds (need >= 18), " + fmt(runs.seconds) +
              " s for both learners (need < 300)"};
}

Outcome two_c1nn_succeeds() {
  const OneNnRuns& runs = one_nn_runs();
  const AggregateReport& nn = runs.reports[0];
  const AggregateReport& c2 = runs.reports[1];
  bool decreasing = true;
  for (std::size_t j = 1; j < runs.at.size(); ++j) {
    decreasing = decreasing && c2.mean[runs.at[j]] < c2.mean[runs.at[j - 1]];
  }
  const double loss = c2.mean[runs.at.back()];
  const double gap = nn.mean[runs.at.back()] - loss;
  return {loss <= 0.45 && decreasing && gap >= 0.3,
          "mean loss " + fmt(loss) + " (need <= 0.45), curve " + curve(c2, runs.at) +
              " (need strictly decreasing), gap to 1NN " + fmt(gap) + " (need >= 0.3)"};
}

Outcome knn_fails() {
  const cli::ExperimentConfig cfg = cli::make_preset("thm3-knn-fails");
  // Preset learners: kNN with k_n = floor(log2 n), then 2C1NN.
  const auto reports = run_monte_carlo(cfg.generator(), cfg.target, cfg.learners,
                                       cfg.resolved_checkpoints(), {10, cfg.seed, 0});
  const std::size_t last = index_of(reports[0].checkpoints, 20000);
  const double knn = reports[0].mean[last];
  const double c2 = reports[1].mean[last];
  return {knn >= 0.6 && c2 <= 0.45,
          "kNN mean loss " + fmt(knn) + " (need >= 0.6), 2C1NN " + fmt(c2) + " (need <= 0.45)"};
}

Outcome crf_check() {
  const cli::ExperimentConfig cfg = cli::make_preset("crf-check");
  const GeneratorConfig gen = cfg.generator();
  const IntervalSet half = IntervalSet::parse("[0,1/2)");
  double sum = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const Trajectory tr = generate(gen, derive_seed(cfg.seed, i));
    sum += crf_frequency(tr, half, {20000}).back().frequency;
  }
  const double mean = sum / 20.0;
  return {mean >= 0.45 && mean <= 0.55, "mean frequency " + fmt(mean) + " (need 0.5 +- 0.05)"};
}

Outcome from_checks(const std::vector<CheckResult>& checks) {
  Outcome o{true, {}};
  for (const auto& c : checks) {
    o.passed = o.passed && c.passed;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += c.name + ": " + std::to_string(c.failures) + "/" + std::to_string(c.cases) +
                " failures";
    if (!c.passed && !c.detail.empty()) o.detail += " (" + c.detail + ")";
  }
  return o;
}

Outcome cap_invariant() {
  std::vector<CheckResult> checks;
  for (std::uint32_t k : {1u, 2u, 4u}) checks.push_back(check_cap_invariant(k, kSeed, 1000, 500));
  return from_checks(checks);
}

Outcome oracle_equivalence() {
  std::vector<CheckResult> checks;
  for (const auto& v : oracle_variants()) {
    checks.push_back(check_oracle_equivalence(v, kSeed, 500, 200));
  }
  return from_checks(checks);
}

Outcome path_inequality() {
  Outcome o{true, {}};
  for (const char* preset : {"thm4-1nn-fails", "thm3-knn-fails"}) {
    const cli::ExperimentConfig cfg = cli::make_preset(preset);
    const CheckResult c = check_path_inequality_on(cfg.generator(), cfg.seed, 10000);
    const bool ok = c.passed && c.cases >= 10000;
    o.passed = o.passed && ok;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += std::string(preset) + ": " + std::to_string(c.failures) + " violations over " +
                std::to_string(c.cases) + " pairs (need 0 over >= 10000)";
  }
  return o;
}

Outcome smv_separation() {
  GeneratorConfig fresh;
  fresh.kind = ProcessKind::enumerated_fresh;
  fresh.horizon = 20000;
  const std::vector<std::uint64_t> cps = default_checkpoints(20000);
  const SmvReport lin = smv_ratio_report(
      cells_visited_curve(generate(fresh, kSeed), PartitionSpec::distinct_points(), cps));
  double min_ratio = 1.0;
  for (const auto& row : lin.rows) min_ratio = std::min(min_ratio, row.ratio);

  const cli::ExperimentConfig cfg = cli::make_preset("smv-grid");
  const Trajectory adv = generate(cfg.generator(), derive_seed(cfg.seed, 0));
  const SmvReport grid = smv_ratio_report(
      cells_visited_curve(adv, PartitionSpec::grid(Dyadic::inverse_pow2(10)),
                          cfg.resolved_checkpoints()));
  const SmvRow& last = grid.rows.back();

  const bool ok = lin.verdict == SmvVerdict::linear && min_ratio >= 0.99 &&
                  grid.verdict == SmvVerdict::shrinking && last.T == 20000 && last.ratio <= 0.1;
  return {ok, "points on fresh: " + std::string(to_string(lin.verdict)) + ", min ratio " +
                  fmt(min_ratio) + " (need linear, >= 0.99); grid on 1NN adversarial: " +
                  std::string(to_string(grid.verdict)) + ", ratio at T=" +
                  std::to_string(last.T) + " " + fmt(last.ratio) + " (need shrinking, <= 0.1)"};
}

Outcome exact_filter() { return from_checks({check_dyadic_filter(kSeed, 100000, 4096)}); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  struct Case {
    const char* command;
    const char* preset;
    std::vector<const char*> files;
  };
  const std::vector<Case> cases{
      {"run", "thm4-1nn-fails", {"report.csv", "report.json"}},
      {"run", "thm4-2c1nn-succeeds", {"report.csv", "report.json"}},
      {"run", "thm3-knn-fails", {"report.csv", "report.json"}},
      {"crf", "crf-check", {"crf.csv", "crf.json"}},
      {"smv", "smv-grid", {"smv.csv", "smv.json"}},
  };
  const fs::path root = fs::temp_directory_path() / "capnn_acceptance_determinism";
  Outcome o{true, {}};
  std::size_t compared = 0;
  for (const Case& c : cases) {
    std::string outputs[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = root / (std::string(c.preset) + "_" + std::to_string(rep));
      fs::remove_all(dir);
      std::ostringstream out, err;
      // Different worker counts must not change a byte either.
      const int code = cli::run_cli({c.command, "--preset", c.preset, "--seed", "20240517",
                                     "--out-dir", dir.string(), "--workers", rep ? "1" : "0"},
                                    out, err);
      if (code != cli::kOk) {
        o.passed = false;
        o.detail += std::string(c.preset) + " exited " + std::to_string(code) + "; ";
      }
      for (const char* f : c.files) outputs[rep] += std::string("\n--") + f + "\n" + slurp(dir / f);
    }
    ++compared;
    if (outputs[0] != outputs[1]) {
      o.passed = false;
      o.detail += std::string(c.preset) + " differs; ";
    }
  }
  fs::remove_all(root);
  o.detail += std::to_string(compared) + " presets run twice, CSV and JSON compared byte for byte";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1NN fails on its adversarial process", one_nn_fails},
      {"2C1NN succeeds on the same process", two_c1nn_succeeds},
      {"kNN fails on its adversarial process", knn_fails},
      {"relative frequency of [0,1/2)", crf_check},
      {"cap invariant and deletion law", cap_invariant},
      {"incremental learner matches reference", oracle_equivalence},
      {"tree path inequality", path_inequality},
      {"visited-cell estimator separation", smv_separation},
      {"float filter agrees with exact compare", exact_filter},
      {"byte-identical repeated runs", determinism},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    failed += !o.passed;
    std::cout << (o.passed ? "PASS" : "FAIL") << " [" << n << "] " << name << ": " << o.detail
              << " [" << fmt(secs) << " s]" << std::endl;
  }
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criteria failed"
                       : std::string("acceptance: all criteria passed"))
            << std::endl;
  return failed ? 1 : 0;
}
