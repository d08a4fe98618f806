#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "CLI11.hpp"
#include "capnn/error.hpp"
#include "capnn/report.hpp"
#include "capnn/rng.hpp"
#include "capnn/selfcheck.hpp"

namespace capnn::cli {
namespace {

namespace fs = std::filesystem;
using boost::property_tree::ptree;

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ' || sep != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || p != text.data() + text.size()) {
    throw ConfigError("bad " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return v;
}

std::string learner_list(const std::vector<LearnerConfig>& learners) {
  std::string out;
  for (std::size_t i = 0; i < learners.size(); ++i) {
    if (i > 0) out += ' ';
    out += learners[i].name();
  }
  return out;
}

std::string checkpoint_list(const std::vector<std::uint64_t>& cps) {
  if (cps.empty()) return "default";
  std::string out;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(cps[i]);
  }
  return out;
}

std::string support_list(const std::vector<Dyadic>& support) {
  std::string out;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (i > 0) out += ',';
    out += support[i].to_string();
  }
  return out;
}

std::string_view schedule_name(SchedulePreset p) {
  return p == SchedulePreset::desk ? "desk" : "paper-exact";
}

SchedulePreset parse_schedule(std::string_view text) {
  if (text == "desk") return SchedulePreset::desk;
  if (text == "paper-exact") return SchedulePreset::paper_exact;
  throw ConfigError("unknown schedule preset: " + std::string(text));
}

// Parse helpers rethrow library parse errors as configuration errors.
template <typename F>
auto as_config(std::string_view what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

std::vector<LearnerConfig> parse_learners(const std::vector<std::string>& specs) {
  std::vector<LearnerConfig> out;
  for (const auto& s : specs) {
    for (const auto& item : split(s, ' ')) {
      out.push_back(as_config("learner", [&] { return LearnerConfig::parse(item); }));
    }
  }
  if (out.empty()) throw ConfigError("no learners given");
  return out;
}

std::vector<std::uint64_t> parse_checkpoints(std::string_view text) {
  if (text == "default" || text.empty()) return {};
  std::vector<std::uint64_t> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_u64(item, "checkpoint"));
  return out;
}

std::vector<Dyadic> parse_support(std::string_view text) {
  std::vector<Dyadic> out;
  for (const auto& item : split(text, ',')) {
    out.push_back(as_config("support point", [&] { return Dyadic::parse(item); }));
  }
  return out;
}

std::vector<std::uint64_t> with_halves(std::uint64_t horizon) {
  std::set<std::uint64_t> cps;
  for (auto T : default_checkpoints(horizon)) cps.insert(T);
  if (horizon >= 4) {
    cps.insert(horizon / 4);
    cps.insert(horizon / 2);
  }
  return {cps.begin(), cps.end()};
}

// Keeps checkpoints within a new horizon and ends the grid at it.
void clip_checkpoints(ExperimentConfig& cfg) {
  if (cfg.checkpoints.empty()) return;
  std::erase_if(cfg.checkpoints, [&](std::uint64_t T) { return T > cfg.horizon; });
  if (cfg.checkpoints.empty() || cfg.checkpoints.back() != cfg.horizon) {
    cfg.checkpoints.push_back(cfg.horizon);
  }
}

void overlay(ExperimentConfig& cfg, const ptree& pt) {
  if (auto v = pt.get_optional<std::string>("experiment.seed")) cfg.seed = parse_seed(*v);
  if (auto v = pt.get_optional<std::string>("experiment.trials")) {
    cfg.trials = parse_u64(*v, "trials");
  }
  if (auto v = pt.get_optional<std::string>("experiment.workers")) {
    cfg.workers = static_cast<unsigned>(parse_u64(*v, "workers"));
  }
  if (auto v = pt.get_optional<std::string>("experiment.out_dir")) cfg.out_dir = *v;
  if (auto v = pt.get_optional<std::string>("process.kind")) {
    cfg.process = as_config("process kind", [&] { return parse_process_kind(*v); });
  }
  if (auto v = pt.get_optional<std::string>("process.schedule")) {
    cfg.schedule = parse_schedule(*v);
  }
  if (auto v = pt.get_optional<std::string>("process.horizon")) {
    cfg.horizon = parse_u64(*v, "horizon");
  }
  if (auto v = pt.get_optional<std::string>("process.precision_q")) {
    cfg.precision_q = parse_u64(*v, "precision_q");
  }
  if (auto v = pt.get_optional<std::string>("process.support")) cfg.support = parse_support(*v);
  if (auto v = pt.get_optional<std::string>("target.function")) {
    cfg.target = as_config("target", [&] { return TargetFunction::parse(*v); });
  }
  if (auto v = pt.get_optional<std::string>("learners.list")) {
    cfg.learners = parse_learners({*v});
  }
  if (auto v = pt.get_optional<std::string>("checkpoints.list")) {
    cfg.checkpoints = parse_checkpoints(*v);
  }
  if (auto v = pt.get_optional<std::string>("smv.partition")) {
    cfg.partition = as_config("partition", [&] { return PartitionSpec::parse(*v); });
  }
  if (auto v = pt.get_optional<std::string>("crf.set")) {
    cfg.crf_set = as_config("interval set", [&] { return IntervalSet::parse(*v); });
  }
}

ptree read_ptree(std::string_view text) {
  ptree pt;
  std::istringstream in{std::string(text)};
  try {
    boost::property_tree::ini_parser::read_ini(in, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
  return pt;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

template <typename Writer>
std::string to_text(Writer&& w) {
  std::ostringstream ss;
  w(ss);
  return ss.str();
}

OutputMeta meta_for(const ExperimentConfig& cfg, std::string command) {
  return {std::move(command), cfg.preset, cfg.seed, cfg.config_hash(), cfg.canonical_text()};
}

Trajectory trial_trajectory(const ExperimentConfig& cfg, std::uint64_t trial) {
  return generate(cfg.generator(), derive_seed(cfg.seed, trial));
}

// Subcommands. Each returns an exit code; exceptions are mapped by run_cli.

int cmd_run(const ExperimentConfig& cfg, std::ostream& out) {
  const auto cps = cfg.resolved_checkpoints();
  MonteCarloOptions mc{cfg.trials, cfg.seed, cfg.workers};
  const auto reports = run_monte_carlo(cfg.generator(), cfg.target, cfg.learners, cps, mc);
  const OutputMeta meta = meta_for(cfg, "run");
  fs::create_directories(cfg.out_dir);
  const fs::path dir(cfg.out_dir);
  write_file(dir / "report.csv", to_text([&](std::ostream& o) { write_report_csv(o, reports, meta); }));
  write_file(dir / "report.json", report_json(reports, meta));
  write_file(dir / "plot.svg", loss_curve_svg(reports, meta));

  out << meta_comment(meta) << "\n";
  out << "learner        T  mean_loss       q10       q90  non-increasing trials\n";
  for (const auto& r : reports) {
    const std::size_t last = r.checkpoints.size() - 1;
    std::size_t trending = 0;
    for (std::size_t i = 0; i < r.trials(); ++i) {
      bool ok = true;
      for (std::size_t c = 1; c < r.checkpoints.size(); ++c) {
        ok = ok && r.trial_loss(i, c) <= r.trial_loss(i, c - 1);
      }
      if (ok) ++trending;
    }
    out << std::left << std::setw(10) << r.learner << std::right << std::setw(9)
        << r.checkpoints[last] << "  " << format_fixed(r.mean[last]) << "  "
        << format_fixed(r.q10[last]) << "  " << format_fixed(r.q90[last]) << "  " << trending
        << "/" << r.trials() << "\n";
  }
  out << "wrote " << (dir / "report.csv").string() << ", report.json, plot.svg\n";
  return kOk;
}

int cmd_smv(const ExperimentConfig& cfg, std::ostream& out) {
  const Trajectory traj = trial_trajectory(cfg, 0);
  const auto curve = cells_visited_curve(traj, cfg.partition, cfg.resolved_checkpoints());
  const SmvReport report = smv_ratio_report(curve);
  const OutputMeta meta = meta_for(cfg, "smv");
  fs::create_directories(cfg.out_dir);
  const fs::path dir(cfg.out_dir);
  write_file(dir / "smv.csv",
             to_text([&](std::ostream& o) { write_smv_csv(o, cfg.partition, report, meta); }));
  write_file(dir / "smv.json", smv_json(cfg.partition, report, meta));
  out << meta_comment(meta) << "\n";
  for (const auto& row : report.rows) {
    out << "T=" << row.T << " cells=" << row.count << " ratio=" << format_fixed(row.ratio) << "\n";
  }
  out << "verdict: " << to_string(report.verdict) << "\n";
  return kOk;
}

int cmd_crf(const ExperimentConfig& cfg, std::ostream& out) {
  const auto cps = cfg.resolved_checkpoints();
  std::vector<CrfTrial> trials;
  for (std::uint64_t i = 0; i < cfg.trials; ++i) {
    const Trajectory traj = trial_trajectory(cfg, i);
    trials.push_back({traj.seed, crf_frequency(traj, cfg.crf_set, cps)});
  }
  const OutputMeta meta = meta_for(cfg, "crf");
  fs::create_directories(cfg.out_dir);
  const fs::path dir(cfg.out_dir);
  write_file(dir / "crf.csv",
             to_text([&](std::ostream& o) { write_crf_csv(o, cfg.crf_set, trials, meta); }));
  write_file(dir / "crf.json", crf_json(cfg.crf_set, trials, meta));
  out << meta_comment(meta) << "\n";
  for (std::size_t c = 0; c < cps.size(); ++c) {
    std::uint64_t hits = 0;
    for (const auto& t : trials) hits += t.curve[c].hits;
    const double f = static_cast<double>(hits) /
                     (static_cast<double>(cps[c]) * static_cast<double>(trials.size()));
    out << "T=" << cps[c] << " mean_frequency=" << format_fixed(f) << "\n";
  }
  return kOk;
}

int cmd_trace(const ExperimentConfig& cfg, std::ostream& out) {
  const Trajectory traj = trial_trajectory(cfg, 0);
  fs::create_directories(cfg.out_dir);
  const fs::path path = fs::path(cfg.out_dir) / "trajectory.csv";
  write_file(path, to_text([&](std::ostream& o) {
               o << meta_comment(meta_for(cfg, "trace")) << "\n";
               write_trajectory_csv(o, traj);
             }));
  out << traj.generator << " seed=" << traj.seed << " samples=" << traj.samples.size()
      << " blocks=" << traj.blocks.size() << "\n";
  for (const auto& w : traj.warnings) out << "warning: " << w << "\n";
  out << "wrote " << path.string() << "\n";
  return kOk;
}

int cmd_selftest(std::uint64_t seed, bool corrupt, std::ostream& out) {
  const auto results = run_selftest({seed, corrupt});
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " (cases=" << r.cases
        << " failures=" << r.failures << ")";
    if (!r.detail.empty()) out << " " << r.detail;
    out << "\n";
  }
  out << (all ? "selftest: all passed" : "selftest: FAILED") << "\n";
  return all ? kOk : kSelftestFailure;
}

}  // namespace

// ---------------------------------------------------------------------------
// ExperimentConfig

ExperimentConfig::ExperimentConfig() : crf_set(IntervalSet::parse("[0,1/2)")) {}

GeneratorConfig ExperimentConfig::generator() const {
  GeneratorConfig g;
  g.kind = process;
  g.horizon = horizon;
  g.precision_q = precision_q;
  g.support = support;
  g.target = target;
  g.schedule = process == ProcessKind::adversarial_knn ? ScheduleParams::knn_desk(horizon)
                                                      : ScheduleParams::one_nn_desk(horizon);
  g.schedule.preset = schedule;
  return g;
}

std::vector<std::uint64_t> ExperimentConfig::resolved_checkpoints() const {
  return checkpoints.empty() ? default_checkpoints(horizon) : checkpoints;
}

std::string ExperimentConfig::to_ini() const {
  std::ostringstream s;
  s << "[experiment]\n"
    << "preset=" << preset << "\n"
    << "seed=" << seed << "\n"
    << "trials=" << trials << "\n"
    << "workers=" << workers << "\n"
    << "out_dir=" << out_dir << "\n";
  const std::string rest = canonical_text();
  // canonical_text starts with its own [experiment] block; splice the rest.
  s << rest.substr(rest.find("\n\n[process]") + 1);
  return s.str();
}

std::string ExperimentConfig::canonical_text() const {
  std::ostringstream s;
  s << "[experiment]\n"
    << "preset=" << preset << "\n"
    << "seed=" << seed << "\n"
    << "trials=" << trials << "\n"
    << "\n[process]\n"
    << "kind=" << to_string(process) << "\n"
    << "schedule=" << schedule_name(schedule) << "\n"
    << "horizon=" << horizon << "\n"
    << "precision_q=" << precision_q << "\n"
    << "support=" << support_list(support) << "\n"
    << "\n[target]\n"
    << "function=" << target.to_string() << "\n"
    << "\n[learners]\n"
    << "list=" << learner_list(learners) << "\n"
    << "\n[checkpoints]\n"
    << "list=" << checkpoint_list(checkpoints) << "\n"
    << "\n[smv]\n"
    << "partition=" << partition.to_string() << "\n"
    << "\n[crf]\n"
    << "set=" << crf_set.to_string() << "\n";
  return s.str();
}

std::uint64_t ExperimentConfig::config_hash() const { return fnv1a64(canonical_text()); }

std::vector<std::string> ExperimentConfig::validate() const {
  if (horizon == 0) throw ConfigError("horizon must be >= 1");
  if (trials == 0) throw ConfigError("trials must be >= 1");
  if (learners.empty()) throw ConfigError("no learners given");
  for (const auto& l : learners) {
    if (l.rule == RuleKind::kc1nn && l.cap_k == 0) throw ConfigError("kC1NN cap must be >= 1");
  }
  const auto cps = resolved_checkpoints();
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (cps[i] == 0 || (i > 0 && cps[i] <= cps[i - 1])) {
      throw ConfigError("checkpoints must be strictly increasing and >= 1");
    }
  }
  if (cps.back() > horizon) throw ConfigError("checkpoint beyond the horizon");
  switch (process) {
    case ProcessKind::finite_support:
      if (support.empty()) throw ConfigError("finite-support process needs support points");
      return {};
    case ProcessKind::iid_uniform:
      if (precision_q == 0) throw ConfigError("precision_q must be >= 1");
      return {};
    case ProcessKind::enumerated_fresh:
      return {};
    case ProcessKind::adversarial_1nn:
    case ProcessKind::adversarial_knn: {
      ScheduleParams params = generator().schedule;
      params.horizon = horizon;
      return params.validate();
    }
  }
  return {};
}

std::vector<std::string> preset_names() {
  return {"thm4-1nn-fails", "thm4-2c1nn-succeeds", "thm3-knn-fails", "crf-check", "smv-grid"};
}

ExperimentConfig make_preset(std::string_view name) {
  ExperimentConfig cfg;
  cfg.preset = std::string(name);
  cfg.horizon = 20000;
  cfg.checkpoints = with_halves(cfg.horizon);
  if (name == "thm4-1nn-fails") {
    cfg.trials = 20;
    cfg.learners = {LearnerConfig::one_nn()};
  } else if (name == "thm4-2c1nn-succeeds") {
    cfg.trials = 20;
    cfg.learners = {LearnerConfig::kc1nn(2), LearnerConfig::one_nn()};
  } else if (name == "thm3-knn-fails") {
    cfg.process = ProcessKind::adversarial_knn;
    cfg.trials = 10;
    cfg.learners = {LearnerConfig::knn(KnnSchedule::floor_log2()), LearnerConfig::kc1nn(2)};
  } else if (name == "crf-check") {
    cfg.trials = 20;
    cfg.crf_set = IntervalSet::parse("[0,1/2)");
  } else if (name == "smv-grid") {
    cfg.trials = 1;
    cfg.partition = PartitionSpec::grid(Dyadic::inverse_pow2(10));
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += " " + n;
    throw ConfigError("unknown preset '" + std::string(name) + "'; known:" + known);
  }
  return cfg;
}

ExperimentConfig apply_ini(ExperimentConfig base, std::string_view text) {
  const ptree pt = read_ptree(text);
  if (auto p = pt.get_optional<std::string>("experiment.preset"); p && !p->empty()) {
    base = make_preset(*p);
  }
  overlay(base, pt);
  return base;
}

ExperimentConfig parse_ini(std::string_view text) { return apply_ini(ExperimentConfig{}, text); }

std::uint64_t parse_seed(std::string_view text) {
  std::uint64_t v = 0;
  int base = 10;
  if (text.starts_with("0x") || text.starts_with("0X")) {
    text.remove_prefix(2);
    base = 16;
  }
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v, base);
  if (text.empty() || ec != std::errc() || p != text.data() + text.size()) {
    throw ConfigError("bad seed: '" + std::string(text) + "'");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Entry point

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"capnn: online nearest-neighbor learning experiments on exact dyadic inputs",
               "capnn"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::optional<std::string> preset, seed_text, learner_text, out_dir, config_path, process,
      target, partition, set, checkpoints, schedule;
  std::optional<std::uint64_t> horizon, trials;
  std::optional<std::uint32_t> cap;
  std::optional<unsigned> workers;
  std::vector<std::string> learners;
  std::string write_config;
  bool corrupt = false;

  app.add_option("--preset", preset, "Named experiment (see list below)");
  app.add_option("--config", config_path, "INI config file; flags override its values");
  app.add_option("--seed", seed_text, "Base seed, decimal or 0x-hex");
  app.add_option("--horizon", horizon, "Number of samples per trajectory");
  app.add_option("--trials", trials, "Independent seeded trials");
  app.add_option("--learner", learners,
                 "Learner spec, repeatable: memo, 1nn, 2c1nn, kc1nn:K, knn:log2, knn:const:N");
  app.add_option("--k", cap, "Cap for every kC1NN learner");
  app.add_option("--out-dir", out_dir, "Output directory");
  app.add_option("--workers", workers, "Concurrent trials (default: hardware threads)");
  app.add_option("--process", process,
                 "adversarial-1nn, adversarial-knn, iid-uniform, enumerated-fresh, finite-support");
  app.add_option("--schedule", schedule, "desk or paper-exact");
  app.add_option("--target", target, "dyadics, below:s, ball:c:r, const:n, table:x=y;...");
  app.add_option("--partition", partition, "centered:s, grid:eta, points, or a*b products");
  app.add_option("--set", set, "Interval union for crf, e.g. [0,1/2)");
  app.add_option("--checkpoints", checkpoints, "Comma list of T values, or 'default'");
  app.add_option("--write-config", write_config, "Also write the effective config here");

  auto* run = app.add_subcommand("run", "Monte-Carlo loss curves: report.csv, report.json, plot.svg");
  auto* smv = app.add_subcommand("smv", "Cells visited by one trajectory: smv.csv, smv.json");
  auto* crf = app.add_subcommand("crf", "Relative frequency of an interval set: crf.csv, crf.json");
  auto* trace = app.add_subcommand("trace", "Dump one trajectory to trajectory.csv");
  auto* selftest = app.add_subcommand("selftest", "Run the invariant suites");
  selftest->add_flag("--corrupt-tie-break", corrupt)->group("");

  std::string presets;
  for (const auto& n : preset_names()) presets += "  " + n + "\n";
  app.footer("Presets:\n" + presets +
             "Exit codes: 0 ok, 1 config error, 2 runtime error, 3 selftest failure");

  if (args.empty()) {
    out << app.help();
    return kConfigError;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  if (app.get_subcommands().empty()) {
    err << "error: a subcommand is required\n" << app.help();
    return kConfigError;
  }

  ExperimentConfig cfg;
  std::vector<std::string> warnings;
  try {
    ptree file;
    if (config_path) file = read_ptree(read_file(*config_path));
    std::string preset_name = preset.value_or(file.get("experiment.preset", std::string()));
    if (!preset_name.empty()) cfg = make_preset(preset_name);
    overlay(cfg, file);
    if (seed_text) cfg.seed = parse_seed(*seed_text);
    if (trials) cfg.trials = *trials;
    if (workers) cfg.workers = *workers;
    if (out_dir) cfg.out_dir = *out_dir;
    if (process) cfg.process = as_config("process kind", [&] { return parse_process_kind(*process); });
    if (schedule) cfg.schedule = parse_schedule(*schedule);
    if (target) cfg.target = as_config("target", [&] { return TargetFunction::parse(*target); });
    if (partition) {
      cfg.partition = as_config("partition", [&] { return PartitionSpec::parse(*partition); });
    }
    if (set) cfg.crf_set = as_config("interval set", [&] { return IntervalSet::parse(*set); });
    if (!learners.empty()) cfg.learners = parse_learners(learners);
    if (cap) {
      for (auto& l : cfg.learners) {
        if (l.rule == RuleKind::kc1nn) l.cap_k = *cap;
      }
    }
    if (horizon) {
      cfg.horizon = *horizon;
      clip_checkpoints(cfg);
    }
    if (checkpoints) cfg.checkpoints = parse_checkpoints(*checkpoints);
    if (!selftest->parsed()) warnings = cfg.validate();
    if (!write_config.empty()) write_file(write_config, cfg.to_ini());
  } catch (const PrecisionError& e) {
    err << "error: precision cap exceeded in block " << e.block() << ": " << e.what() << "\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  for (const auto& w : warnings) err << "warning: " << w << "\n";

  try {
    if (run->parsed()) return cmd_run(cfg, out);
    if (smv->parsed()) return cmd_smv(cfg, out);
    if (crf->parsed()) return cmd_crf(cfg, out);
    if (trace->parsed()) return cmd_trace(cfg, out);
    if (selftest->parsed()) return cmd_selftest(cfg.seed, corrupt, out);
  } catch (const PrecisionError& e) {
    err << "error: precision cap exceeded in block " << e.block() << ": " << e.what() << "\n";
    return kRuntimeError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kConfigError;
}

}  // namespace capnn::cli
