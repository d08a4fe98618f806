#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "capnn/harness.hpp"
#include "capnn/learners.hpp"
#include "capnn/partitions.hpp"
#include "capnn/processes.hpp"
#include "capnn/spaces.hpp"

namespace capnn::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kRuntimeError = 2,
  kSelftestFailure = 3,
};

struct ExperimentConfig {
  std::string preset;
  std::uint64_t seed = 1;
  std::uint64_t trials = 1;
  // Not part of the config hash: they do not change any output byte.
  unsigned workers = 0;
  std::string out_dir = "out";

  ProcessKind process = ProcessKind::adversarial_1nn;
  SchedulePreset schedule = SchedulePreset::desk;
  std::uint64_t horizon = 20000;
  std::uint64_t precision_q = 32;
  std::vector<Dyadic> support;

  TargetFunction target;
  std::vector<LearnerConfig> learners{LearnerConfig::kc1nn(2)};
  // Empty: powers of two from 256 plus the horizon.
  std::vector<std::uint64_t> checkpoints;

  PartitionSpec partition = PartitionSpec::grid(Dyadic::inverse_pow2(10));
  IntervalSet crf_set;

  ExperimentConfig();

  GeneratorConfig generator() const;
  std::vector<std::uint64_t> resolved_checkpoints() const;

  // INI text with sections [experiment], [process], [target], [learners],
  // [checkpoints], [smv], [crf].
  std::string to_ini() const;
  // Same text without workers and out_dir; hashed for provenance.
  std::string canonical_text() const;
  std::uint64_t config_hash() const;

  // Throws ConfigError (or PrecisionError for adversarial schedules) before
  // any run starts.
  std::vector<std::string> validate() const;
};

std::vector<std::string> preset_names();
// Throws ConfigError for an unknown name.
ExperimentConfig make_preset(std::string_view name);

// Overlays the keys present in `text` onto `base`; a preset key in the text
// replaces base with that preset first.
ExperimentConfig apply_ini(ExperimentConfig base, std::string_view text);
ExperimentConfig parse_ini(std::string_view text);

// Accepts decimal or 0x-prefixed hexadecimal.
std::uint64_t parse_seed(std::string_view text);

// Entry point shared by main() and the tests. argv excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace capnn::cli
