#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "capnn/dyadic.hpp"
#include "capnn/learners.hpp"
#include "capnn/spaces.hpp"

namespace capnn {

enum class SchedulePreset { paper_exact, desk };
enum class ProcessFamily { one_nn, knn };

// Block k of an adversarial process: times [start, start + length).
struct Block {
  std::uint64_t k = 0;
  Time start = 0;
  std::uint64_t length = 0;
  std::uint64_t p = 0;
  // Planted neighbors beyond the anchor (kNN family only).
  std::uint64_t d = 0;
  // Fewer than d + 1 slots: the block holds planted points only.
  bool truncated = false;
};

// Block schedule of the adversarial processes.
//
// one_nn: n_k = floor(k (1 + ln k)); p_k = k^2 (paper_exact) or
//         2 n_{k+1} + k + guard (desk).
// knn:    paper_exact n_k = floor(e^{k^{1/2 - eps}}), p_k = 4^k,
//         d_k = min(floor(n_k / (ln n_k)^{1+delta}), n_{k+1} - n_k - 1);
//         desk n_k = k^2, d_k = ceil(4 log2(k + 2)), p_k = 2 n_{k+1} + k + guard.
struct ScheduleParams {
  ProcessFamily family = ProcessFamily::one_nn;
  SchedulePreset preset = SchedulePreset::desk;
  std::uint64_t horizon = 20000;
  std::uint64_t density_guard = 16;
  // Bits of U_k beyond p_k.
  std::uint64_t offset_guard = 64;
  double epsilon = 0.05;
  double delta = 1.0;
  // k_n schedule the kNN process must defeat (d_k >= block-max k_n).
  std::optional<KnnSchedule> paired_schedule;
  std::uint64_t exponent_cap = kDefaultExponentCap;

  static ScheduleParams one_nn_desk(std::uint64_t horizon);
  static ScheduleParams knn_desk(std::uint64_t horizon);

  std::uint64_t n(std::uint64_t k) const;
  std::uint64_t p(std::uint64_t k) const;
  std::uint64_t d(std::uint64_t k) const;
  // Precision of U_k in bits.
  std::uint64_t q(std::uint64_t k) const { return p(k) + offset_guard; }

  // Blocks covering times 1..horizon; the last one may be cut by the horizon.
  std::vector<Block> blocks() const;

  // Checks the standing inequalities for every block in the horizon.
  // Throws ConfigError on a violated invariant, PrecisionError when a point
  // would exceed exponent_cap. Returns warnings (e.g. truncated blocks).
  std::vector<std::string> validate() const;
};

struct LabeledSample {
  Time t = 0;
  Dyadic x;
  Label y;
  Provenance provenance = Provenance::iid;

  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

enum class ProcessKind {
  adversarial_1nn,
  adversarial_knn,
  iid_uniform,
  enumerated_fresh,
  finite_support,
};

std::string_view to_string(ProcessKind kind);
ProcessKind parse_process_kind(std::string_view text);

struct GeneratorConfig {
  ProcessKind kind = ProcessKind::adversarial_1nn;
  std::uint64_t horizon = 20000;
  // Adversarial processes; its horizon is overwritten by `horizon`.
  ScheduleParams schedule;
  // iid_uniform precision in bits.
  std::uint64_t precision_q = 32;
  // finite_support points.
  std::vector<Dyadic> support;
  // Target attached to the emitted labels.
  TargetFunction target;
};

// Per-block randomness of an adversarial trajectory.
struct BlockDraw {
  Block block;
  Dyadic anchor;
  Dyadic offset;
};

struct Trajectory {
  std::string generator;
  std::uint64_t seed = 0;
  std::vector<LabeledSample> samples;
  std::vector<BlockDraw> blocks;
  std::vector<std::string> warnings;
};

// D + (U - D) / 2^shift, exactly.
Dyadic perturbed_point(const Dyadic& anchor, const Dyadic& offset,
                       std::uint64_t shift);
// t-th element (t >= 1) of 1/2, 1/4, 3/4, 1/8, 3/8, ...
Dyadic enumerated_point(std::uint64_t t);

Trajectory gen_1nn_adversarial(std::uint64_t seed, ScheduleParams params,
                               const TargetFunction& target = TargetFunction::dyadics());
Trajectory gen_knn_adversarial(std::uint64_t seed, ScheduleParams params,
                               const TargetFunction& target = TargetFunction::dyadics());
Trajectory gen_iid_uniform(std::uint64_t seed, std::uint64_t horizon, std::uint64_t q,
                           const TargetFunction& target);
Trajectory gen_enumerated_fresh(std::uint64_t horizon, const TargetFunction& target);
Trajectory gen_finite_support(std::uint64_t seed, std::span<const Dyadic> support,
                              std::uint64_t horizon, const TargetFunction& target);

Trajectory generate(const GeneratorConfig& config, std::uint64_t seed);

// CSV with header "t,x,y,provenance"; x as m/2^e.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
// Binary cache of the samples (blocks are not stored).
std::vector<std::uint8_t> encode_trajectory(const Trajectory& traj);
Trajectory decode_trajectory(std::span<const std::uint8_t> bytes);

}  // namespace capnn
