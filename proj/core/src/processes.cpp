#include "capnn/processes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "capnn/error.hpp"
#include "capnn/rng.hpp"

namespace capnn {
namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();
constexpr char kMagic[8] = {'C', 'A', 'P', 'N', 'T', 'R', 'J', '1'};

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

// ceil(log2 v) for v >= 1.
std::uint64_t ceil_log2(const mpz_class& v) {
  if (v <= 1) return 0;
  const mpz_class w = v - 1;
  return mpz_sizeinbase(w.get_mpz_t(), 2);
}

void put_varint(std::vector<std::uint8_t>& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<std::uint8_t>(v | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint64_t get_varint(std::span<const std::uint8_t> in, std::size_t& pos) {
  std::uint64_t v = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    if (pos >= in.size()) throw std::invalid_argument("truncated trajectory");
    const std::uint8_t byte = in[pos++];
    v |= static_cast<std::uint64_t>(byte & 0x7f) << shift;
    if ((byte & 0x80) == 0) return v;
  }
  throw std::invalid_argument("varint too long");
}

LabeledSample make_sample(Time t, Dyadic x, Provenance prov,
                          const TargetFunction& target) {
  Label y = eval_target(target, x, prov);
  return {t, std::move(x), y, prov};
}

}  // namespace

// ---------------------------------------------------------------------------
// ScheduleParams

ScheduleParams ScheduleParams::one_nn_desk(std::uint64_t horizon) {
  ScheduleParams s;
  s.family = ProcessFamily::one_nn;
  s.preset = SchedulePreset::desk;
  s.horizon = horizon;
  return s;
}

ScheduleParams ScheduleParams::knn_desk(std::uint64_t horizon) {
  ScheduleParams s;
  s.family = ProcessFamily::knn;
  s.preset = SchedulePreset::desk;
  s.horizon = horizon;
  s.paired_schedule = KnnSchedule::floor_log2();
  return s;
}

std::uint64_t ScheduleParams::n(std::uint64_t k) const {
  const double kd = static_cast<double>(k);
  if (family == ProcessFamily::one_nn) {
    return static_cast<std::uint64_t>(std::floor(kd * (1.0 + std::log(kd))));
  }
  if (preset == SchedulePreset::desk) return k * k;
  return static_cast<std::uint64_t>(std::floor(std::exp(std::pow(kd, 0.5 - epsilon))));
}

std::uint64_t ScheduleParams::p(std::uint64_t k) const {
  if (preset == SchedulePreset::desk) {
    return sat_add(sat_add(sat_mul(2, n(k + 1)), k), density_guard);
  }
  if (family == ProcessFamily::one_nn) return sat_mul(k, k);
  return k >= 32 ? kSaturated : std::uint64_t{1} << (2 * k);
}

std::uint64_t ScheduleParams::d(std::uint64_t k) const {
  if (family == ProcessFamily::one_nn) return 0;
  if (preset == SchedulePreset::desk) {
    // ceil(4 log2(k + 2)) = ceil(log2((k + 2)^4)).
    mpz_class v = k + 2;
    v = v * v;
    v = v * v;
    return ceil_log2(v);
  }
  const std::uint64_t nk = n(k);
  const std::uint64_t gap = n(k + 1) - nk - 1;
  const double lg = std::log(static_cast<double>(nk));
  if (lg <= 0.0) return gap;
  const auto ratio = static_cast<std::uint64_t>(
      std::floor(static_cast<double>(nk) / std::pow(lg, 1.0 + delta)));
  return std::min(ratio, gap);
}

std::vector<Block> ScheduleParams::blocks() const {
  std::vector<Block> out;
  const std::uint64_t n1 = n(1);
  for (std::uint64_t k = 1;; ++k) {
    const std::uint64_t nk = n(k);
    const Time start = nk - n1 + 1;
    if (start > horizon) break;
    const std::uint64_t full = n(k + 1) - nk;
    Block b;
    b.k = k;
    b.start = start;
    b.length = std::min<std::uint64_t>(full, horizon - start + 1);
    b.p = p(k);
    b.d = d(k);
    b.truncated = family == ProcessFamily::knn && b.d + 1 >= full;
    out.push_back(b);
  }
  return out;
}

std::vector<std::string> ScheduleParams::validate() const {
  std::vector<std::string> warnings;
  if (horizon == 0) throw ConfigError("horizon must be >= 1");
  if (n(1) < 1) throw ConfigError("schedule requires n_1 >= 1");
  if (family == ProcessFamily::knn && preset == SchedulePreset::paper_exact) {
    if (!(epsilon > 0.0 && epsilon < 0.5 && delta > 0.0)) {
      throw ConfigError("kNN process needs 0 < epsilon < 1/2 and delta > 0");
    }
    // Cross-multiplied, with a margin so that the boundary case (e.g.
    // eps = 0.1, delta = 1) is not accepted through rounding.
    const double lhs = 1.0 + 2.0 * epsilon;
    const double rhs = (1.0 + delta / 2.0) * (1.0 - 2.0 * epsilon);
    if (!(lhs < rhs - 1e-12)) {
      throw ConfigError(
          "kNN process needs (1 + 2 eps) / (1 - 2 eps) < 1 + delta / 2");
    }
  }
  // Strict increase, checked before blocks() relies on it.
  const std::uint64_t n1 = n(1);
  for (std::uint64_t k = 1; n(k) - n1 + 1 <= horizon; ++k) {
    if (n(k + 1) <= n(k)) {
      throw ConfigError("n_k must be strictly increasing (fails at k = " +
                        std::to_string(k) + ")");
    }
  }
  const std::uint64_t first_checked = preset == SchedulePreset::paper_exact ? 2 : 1;
  for (const Block& b : blocks()) {
    const std::uint64_t k = b.k;
    const std::uint64_t nk = n(k);
    if (k >= first_checked && !(b.p > nk)) {
      throw ConfigError("p_k > n_k fails at k = " + std::to_string(k));
    }
    if (preset == SchedulePreset::desk &&
        b.p < sat_add(sat_add(sat_mul(2, n(k + 1)), k), density_guard)) {
      throw ConfigError("p_k >= 2 n_{k+1} + k + guard fails at k = " +
                        std::to_string(k));
    }
    if (family == ProcessFamily::knn) {
      if (b.truncated) {
        warnings.push_back("block " + std::to_string(k) +
                           " truncated to planted points (d_k = " +
                           std::to_string(b.d) + ", block length " +
                           std::to_string(n(k + 1) - nk) + ")");
      } else if (paired_schedule) {
        std::uint64_t worst = 0;
        for (Time t = b.start; t < b.start + b.length; ++t) {
          worst = std::max(worst, paired_schedule->at(t));
        }
        if (b.d < worst) {
          throw ConfigError("d_k >= max block k_n fails at k = " +
                            std::to_string(k) + " (d_k = " + std::to_string(b.d) +
                            ", k_n up to " + std::to_string(worst) + ")");
        }
      }
    }
    // Largest exponent: U_k bits plus the deepest perturbation shift.
    const std::uint64_t deepest =
        sat_add(sat_add(q(k), nk), sat_mul(2, b.length));
    if (b.p > exponent_cap || deepest > exponent_cap) {
      throw PrecisionError("block " + std::to_string(k) +
                               " needs more than the exponent cap of " +
                               std::to_string(exponent_cap) + " bits",
                           k);
    }
  }
  return warnings;
}

// ---------------------------------------------------------------------------
// Generators

std::string_view to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::adversarial_1nn:
      return "adversarial-1nn";
    case ProcessKind::adversarial_knn:
      return "adversarial-knn";
    case ProcessKind::iid_uniform:
      return "iid-uniform";
    case ProcessKind::enumerated_fresh:
      return "enumerated-fresh";
    case ProcessKind::finite_support:
      return "finite-support";
  }
  return "?";
}

ProcessKind parse_process_kind(std::string_view text) {
  for (auto k : {ProcessKind::adversarial_1nn, ProcessKind::adversarial_knn,
                 ProcessKind::iid_uniform, ProcessKind::enumerated_fresh,
                 ProcessKind::finite_support}) {
    if (to_string(k) == text) return k;
  }
  throw std::invalid_argument("unknown process: " + std::string(text));
}

Dyadic perturbed_point(const Dyadic& anchor, const Dyadic& offset,
                       std::uint64_t shift) {
  if (compare(offset, anchor) >= 0) {
    return add(anchor, shift_right(sub(offset, anchor), shift));
  }
  return sub(anchor, shift_right(sub(anchor, offset), shift));
}

Dyadic enumerated_point(std::uint64_t t) {
  if (t == 0) throw std::invalid_argument("enumerated_point: t must be >= 1");
  std::uint64_t p = 0;
  for (std::uint64_t v = t; v > 0; v >>= 1) ++p;
  const std::uint64_t j = t - (std::uint64_t{1} << (p - 1));
  return Dyadic::normalize(2 * j + 1, p);
}

namespace {

Trajectory gen_adversarial(std::uint64_t seed, ScheduleParams params,
                           const TargetFunction& target, ProcessFamily family) {
  params.family = family;
  Trajectory traj;
  traj.generator = std::string(to_string(
      family == ProcessFamily::one_nn ? ProcessKind::adversarial_1nn
                                      : ProcessKind::adversarial_knn));
  traj.seed = seed;
  traj.warnings = params.validate();
  traj.samples.reserve(params.horizon);

  for (const Block& b : params.blocks()) {
    SeededStream anchor_stream(seed, stream_label(StreamPurpose::anchor, b.k));
    SeededStream offset_stream(seed, stream_label(StreamPurpose::offset, b.k));
    Dyadic anchor = uniform_dyadic_order(anchor_stream, b.p);
    Dyadic offset = uniform_dyadic_bits(offset_stream, params.q(b.k));
    const std::uint64_t nk = params.n(b.k);

    std::uint64_t i = 0;
    if (family == ProcessFamily::one_nn) {
      traj.samples.push_back(
          make_sample(b.start, anchor, Provenance::anchor_dyadic, target));
      i = 1;
    } else {
      for (; i <= b.d && i < b.length; ++i) {
        const Provenance prov =
            i == 0 ? Provenance::anchor_dyadic : Provenance::planted_neighbor;
        traj.samples.push_back(make_sample(
            b.start + i, nth_closest_dyadic(anchor, b.p, i + 1), prov, target));
      }
    }
    // The j-th perturbed point of the block sits at shift n_k + 2j.
    const std::uint64_t first_perturbed = i;
    for (; i < b.length; ++i) {
      const std::uint64_t j = i - first_perturbed + 1;
      traj.samples.push_back(make_sample(
          b.start + i, perturbed_point(anchor, offset, nk + 2 * j),
          Provenance::perturbed, target));
    }
    traj.blocks.push_back({b, std::move(anchor), std::move(offset)});
  }
  return traj;
}

}  // namespace

Trajectory gen_1nn_adversarial(std::uint64_t seed, ScheduleParams params,
                               const TargetFunction& target) {
  return gen_adversarial(seed, std::move(params), target, ProcessFamily::one_nn);
}

Trajectory gen_knn_adversarial(std::uint64_t seed, ScheduleParams params,
                               const TargetFunction& target) {
  return gen_adversarial(seed, std::move(params), target, ProcessFamily::knn);
}

Trajectory gen_iid_uniform(std::uint64_t seed, std::uint64_t horizon,
                           std::uint64_t q, const TargetFunction& target) {
  if (q == 0) throw ConfigError("iid precision q must be >= 1");
  Trajectory traj;
  traj.generator = std::string(to_string(ProcessKind::iid_uniform));
  traj.seed = seed;
  traj.samples.reserve(horizon);
  SeededStream stream(seed, stream_label(StreamPurpose::iid, 0));
  for (Time t = 1; t <= horizon; ++t) {
    traj.samples.push_back(
        make_sample(t, uniform_dyadic_bits(stream, q), Provenance::iid, target));
  }
  return traj;
}

Trajectory gen_enumerated_fresh(std::uint64_t horizon, const TargetFunction& target) {
  Trajectory traj;
  traj.generator = std::string(to_string(ProcessKind::enumerated_fresh));
  traj.samples.reserve(horizon);
  for (Time t = 1; t <= horizon; ++t) {
    traj.samples.push_back(
        make_sample(t, enumerated_point(t), Provenance::enumerated, target));
  }
  return traj;
}

Trajectory gen_finite_support(std::uint64_t seed, std::span<const Dyadic> support,
                              std::uint64_t horizon, const TargetFunction& target) {
  if (support.empty()) throw ConfigError("finite support must be non-empty");
  Trajectory traj;
  traj.generator = std::string(to_string(ProcessKind::finite_support));
  traj.seed = seed;
  traj.samples.reserve(horizon);
  SeededStream stream(seed, stream_label(StreamPurpose::support, 0));
  for (Time t = 1; t <= horizon; ++t) {
    const Dyadic& x = support[stream.uniform_below(support.size())];
    traj.samples.push_back(make_sample(t, x, Provenance::enumerated, target));
  }
  return traj;
}

Trajectory generate(const GeneratorConfig& config, std::uint64_t seed) {
  ScheduleParams params = config.schedule;
  params.horizon = config.horizon;
  switch (config.kind) {
    case ProcessKind::adversarial_1nn:
      return gen_1nn_adversarial(seed, params, config.target);
    case ProcessKind::adversarial_knn:
      return gen_knn_adversarial(seed, params, config.target);
    case ProcessKind::iid_uniform:
      return gen_iid_uniform(seed, config.horizon, config.precision_q, config.target);
    case ProcessKind::enumerated_fresh: {
      Trajectory traj = gen_enumerated_fresh(config.horizon, config.target);
      traj.seed = seed;
      return traj;
    }
    case ProcessKind::finite_support:
      return gen_finite_support(seed, config.support, config.horizon, config.target);
  }
  throw ConfigError("unknown process kind");
}

// ---------------------------------------------------------------------------
// Serialization

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,x,y,provenance\n";
  for (const auto& s : traj.samples) {
    out << s.t << ',' << s.x.to_string() << ',' << s.y.tag << ','
        << to_string(s.provenance) << '\n';
  }
}

std::vector<std::uint8_t> encode_trajectory(const Trajectory& traj) {
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_varint(out, traj.seed);
  put_varint(out, traj.generator.size());
  out.insert(out.end(), traj.generator.begin(), traj.generator.end());
  put_varint(out, traj.samples.size());
  for (const auto& s : traj.samples) {
    put_varint(out, s.t);
    s.x.append_binary(out);
    put_varint(out, s.y.tag);
    out.push_back(static_cast<std::uint8_t>(s.provenance));
  }
  return out;
}

Trajectory decode_trajectory(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < sizeof(kMagic) ||
      !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw std::invalid_argument("not a trajectory cache");
  }
  std::size_t pos = sizeof(kMagic);
  Trajectory traj;
  traj.seed = get_varint(bytes, pos);
  const std::uint64_t name_len = get_varint(bytes, pos);
  if (name_len > bytes.size() - pos) throw std::invalid_argument("truncated trajectory");
  traj.generator.assign(bytes.begin() + pos, bytes.begin() + pos + name_len);
  pos += name_len;
  const std::uint64_t count = get_varint(bytes, pos);
  traj.samples.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    LabeledSample s;
    s.t = get_varint(bytes, pos);
    s.x = Dyadic::read_binary(bytes, pos);
    s.y = Label(static_cast<std::uint32_t>(get_varint(bytes, pos)));
    if (pos >= bytes.size()) throw std::invalid_argument("truncated trajectory");
    const std::uint8_t prov = bytes[pos++];
    if (prov > static_cast<std::uint8_t>(Provenance::enumerated)) {
      throw std::invalid_argument("bad provenance byte");
    }
    s.provenance = static_cast<Provenance>(prov);
    traj.samples.push_back(std::move(s));
  }
  if (pos != bytes.size()) throw std::invalid_argument("trailing bytes in trajectory");
  return traj;
}

}  // namespace capnn
