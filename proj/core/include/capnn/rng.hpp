#pragma once

#include <array>
#include <cstdint>

#include "capnn/dyadic.hpp"

namespace capnn {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds (Salmon et al., "Parallel random numbers: as easy
// as 1, 2, 3", SC'11).
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

// Purpose tags that keep the streams of one trajectory apart.
enum class StreamPurpose : std::uint8_t {
  anchor = 1,
  offset = 2,
  iid = 3,
  support = 4,
  trial_seed = 5,
  sampling = 6,
};

// Stream label for (purpose, index); index is typically a block number.
constexpr std::uint64_t stream_label(StreamPurpose purpose, std::uint64_t index) {
  return (static_cast<std::uint64_t>(purpose) << 56) ^ index;
}

// Counter-based stream: output word n depends only on (seed, label, n).
class SeededStream {
 public:
  SeededStream(std::uint64_t seed, std::uint64_t label);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t label() const { return label_; }
  // Number of 32-bit words drawn so far.
  std::uint64_t counter() const { return drawn_; }

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  // Uniform integer in [0, n); n >= 1.
  std::uint64_t uniform_below(std::uint64_t n);
  // Uniform integer in [0, 2^bits).
  mpz_class uniform_bits(std::uint64_t bits);

 private:
  std::uint64_t seed_;
  std::uint64_t label_;
  std::uint64_t drawn_ = 0;
  PhiloxCounter block_{};
};

// Uniform over D_p = {m / 2^p : m odd}; p >= 1.
Dyadic uniform_dyadic_order(SeededStream& stream, std::uint64_t p);
// m / 2^q with m uniform in [0, 2^q); q >= 1.
Dyadic uniform_dyadic_bits(SeededStream& stream, std::uint64_t q);

// Seed of trial `index` under `base` (SplitMix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace capnn
