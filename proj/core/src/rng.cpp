#include "capnn/rng.hpp"

#include <stdexcept>
#include <vector>

namespace capnn {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
             std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

PhiloxCounter philox_round(const PhiloxCounter& c, const PhiloxKey& k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kMul0, c[0], hi0, lo0);
  mulhilo(kMul1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    ctr = philox_round(ctr, key);
  }
  return ctr;
}

SeededStream::SeededStream(std::uint64_t seed, std::uint64_t label)
    : seed_(seed), label_(label) {}

std::uint32_t SeededStream::next_u32() {
  const std::uint64_t slot = drawn_ & 3;
  if (slot == 0) {
    const std::uint64_t block = drawn_ >> 2;
    block_ = philox4x32_10(
        {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
         static_cast<std::uint32_t>(label_), static_cast<std::uint32_t>(label_ >> 32)},
        {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
  }
  ++drawn_;
  return block_[slot];
}

std::uint64_t SeededStream::next_u64() {
  const std::uint64_t hi = next_u32();
  return (hi << 32) | next_u32();
}

std::uint64_t SeededStream::uniform_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below: n must be >= 1");
  // Reject the top partial copy of [0, n) in the 64-bit range.
  const std::uint64_t limit = -n % n;
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v >= limit) return v % n;
  }
}

mpz_class SeededStream::uniform_bits(std::uint64_t bits) {
  mpz_class out;
  if (bits == 0) return out;
  const std::uint64_t words = (bits + 31) / 32;
  std::vector<std::uint32_t> buf(words);
  for (auto& w : buf) w = next_u32();
  const unsigned spare = static_cast<unsigned>(words * 32 - bits);
  if (spare > 0) buf.front() &= 0xffffffffu >> spare;
  mpz_import(out.get_mpz_t(), words, 1, sizeof(std::uint32_t), 0, 0, buf.data());
  return out;
}

Dyadic uniform_dyadic_order(SeededStream& stream, std::uint64_t p) {
  if (p == 0) throw std::invalid_argument("uniform_dyadic_order: p must be >= 1");
  // m = 2j + 1 with j uniform in [0, 2^(p-1)).
  mpz_class m = stream.uniform_bits(p - 1);
  m = 2 * m + 1;
  return Dyadic::normalize(m, p);
}

Dyadic uniform_dyadic_bits(SeededStream& stream, std::uint64_t q) {
  if (q == 0) throw std::invalid_argument("uniform_dyadic_bits: q must be >= 1");
  return Dyadic::normalize(stream.uniform_bits(q), q);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

}  // namespace capnn
