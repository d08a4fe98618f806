#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace capnn {

// Default hard cap on the exponent of generated points, in bits.
inline constexpr std::uint64_t kDefaultExponentCap = std::uint64_t{1} << 20;

// Double approximation of a dyadic with a guaranteed absolute error bound.
struct ApproxFloat {
  double value = 0.0;
  double error_bound = 0.0;
};

// Exact number m / 2^e in [0, 1], stored normalized (m odd, or m = 0 and e = 0).
//
// Values are immutable; copies share the underlying big integer.
class Dyadic {
 public:
  Dyadic();

  // Throws std::domain_error unless 0 <= m <= 2^e.
  static Dyadic normalize(const mpz_class& m, std::uint64_t e);
  static Dyadic normalize(std::uint64_t m, std::uint64_t e);

  static Dyadic zero() { return Dyadic(); }
  static Dyadic one();
  // 2^-j.
  static Dyadic inverse_pow2(std::uint64_t j);

  const mpz_class& numerator() const { return rep_->numerator; }
  std::uint64_t exponent() const { return rep_->exponent; }
  ApproxFloat approx() const { return {rep_->approx, rep_->error_bound}; }
  double to_double() const { return rep_->approx; }

  bool is_zero() const { return rep_->numerator == 0; }
  bool is_one() const { return rep_->exponent == 0 && rep_->numerator == 1; }

  // Textual form "m/2^e" with decimal m and e.
  std::string to_string() const;
  // Accepts "m/2^e", "m/d" with d a power of two (neither need be
  // normalized), and the bare integers 0 and 1.
  static Dyadic parse(std::string_view text);

  // Binary form: varint e, varint byte count, big-endian magnitude bytes.
  void append_binary(std::vector<std::uint8_t>& out) const;
  std::vector<std::uint8_t> to_binary() const;
  // Reads one value starting at `pos` and advances it.
  static Dyadic read_binary(std::span<const std::uint8_t> in, std::size_t& pos);

  std::size_t hash() const noexcept { return rep_->hash; }

  friend bool operator==(const Dyadic& a, const Dyadic& b);

 private:
  struct Rep {
    mpz_class numerator;
    std::uint64_t exponent = 0;
    double approx = 0.0;
    double error_bound = 0.0;
    std::size_t hash = 0;
  };

  explicit Dyadic(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  static Dyadic from_normalized(mpz_class m, std::uint64_t e);

  std::shared_ptr<const Rep> rep_;
};

// Throws std::domain_error if the sum exceeds 1.
Dyadic add(const Dyadic& a, const Dyadic& b);
// Throws std::domain_error if b > a.
Dyadic sub(const Dyadic& a, const Dyadic& b);
// |a - b|, the metric on [0, 1].
Dyadic abs_diff(const Dyadic& a, const Dyadic& b);
Dyadic shift_right(const Dyadic& a, std::uint64_t j);

// Filtered comparison: tries the double filter, falls back to exact integers.
std::strong_ordering compare(const Dyadic& a, const Dyadic& b);
// The filter alone; nullopt when the approximation intervals overlap.
std::optional<std::strong_ordering> compare_filter(const Dyadic& a,
                                                   const Dyadic& b);
// Big-integer comparison without the filter.
std::strong_ordering compare_exact(const Dyadic& a, const Dyadic& b);

inline std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  return compare(a, b);
}

// Exponent p with a in D_p (odd numerator over 2^p). Rejects 0 and 1.
std::uint64_t order_of(const Dyadic& a);

// i-th element (1-based) of D_p ordered by distance to d, ties toward the
// smaller value. Requires d in D_p and 1 <= i <= 2^(p-1).
Dyadic nth_closest_dyadic(const Dyadic& d, std::uint64_t p, std::uint64_t i);

struct DyadicHash {
  std::size_t operator()(const Dyadic& d) const noexcept { return d.hash(); }
};

struct DyadicLess {
  bool operator()(const Dyadic& a, const Dyadic& b) const {
    return compare(a, b) < 0;
  }
};

}  // namespace capnn
