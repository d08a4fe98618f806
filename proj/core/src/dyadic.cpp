#include "capnn/dyadic.hpp"

#include <algorithm>
#include <cfloat>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace capnn {
namespace {

// Below this binary scale the approximation collapses to 0 with bound 2^-960,
// keeping every nonzero approximation a normal double.
constexpr std::int64_t kMinScale = -960;

std::size_t mix(std::size_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t bit_length(const mpz_class& m) {
  return m == 0 ? 0 : mpz_sizeinbase(m.get_mpz_t(), 2);
}

std::strong_ordering cmp_mpz(const mpz_class& a, const mpz_class& b) {
  const int c = cmp(a, b);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

// Numerators of a and b scaled to the common exponent max(ea, eb).
std::pair<mpz_class, mpz_class> aligned(const Dyadic& a, const Dyadic& b) {
  const std::uint64_t e = std::max(a.exponent(), b.exponent());
  mpz_class ma = a.numerator();
  mpz_class mb = b.numerator();
  mpz_mul_2exp(ma.get_mpz_t(), ma.get_mpz_t(), e - a.exponent());
  mpz_mul_2exp(mb.get_mpz_t(), mb.get_mpz_t(), e - b.exponent());
  return {std::move(ma), std::move(mb)};
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
    if (pos >= in.size()) throw std::invalid_argument("truncated varint");
    const std::uint8_t byte = in[pos++];
    v |= static_cast<std::uint64_t>(byte & 0x7f) << shift;
    if ((byte & 0x80) == 0) return v;
  }
  throw std::invalid_argument("varint too long");
}

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || s.empty()) {
    throw std::invalid_argument("bad integer in dyadic literal: " +
                                std::string(s));
  }
  return v;
}

}  // namespace

Dyadic::Dyadic() : Dyadic(from_normalized(mpz_class(0), 0)) {}

Dyadic Dyadic::from_normalized(mpz_class m, std::uint64_t e) {
  auto rep = std::make_shared<Rep>();
  rep->exponent = e;
  if (m != 0) {
    long ex = 0;
    const double mant = mpz_get_d_2exp(&ex, m.get_mpz_t());
    const std::int64_t scale =
        static_cast<std::int64_t>(ex) - static_cast<std::int64_t>(e);
    if (scale < kMinScale) {
      rep->approx = 0.0;
      rep->error_bound = std::ldexp(1.0, static_cast<int>(kMinScale));
    } else {
      rep->approx = std::ldexp(mant, static_cast<int>(scale));
      // mpz_get_d_2exp truncates to 53 bits.
      rep->error_bound = bit_length(m) <= 53
                             ? 0.0
                             : std::ldexp(1.0, static_cast<int>(scale - 52));
    }
  }
  std::size_t h = mix(0, e);
  const std::size_t limbs = mpz_size(m.get_mpz_t());
  h = mix(h, limbs);
  if (limbs > 0) {
    h = mix(h, mpz_getlimbn(m.get_mpz_t(), 0));
    h = mix(h, mpz_getlimbn(m.get_mpz_t(), limbs - 1));
  }
  rep->hash = h;
  rep->numerator = std::move(m);
  return Dyadic(std::move(rep));
}

Dyadic Dyadic::normalize(const mpz_class& m, std::uint64_t e) {
  if (m < 0) throw std::domain_error("dyadic numerator must be non-negative");
  if (bit_length(m) > e + 1) {
    throw std::domain_error("dyadic value exceeds 1");
  }
  if (bit_length(m) == e + 1) {
    // Only m = 2^e is in range.
    if (mpz_scan1(m.get_mpz_t(), 0) != e) {
      throw std::domain_error("dyadic value exceeds 1");
    }
    return one();
  }
  if (m == 0) return Dyadic();
  const std::uint64_t tz = mpz_scan1(m.get_mpz_t(), 0);
  const std::uint64_t shift = std::min<std::uint64_t>(tz, e);
  mpz_class reduced;
  mpz_tdiv_q_2exp(reduced.get_mpz_t(), m.get_mpz_t(), shift);
  return from_normalized(std::move(reduced), e - shift);
}

Dyadic Dyadic::normalize(std::uint64_t m, std::uint64_t e) {
  mpz_class big;
  mpz_import(big.get_mpz_t(), 1, 1, sizeof(m), 0, 0, &m);
  return normalize(big, e);
}

Dyadic Dyadic::one() { return from_normalized(mpz_class(1), 0); }

Dyadic Dyadic::inverse_pow2(std::uint64_t j) {
  return from_normalized(mpz_class(1), j);
}

std::string Dyadic::to_string() const {
  return numerator().get_str(10) + "/2^" + std::to_string(exponent());
}

Dyadic Dyadic::parse(std::string_view text) {
  if (text == "0") return Dyadic();
  if (text == "1") return one();
  const auto is_digits = [](std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(),
                                     [](char c) { return c >= '0' && c <= '9'; });
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos || !is_digits(text.substr(0, slash))) {
    throw std::invalid_argument("expected m/2^e, got: " + std::string(text));
  }
  const mpz_class m(std::string(text.substr(0, slash)), 10);
  const std::string_view den = text.substr(slash + 1);
  if (den.starts_with("2^")) return normalize(m, parse_u64(den.substr(2)));
  // Plain denominator, e.g. "3/8"; it must be a power of two.
  if (!is_digits(den)) {
    throw std::invalid_argument("bad denominator: " + std::string(text));
  }
  const mpz_class d(std::string(den), 10);
  if (d == 0 || mpz_popcount(d.get_mpz_t()) != 1) {
    throw std::invalid_argument("denominator is not a power of two: " + std::string(text));
  }
  return normalize(m, mpz_sizeinbase(d.get_mpz_t(), 2) - 1);
}

void Dyadic::append_binary(std::vector<std::uint8_t>& out) const {
  put_varint(out, exponent());
  const std::size_t nbytes = (bit_length(numerator()) + 7) / 8;
  put_varint(out, nbytes);
  const std::size_t start = out.size();
  out.resize(start + nbytes);
  if (nbytes > 0) {
    std::size_t written = 0;
    mpz_export(out.data() + start, &written, 1, 1, 1, 0,
               numerator().get_mpz_t());
  }
}

std::vector<std::uint8_t> Dyadic::to_binary() const {
  std::vector<std::uint8_t> out;
  append_binary(out);
  return out;
}

Dyadic Dyadic::read_binary(std::span<const std::uint8_t> in, std::size_t& pos) {
  const std::uint64_t e = get_varint(in, pos);
  const std::uint64_t nbytes = get_varint(in, pos);
  if (nbytes > in.size() - pos) {
    throw std::invalid_argument("truncated dyadic magnitude");
  }
  mpz_class m;
  if (nbytes > 0) {
    mpz_import(m.get_mpz_t(), nbytes, 1, 1, 1, 0, in.data() + pos);
  }
  pos += nbytes;
  Dyadic d = normalize(m, e);
  if (d.exponent() != e) {
    throw std::invalid_argument("binary dyadic is not normalized");
  }
  return d;
}

bool operator==(const Dyadic& a, const Dyadic& b) {
  if (a.rep_ == b.rep_) return true;
  return a.exponent() == b.exponent() && a.hash() == b.hash() &&
         a.numerator() == b.numerator();
}

Dyadic add(const Dyadic& a, const Dyadic& b) {
  auto [ma, mb] = aligned(a, b);
  ma += mb;
  return Dyadic::normalize(ma, std::max(a.exponent(), b.exponent()));
}

Dyadic sub(const Dyadic& a, const Dyadic& b) {
  auto [ma, mb] = aligned(a, b);
  if (ma < mb) throw std::domain_error("dyadic subtraction below zero");
  ma -= mb;
  return Dyadic::normalize(ma, std::max(a.exponent(), b.exponent()));
}

Dyadic abs_diff(const Dyadic& a, const Dyadic& b) {
  auto [ma, mb] = aligned(a, b);
  ma -= mb;
  mpz_abs(ma.get_mpz_t(), ma.get_mpz_t());
  return Dyadic::normalize(ma, std::max(a.exponent(), b.exponent()));
}

Dyadic shift_right(const Dyadic& a, std::uint64_t j) {
  if (a.is_zero() || j == 0) return a;
  return Dyadic::normalize(a.numerator(), a.exponent() + j);
}

std::optional<std::strong_ordering> compare_filter(const Dyadic& a,
                                                   const Dyadic& b) {
  const ApproxFloat fa = a.approx();
  const ApproxFloat fb = b.approx();
  if (fa.error_bound == 0.0 && fb.error_bound == 0.0) {
    // Both approximations are exact.
    if (fa.value < fb.value) return std::strong_ordering::less;
    if (fa.value > fb.value) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  const double diff = fb.value - fa.value;
  const double rounding =
      4.0 * DBL_EPSILON * std::max(std::fabs(fa.value), std::fabs(fb.value));
  const double margin = 2.0 * (fa.error_bound + fb.error_bound) + rounding;
  if (diff > margin) return std::strong_ordering::less;
  if (-diff > margin) return std::strong_ordering::greater;
  return std::nullopt;
}

std::strong_ordering compare_exact(const Dyadic& a, const Dyadic& b) {
  if (a.exponent() == b.exponent()) return cmp_mpz(a.numerator(), b.numerator());
  if (a.is_zero() || b.is_zero()) {
    return cmp_mpz(a.numerator(), b.numerator());
  }
  // Leading-bit position decides whenever it differs.
  const std::int64_t lead_a = static_cast<std::int64_t>(bit_length(a.numerator())) -
                              static_cast<std::int64_t>(a.exponent());
  const std::int64_t lead_b = static_cast<std::int64_t>(bit_length(b.numerator())) -
                              static_cast<std::int64_t>(b.exponent());
  if (lead_a != lead_b) {
    return lead_a < lead_b ? std::strong_ordering::less
                           : std::strong_ordering::greater;
  }
  const auto [ma, mb] = aligned(a, b);
  return cmp_mpz(ma, mb);
}

std::strong_ordering compare(const Dyadic& a, const Dyadic& b) {
  if (auto quick = compare_filter(a, b)) return *quick;
  return compare_exact(a, b);
}

std::uint64_t order_of(const Dyadic& a) {
  if (a.is_zero() || a.is_one()) {
    throw std::domain_error("0 and 1 are not dyadics of any order");
  }
  return a.exponent();
}

Dyadic nth_closest_dyadic(const Dyadic& d, std::uint64_t p, std::uint64_t i) {
  if (p == 0 || d.is_zero() || d.is_one() || d.exponent() != p) {
    throw std::domain_error("nth_closest_dyadic: d is not a dyadic of order p");
  }
  if (i == 0) throw std::domain_error("nth_closest_dyadic: i must be >= 1");
  // |D_p| = 2^(p-1).
  if (p - 1 < 64 && i > (std::uint64_t{1} << (p - 1))) {
    throw std::domain_error("nth_closest_dyadic: i exceeds |D_p|");
  }
  const mpz_class& m0 = d.numerator();
  mpz_class full;
  mpz_ui_pow_ui(full.get_mpz_t(), 2, p);
  // Odd numerators strictly below / above m0.
  const mpz_class below = (m0 - 1) / 2;
  const mpz_class above = (full - 1 - m0) / 2;
  const mpz_class balanced = below < above ? below : above;

  mpz_class j;
  mpz_import(j.get_mpz_t(), 1, 1, sizeof(i), 0, 0, &i);
  j -= 1;
  mpz_class m;
  if (j == 0) {
    m = m0;
  } else if (j <= 2 * balanced) {
    const mpz_class r = (j + 1) / 2;
    // Odd steps go left: the tie at equal distance resolves to the smaller value.
    m = (j % 2 == 1) ? mpz_class(m0 - 2 * r) : mpz_class(m0 + 2 * r);
  } else {
    const mpz_class steps = j - balanced;
    m = below > above ? mpz_class(m0 - 2 * steps) : mpz_class(m0 + 2 * steps);
  }
  return Dyadic::normalize(m, p);
}

}  // namespace capnn
