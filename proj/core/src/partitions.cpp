#include "capnn/partitions.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace capnn {
namespace {

// Numerators of a and b at the common exponent, plus that exponent.
struct Aligned {
  mpz_class a;
  mpz_class b;
  std::uint64_t exponent;
};

Aligned align(const Dyadic& a, const Dyadic& b) {
  const std::uint64_t e = std::max(a.exponent(), b.exponent());
  Aligned out{a.numerator(), b.numerator(), e};
  mpz_mul_2exp(out.a.get_mpz_t(), out.a.get_mpz_t(), e - a.exponent());
  mpz_mul_2exp(out.b.get_mpz_t(), out.b.get_mpz_t(), e - b.exponent());
  return out;
}

mpz_class floor_ratio(const Dyadic& num, const Dyadic& den) {
  const Aligned al = align(num, den);
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), al.a.get_mpz_t(), al.b.get_mpz_t());
  return q;
}

mpz_class pow2(std::uint64_t e) {
  mpz_class v;
  mpz_ui_pow_ui(v.get_mpz_t(), 2, e);
  return v;
}

// Index of the last grid cell, ceil(1/eta) - 1.
mpz_class last_grid_index(const Dyadic& eta) {
  mpz_class q;
  const mpz_class full = pow2(eta.exponent());
  mpz_cdiv_q(q.get_mpz_t(), full.get_mpz_t(), eta.numerator().get_mpz_t());
  return q - 1;
}

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

bool operator==(const CellId& a, const CellId& b) {
  return a.kind == b.kind && a.index == b.index && a.point == b.point &&
         a.parts == b.parts;
}

std::string CellId::to_string() const {
  switch (kind) {
    case CellKind::center:
      return "C";
    case CellKind::left:
      return "L" + index.get_str();
    case CellKind::right:
      return "R" + index.get_str();
    case CellKind::grid:
      return "G" + index.get_str();
    case CellKind::point:
      return "P" + point.to_string();
    case CellKind::product: {
      std::string out = "(";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += ',';
        out += parts[i].to_string();
      }
      return out + ")";
    }
  }
  return "?";
}

std::size_t CellIdHash::operator()(const CellId& id) const noexcept {
  std::size_t h = static_cast<std::size_t>(id.kind);
  const std::size_t limbs = mpz_size(id.index.get_mpz_t());
  h = mix(h, limbs);
  if (limbs > 0) h = mix(h, mpz_getlimbn(id.index.get_mpz_t(), 0));
  h = mix(h, id.point.hash());
  for (const auto& p : id.parts) h = mix(h, (*this)(p));
  return h;
}

PartitionSpec PartitionSpec::centered(Dyadic s) {
  PartitionSpec p;
  p.kind_ = Kind::centered;
  p.param_ = std::move(s);
  return p;
}

PartitionSpec PartitionSpec::grid(Dyadic eta) {
  if (eta.is_zero()) throw std::invalid_argument("grid width must be > 0");
  PartitionSpec p;
  p.kind_ = Kind::grid;
  p.param_ = std::move(eta);
  return p;
}

PartitionSpec PartitionSpec::distinct_points() { return PartitionSpec(); }

PartitionSpec PartitionSpec::product(std::vector<PartitionSpec> factors) {
  if (factors.empty()) throw std::invalid_argument("empty product partition");
  PartitionSpec p;
  p.kind_ = Kind::product;
  p.factors_ = std::move(factors);
  return p;
}

std::optional<mpz_class> PartitionSpec::cell_count() const {
  switch (kind_) {
    case Kind::grid:
      return last_grid_index(param_) + 1;
    case Kind::product: {
      mpz_class total = 1;
      for (const auto& f : factors_) {
        auto c = f.cell_count();
        if (!c) return std::nullopt;
        total *= *c;
      }
      return total;
    }
    default:
      return std::nullopt;
  }
}

std::string PartitionSpec::to_string() const {
  switch (kind_) {
    case Kind::centered:
      return "centered:" + param_.to_string();
    case Kind::grid:
      return "grid:" + param_.to_string();
    case Kind::distinct_points:
      return "points";
    case Kind::product: {
      std::string out;
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i > 0) out += '*';
        out += factors_[i].to_string();
      }
      return out;
    }
  }
  return "?";
}

PartitionSpec PartitionSpec::parse(std::string_view text) {
  if (text.find('*') != std::string_view::npos) {
    std::vector<PartitionSpec> factors;
    while (true) {
      const auto star = text.find('*');
      factors.push_back(parse(text.substr(0, star)));
      if (star == std::string_view::npos) break;
      text = text.substr(star + 1);
    }
    return product(std::move(factors));
  }
  if (text == "points") return distinct_points();
  if (text.starts_with("centered:")) return centered(Dyadic::parse(text.substr(9)));
  if (text.starts_with("grid:")) return grid(Dyadic::parse(text.substr(5)));
  throw std::invalid_argument("unknown partition: " + std::string(text));
}

bool operator==(const PartitionSpec& a, const PartitionSpec& b) {
  return a.kind_ == b.kind_ && a.param_ == b.param_ && a.factors_ == b.factors_;
}

CellId cell_id(const PartitionSpec& p, const Dyadic& x) {
  CellId id;
  switch (p.kind()) {
    case PartitionSpec::Kind::centered: {
      const Dyadic& s = p.parameter();
      const auto c = compare(x, s);
      if (c == 0) {
        id.kind = CellKind::center;
      } else if (c < 0) {
        // k = floor(s / (s - x)).
        id.kind = CellKind::left;
        id.index = floor_ratio(s, sub(s, x));
      } else {
        // k = floor((1 - s) / (x - s)).
        id.kind = CellKind::right;
        id.index = floor_ratio(sub(Dyadic::one(), s), sub(x, s));
      }
      break;
    }
    case PartitionSpec::Kind::grid: {
      id.kind = CellKind::grid;
      const mpz_class j = floor_ratio(x, p.parameter());
      const mpz_class last = last_grid_index(p.parameter());
      id.index = j > last ? last : j;
      break;
    }
    case PartitionSpec::Kind::distinct_points:
      id.kind = CellKind::point;
      id.point = x;
      break;
    case PartitionSpec::Kind::product:
      id.kind = CellKind::product;
      for (const auto& f : p.factors()) id.parts.push_back(cell_id(f, x));
      break;
  }
  return id;
}

bool cell_contains(const PartitionSpec& p, const CellId& id, const Dyadic& x) {
  switch (p.kind()) {
    case PartitionSpec::Kind::centered: {
      const Aligned al = align(p.parameter(), x);
      const mpz_class& S = al.a;
      const mpz_class& X = al.b;
      const mpz_class one = pow2(al.exponent);
      const mpz_class& k = id.index;
      switch (id.kind) {
        case CellKind::center:
          return X == S;
        case CellKind::left:
          // s (1 - 1/k) <= x < s (1 - 1/(k+1)).
          return k >= 1 && (k - 1) * S <= k * X && (k + 1) * X < k * S;
        case CellKind::right:
          // s + (1-s)/(k+1) < x <= s + (1-s)/k.
          return k >= 1 && k * S + one < (k + 1) * X &&
                 k * X <= (k - 1) * S + one;
        default:
          return false;
      }
    }
    case PartitionSpec::Kind::grid: {
      if (id.kind != CellKind::grid || id.index < 0) return false;
      const Aligned al = align(p.parameter(), x);
      const mpz_class& eta = al.a;
      const mpz_class& X = al.b;
      const mpz_class& j = id.index;
      const mpz_class last = last_grid_index(p.parameter());
      if (j > last || j * eta > X) return false;
      return j == last ? X <= pow2(al.exponent) : X < (j + 1) * eta;
    }
    case PartitionSpec::Kind::distinct_points:
      return id.kind == CellKind::point && id.point == x;
    case PartitionSpec::Kind::product: {
      if (id.kind != CellKind::product || id.parts.size() != p.factors().size()) {
        return false;
      }
      for (std::size_t i = 0; i < id.parts.size(); ++i) {
        if (!cell_contains(p.factors()[i], id.parts[i], x)) return false;
      }
      return true;
    }
  }
  return false;
}

std::vector<VisitPoint> cells_visited_curve(
    const Trajectory& traj, const PartitionSpec& p,
    const std::vector<std::uint64_t>& checkpoints) {
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
    throw std::invalid_argument("checkpoints must be sorted");
  }
  if (!checkpoints.empty() && checkpoints.back() > traj.samples.size()) {
    throw std::invalid_argument("checkpoint beyond trajectory horizon");
  }
  std::unordered_set<CellId, CellIdHash> seen;
  std::vector<VisitPoint> out;
  std::size_t next = 0;
  for (const std::uint64_t T : checkpoints) {
    for (; next < T; ++next) seen.insert(cell_id(p, traj.samples[next].x));
    out.push_back({T, seen.size()});
  }
  return out;
}

std::string_view to_string(SmvVerdict v) {
  switch (v) {
    case SmvVerdict::shrinking:
      return "shrinking";
    case SmvVerdict::flat:
      return "flat";
    case SmvVerdict::linear:
      return "linear";
  }
  return "?";
}

SmvReport smv_ratio_report(const std::vector<VisitPoint>& curve) {
  if (curve.empty()) throw std::invalid_argument("empty visit curve");
  SmvReport report;
  for (const auto& pt : curve) {
    if (pt.T == 0) throw std::invalid_argument("checkpoint T must be >= 1");
    report.rows.push_back({pt.T, pt.count,
                           static_cast<double>(pt.count) / static_cast<double>(pt.T)});
  }
  const double first = report.rows.front().ratio;
  const double last = report.rows.back().ratio;
  if (last > 0.5) {
    report.verdict = SmvVerdict::linear;
  } else if (last < first / 2.0 && last < 0.1) {
    report.verdict = SmvVerdict::shrinking;
  } else {
    report.verdict = SmvVerdict::flat;
  }
  return report;
}

}  // namespace capnn
