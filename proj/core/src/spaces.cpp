#include "capnn/spaces.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <vector>

namespace capnn {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Label parse_label(std::string_view s) {
  std::uint32_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("bad label: " + std::string(s));
  }
  return Label(v);
}

}  // namespace

bool LabelSpace::contains(Label y) const {
  switch (kind) {
    case LabelSpaceKind::binary:
      return y.tag <= 1;
    case LabelSpaceKind::finite:
      return y.tag < cardinality;
    case LabelSpaceKind::countable:
      return true;
  }
  return false;
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::anchor_dyadic:
      return "anchor";
    case Provenance::planted_neighbor:
      return "planted";
    case Provenance::perturbed:
      return "perturbed";
    case Provenance::iid:
      return "iid";
    case Provenance::enumerated:
      return "enumerated";
  }
  return "?";
}

Provenance parse_provenance(std::string_view text) {
  for (auto p : {Provenance::anchor_dyadic, Provenance::planted_neighbor,
                 Provenance::perturbed, Provenance::iid, Provenance::enumerated}) {
    if (to_string(p) == text) return p;
  }
  throw std::invalid_argument("unknown provenance: " + std::string(text));
}

std::string TargetFunction::to_string() const {
  return std::visit(
      overloaded{
          [](const IndicatorDyadics&) { return std::string("dyadics"); },
          [](const IndicatorIntervalBelow& f) {
            return std::string(f.closed ? "below_closed:" : "below:") +
                   f.s.to_string();
          },
          [](const IndicatorBall& f) {
            return "ball:" + f.center.to_string() + ":" + f.radius.to_string();
          },
          [](const ConstantTarget& f) {
            return "const:" + std::to_string(f.label.tag);
          },
          [](const CustomTable& f) {
            std::vector<std::pair<Dyadic, Label>> rows(f.table.begin(),
                                                       f.table.end());
            std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
              return compare(a.first, b.first) < 0;
            });
            std::string out = "table:";
            for (std::size_t i = 0; i < rows.size(); ++i) {
              if (i > 0) out += ';';
              out += rows[i].first.to_string() + "=" +
                     std::to_string(rows[i].second.tag);
            }
            return out;
          },
      },
      v_);
}

TargetFunction TargetFunction::parse(std::string_view text) {
  if (text == "dyadics") return dyadics();
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("unknown target: " + std::string(text));
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view rest = text.substr(colon + 1);
  if (kind == "below") return below(Dyadic::parse(rest), false);
  if (kind == "below_closed") return below(Dyadic::parse(rest), true);
  if (kind == "const") return constant(parse_label(rest));
  if (kind == "ball") {
    const auto sep = rest.find(':');
    if (sep == std::string_view::npos) {
      throw std::invalid_argument("ball target needs center:radius");
    }
    return ball(Dyadic::parse(rest.substr(0, sep)),
                Dyadic::parse(rest.substr(sep + 1)));
  }
  if (kind == "table") {
    CustomTable t;
    std::string_view body = rest;
    while (!body.empty()) {
      const auto semi = body.find(';');
      const std::string_view row = body.substr(0, semi);
      const auto eq = row.find('=');
      if (eq == std::string_view::npos) {
        throw std::invalid_argument("table row needs x=y");
      }
      t.table.insert_or_assign(Dyadic::parse(row.substr(0, eq)),
                               parse_label(row.substr(eq + 1)));
      if (semi == std::string_view::npos) break;
      body = body.substr(semi + 1);
    }
    return TargetFunction(std::move(t));
  }
  throw std::invalid_argument("unknown target: " + std::string(text));
}

Label eval_target(const TargetFunction& f, const Dyadic& x, Provenance provenance) {
  return std::visit(
      overloaded{
          [&](const IndicatorDyadics&) {
            // Generated points are all finite-precision dyadics; the label
            // follows the idealized point the generator stands for.
            switch (provenance) {
              case Provenance::anchor_dyadic:
              case Provenance::planted_neighbor:
              case Provenance::enumerated:
                return Label(1);
              case Provenance::perturbed:
              case Provenance::iid:
                return Label(0);
            }
            return Label(0);
          },
          [&](const IndicatorIntervalBelow& f) {
            const auto c = compare(x, f.s);
            return Label((c < 0 || (f.closed && c == 0)) ? 1 : 0);
          },
          [&](const IndicatorBall& f) {
            return Label(compare(abs_diff(x, f.center), f.radius) < 0 ? 1 : 0);
          },
          [](const ConstantTarget& f) { return f.label; },
          [&](const CustomTable& f) {
            const auto it = f.table.find(x);
            if (it == f.table.end()) {
              throw std::out_of_range("custom target has no entry for " +
                                      x.to_string());
            }
            return it->second;
          },
      },
      f.variant());
}

}  // namespace capnn
