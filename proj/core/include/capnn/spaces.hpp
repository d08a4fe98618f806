#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>

#include "capnn/dyadic.hpp"

namespace capnn {

// Class id; binary classification uses {0, 1}.
struct Label {
  std::uint32_t tag = 0;

  constexpr Label() = default;
  constexpr explicit Label(std::uint32_t t) : tag(t) {}
  friend constexpr auto operator<=>(Label, Label) = default;
};

enum class LabelSpaceKind { binary, finite, countable };

struct LabelSpace {
  LabelSpaceKind kind = LabelSpaceKind::binary;
  // Number of classes for `finite`; ignored otherwise.
  std::uint32_t cardinality = 2;

  bool contains(Label y) const;
};

// 0-1 loss: symmetric, discernible, bounded by 1, relaxed-triangle constant 1.
struct LossSpec {
  double c_ell = 1.0;
  double sup_loss = 1.0;
};

inline double loss(Label predicted, Label truth) {
  return predicted == truth ? 0.0 : 1.0;
}

// Where a process point came from; drives the exact evaluation of 1_D.
enum class Provenance : std::uint8_t {
  anchor_dyadic = 0,
  planted_neighbor = 1,
  perturbed = 2,
  iid = 3,
  enumerated = 4,
};

std::string_view to_string(Provenance p);
Provenance parse_provenance(std::string_view text);

struct IndicatorDyadics {};
// 1 on [0, s) (or [0, s] when closed).
struct IndicatorIntervalBelow {
  Dyadic s;
  bool closed = false;
};
// 1 on the open ball {x : |x - center| < radius}.
struct IndicatorBall {
  Dyadic center;
  Dyadic radius;
};
struct ConstantTarget {
  Label label;
};
struct CustomTable {
  std::unordered_map<Dyadic, Label, DyadicHash> table;
};

class TargetFunction {
 public:
  using Variant = std::variant<IndicatorDyadics, IndicatorIntervalBelow,
                               IndicatorBall, ConstantTarget, CustomTable>;

  TargetFunction() = default;
  TargetFunction(Variant v) : v_(std::move(v)) {}

  static TargetFunction dyadics() { return {IndicatorDyadics{}}; }
  static TargetFunction below(Dyadic s, bool closed = false) {
    return {IndicatorIntervalBelow{std::move(s), closed}};
  }
  static TargetFunction ball(Dyadic center, Dyadic radius) {
    return {IndicatorBall{std::move(center), std::move(radius)}};
  }
  static TargetFunction constant(Label y) { return {ConstantTarget{y}}; }

  const Variant& variant() const { return v_; }

  // Canonical text: "dyadics", "below:<s>", "below_closed:<s>",
  // "ball:<center>:<radius>", "const:<label>", "table:<x>=<y>;...".
  std::string to_string() const;
  static TargetFunction parse(std::string_view text);

 private:
  Variant v_ = IndicatorDyadics{};
};

// Throws std::out_of_range when a custom table has no entry for x.
Label eval_target(const TargetFunction& f, const Dyadic& x, Provenance provenance);

}  // namespace capnn
