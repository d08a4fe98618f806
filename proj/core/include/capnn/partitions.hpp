#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "capnn/dyadic.hpp"
#include "capnn/processes.hpp"

namespace capnn {

enum class CellKind { center, left, right, grid, point, product };

// Discrete cell identifier; equal ids denote the same cell.
struct CellId {
  CellKind kind = CellKind::center;
  // left/right ring k, or grid index.
  mpz_class index;
  // The point itself for distinct_points.
  Dyadic point;
  // Factor ids for product partitions.
  std::vector<CellId> parts;

  friend bool operator==(const CellId& a, const CellId& b);
  std::string to_string() const;
};

struct CellIdHash {
  std::size_t operator()(const CellId& id) const noexcept;
};

// Countable partition of [0, 1] given by a total cell-id function.
//
//   centered(s): {s}, left rings [s(1 - 1/k), s(1 - 1/(k+1))) and right rings
//                (s + (1-s)/(k+1), s + (1-s)/k], k >= 1.
//   grid(eta):   [j eta, (j+1) eta), the last cell closed at 1.
//   distinct_points: every point is its own cell.
//   product:     tuple of factor ids.
class PartitionSpec {
 public:
  enum class Kind { centered, grid, distinct_points, product };

  static PartitionSpec centered(Dyadic s);
  // Requires 0 < eta <= 1.
  static PartitionSpec grid(Dyadic eta);
  static PartitionSpec distinct_points();
  static PartitionSpec product(std::vector<PartitionSpec> factors);

  Kind kind() const { return kind_; }
  const Dyadic& parameter() const { return param_; }
  const std::vector<PartitionSpec>& factors() const { return factors_; }

  // Number of cells when finite.
  std::optional<mpz_class> cell_count() const;

  // "centered:<s>", "grid:<eta>", "points", factors joined by '*'.
  std::string to_string() const;
  static PartitionSpec parse(std::string_view text);

  friend bool operator==(const PartitionSpec& a, const PartitionSpec& b);

 private:
  Kind kind_ = Kind::distinct_points;
  Dyadic param_;
  std::vector<PartitionSpec> factors_;
};

CellId cell_id(const PartitionSpec& p, const Dyadic& x);

// Membership test written from the interval inequalities (independent of the
// floor-division route in cell_id).
bool cell_contains(const PartitionSpec& p, const CellId& id, const Dyadic& x);

struct VisitPoint {
  std::uint64_t T = 0;
  std::uint64_t count = 0;
};

// Distinct cells among the first T samples, per checkpoint (sorted, <= horizon).
std::vector<VisitPoint> cells_visited_curve(const Trajectory& traj,
                                            const PartitionSpec& p,
                                            const std::vector<std::uint64_t>& checkpoints);

enum class SmvVerdict { shrinking, flat, linear };
std::string_view to_string(SmvVerdict v);

struct SmvRow {
  std::uint64_t T = 0;
  std::uint64_t count = 0;
  double ratio = 0.0;
};

struct SmvReport {
  std::vector<SmvRow> rows;
  SmvVerdict verdict = SmvVerdict::flat;
};

// "linear" if the last ratio exceeds 0.5; "shrinking" if it is below both
// half the first ratio and 0.1; "flat" otherwise.
SmvReport smv_ratio_report(const std::vector<VisitPoint>& curve);

}  // namespace capnn
