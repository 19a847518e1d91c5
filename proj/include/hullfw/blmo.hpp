#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hullfw/milp.hpp"

namespace hullfw {

enum class RegionKind { IntegerBox, Budget, GenericMilp };

struct BoundState
{
  Vector lower;
  Vector upper;

  bool operator==(const BoundState&) const = default;
};

/// Compact mixed-integer region. Every kind keeps an equivalent MILP model
/// (rows, indicator rows, global bounds, integer indices); the box and budget
/// kinds additionally keep their data for the closed-form paths and I/O.
struct FeasibleRegion
{
  RegionKind kind = RegionKind::GenericMilp;
  milp::MilpModel model;
  Vector costs;
  double budget = 0.0;

  std::size_t dimension() const { return model.dimension(); }
  const std::vector<std::size_t>& integer_indices() const { return model.integer_indices; }
  BoundState global_bounds() const { return {model.base.lower, model.base.upper}; }
};

FeasibleRegion make_integer_box(Vector lower, Vector upper, std::vector<std::size_t> integer_indices);
FeasibleRegion make_budget(Vector costs, double budget, Vector lower, Vector upper,
                           std::vector<std::size_t> integer_indices);
FeasibleRegion make_generic(milp::MilpModel model);

/// Throws std::invalid_argument unless lower <= upper, both have the region's
/// dimension, and integer coordinates are integral.
void validate_bounds(const FeasibleRegion& region, const BoundState& bounds);

/// Boundable linear minimization oracle over a region.
class Blmo
{
 public:
  explicit Blmo(const FeasibleRegion& region);

  /// argmin <d, v> over X within bounds, or nothing when that set is empty.
  /// With a cutoff only points with <d, v> < cutoff are returned.
  std::optional<Vector> lmo(const BoundState& bounds, std::span<const double> d,
                            std::optional<double> cutoff = std::nullopt);

  /// Same over the continuous relaxation; the result need not be integral.
  std::optional<Vector> relaxed_lmo(const BoundState& bounds, std::span<const double> d);

  bool is_integer_feasible(const BoundState& bounds, std::span<const double> x) const;

  std::size_t calls() const { return calls_; }
  std::size_t relaxed_calls() const { return relaxed_calls_; }
  std::size_t lp_solves() const { return milp_.count_lp_solves(); }
  const FeasibleRegion& region() const { return region_; }

 private:
  FeasibleRegion region_;
  milp::MilpSolver milp_;
  std::size_t calls_ = 0;
  std::size_t relaxed_calls_ = 0;
};

}  // namespace hullfw
