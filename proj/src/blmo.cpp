#include "hullfw/blmo.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hullfw {

namespace {

milp::MilpModel box_model(Vector lower, Vector upper, std::vector<std::size_t> integer_indices)
{
  milp::MilpModel m;
  m.base.objective.assign(lower.size(), 0.0);
  m.base.lower = std::move(lower);
  m.base.upper = std::move(upper);
  m.integer_indices = std::move(integer_indices);
  return m;
}

}  // namespace

FeasibleRegion make_integer_box(Vector lower, Vector upper, std::vector<std::size_t> integer_indices)
{
  if (lower.size() != upper.size()) { throw std::invalid_argument("make_integer_box: bound lengths differ"); }
  for (std::size_t j = 0; j < lower.size(); ++j) {
    if (!std::isfinite(lower[j]) || !std::isfinite(upper[j])) {
      throw std::invalid_argument("make_integer_box: bounds must be finite");
    }
  }
  FeasibleRegion r;
  r.kind = RegionKind::IntegerBox;
  r.model = box_model(std::move(lower), std::move(upper), std::move(integer_indices));
  r.model.validate();
  validate_bounds(r, r.global_bounds());
  return r;
}

FeasibleRegion make_budget(Vector costs, double budget, Vector lower, Vector upper,
                           std::vector<std::size_t> integer_indices)
{
  if (costs.size() != lower.size()) { throw std::invalid_argument("make_budget: cost length differs"); }
  FeasibleRegion r = make_integer_box(std::move(lower), std::move(upper), std::move(integer_indices));
  r.kind = RegionKind::Budget;
  r.model.base.rows.push_back({costs, lp::Sense::LessEqual, budget});
  r.costs = std::move(costs);
  r.budget = budget;
  return r;
}

FeasibleRegion make_generic(milp::MilpModel model)
{
  FeasibleRegion r;
  r.kind = RegionKind::GenericMilp;
  model.validate();
  for (std::size_t j = 0; j < model.dimension(); ++j) {
    bool bounded = std::isfinite(model.base.lower[j]) && std::isfinite(model.base.upper[j]);
    if (!bounded) { throw std::invalid_argument("make_generic: variable " + std::to_string(j) + " is unbounded"); }
  }
  r.model = std::move(model);
  validate_bounds(r, r.global_bounds());
  return r;
}

void validate_bounds(const FeasibleRegion& region, const BoundState& bounds)
{
  const std::size_t n = region.dimension();
  if (bounds.lower.size() != n || bounds.upper.size() != n) {
    throw std::invalid_argument("bounds have length " + std::to_string(bounds.lower.size()) + ", expected " +
                                std::to_string(n));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (bounds.lower[j] > bounds.upper[j]) {
      throw std::invalid_argument("bounds: lower > upper at " + std::to_string(j));
    }
  }
  for (std::size_t j : region.integer_indices()) {
    if (bounds.lower[j] != std::round(bounds.lower[j]) || bounds.upper[j] != std::round(bounds.upper[j])) {
      throw std::invalid_argument("bounds: integer variable " + std::to_string(j) + " has fractional bounds");
    }
  }
}

Blmo::Blmo(const FeasibleRegion& region) : region_(region), milp_(region.model) {}

std::optional<Vector> Blmo::lmo(const BoundState& bounds, std::span<const double> d,
                                std::optional<double> cutoff)
{
  const std::size_t n = region_.dimension();
  if (d.size() != n) { throw std::invalid_argument("lmo: direction has the wrong dimension"); }
  ++calls_;
  if (region_.kind == RegionKind::IntegerBox) {
    Vector v(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (bounds.lower[j] > bounds.upper[j]) { return std::nullopt; }
      v[j] = d[j] < 0.0 ? bounds.upper[j] : bounds.lower[j];
    }
    if (cutoff && dot(d, v) >= *cutoff) { return std::nullopt; }
    return v;
  }
  auto sol = milp_.solve(d, bounds.lower, bounds.upper, cutoff);
  if (sol.status != milp::MilpStatus::Optimal) { return std::nullopt; }
  return std::move(sol.point);
}

std::optional<Vector> Blmo::relaxed_lmo(const BoundState& bounds, std::span<const double> d)
{
  const std::size_t n = region_.dimension();
  if (d.size() != n) { throw std::invalid_argument("relaxed_lmo: direction has the wrong dimension"); }
  ++relaxed_calls_;
  if (region_.kind == RegionKind::IntegerBox) {
    Vector v(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (bounds.lower[j] > bounds.upper[j]) { return std::nullopt; }
      v[j] = d[j] < 0.0 ? bounds.upper[j] : bounds.lower[j];
    }
    return v;
  }
  auto sol = milp_.solve_relaxation(d, bounds.lower, bounds.upper);
  if (sol.status != lp::LpStatus::Optimal) { return std::nullopt; }
  return std::move(sol.point);
}

bool Blmo::is_integer_feasible(const BoundState& bounds, std::span<const double> x) const
{
  return milp::is_feasible(region_.model, bounds.lower, bounds.upper, x, milp::kIntegralityTol);
}

}  // namespace hullfw
