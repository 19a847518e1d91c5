#include "hullfw/tightening.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hullfw {

namespace {

constexpr double kAtBoundTol = 1e-6;
constexpr double kMaxScan = 1e6;

double margin(double ub) { return 1e-9 * (1.0 + std::abs(ub)); }

/// Smallest M in [first, range] with slope M + (mu/2) M^2 > rhs, or 0.
double smallest_violation(double slope, double mu, double rhs, double first, double range)
{
  for (double m = first; m <= range; m += 1.0) {
    if (slope * m + 0.5 * mu * m * m > rhs) { return m; }
  }
  return 0.0;
}

double fractional_distance(double v)
{
  const double f = v - std::floor(v);
  return std::min(f, 1.0 - f);
}

}  // namespace

double partial_gap(Blmo& blmo, const BoundState& bounds, std::span<const double> gradient,
                   std::span<const double> x_hat, std::size_t j)
{
  Vector d(gradient.begin(), gradient.end());
  d[j] = 0.0;
  const auto v = blmo.lmo(bounds, d);
  if (!v) { return std::numeric_limits<double>::infinity(); }
  const double best = dot(d, *v);
  const double slack = blmo.region().kind == RegionKind::IntegerBox ? 0.0 : milp::cutoff_slack(best);
  return std::max(0.0, dot(d, x_hat) - best) + slack;
}

BoundState tighten_bounds(const TighteningContext& ctx, std::span<const double> x_hat, const BoundState& bounds,
                          const std::vector<std::size_t>& integer_indices, const PartialGap& partial,
                          std::vector<TighteningEvent>* events)
{
  BoundState out = bounds;
  if (!std::isfinite(ctx.upper_bound)) { return out; }
  const double mu = ctx.mu.value_or(0.0);
  const double rhs = ctx.upper_bound - ctx.f_hat + ctx.gap;
  for (std::size_t j : integer_indices) {
    const double range = bounds.upper[j] - bounds.lower[j];
    if (range < 1.0 || range > kMaxScan) { continue; }
    const double gj = ctx.gradient[j];
    const bool at_lower = std::abs(x_hat[j] - bounds.lower[j]) <= kAtBoundTol && gj >= 0.0;
    const bool at_upper = !at_lower && std::abs(x_hat[j] - bounds.upper[j]) <= kAtBoundTol && gj <= 0.0;
    if (!at_lower && !at_upper) { continue; }
    const double slope = std::abs(gj);
    const double screen = smallest_violation(slope, mu, rhs, 1.0, range);
    if (screen == 0.0) { continue; }
    double rhs_exact = rhs;
    if (partial) { rhs_exact = ctx.upper_bound - ctx.f_hat + partial(j); }
    rhs_exact += margin(ctx.upper_bound);
    const double m = smallest_violation(slope, mu, rhs_exact, screen, range);
    if (m == 0.0) { continue; }
    const bool strong = mu > 0.0 && !(slope * m > rhs_exact);
    if (at_lower) {
      const double nb = bounds.lower[j] + m - 1.0;
      if (nb < out.upper[j]) {
        if (events) { events->push_back({j, true, out.upper[j], nb, strong}); }
        out.upper[j] = nb;
      }
    } else {
      const double nb = bounds.upper[j] - m + 1.0;
      if (nb > out.lower[j]) {
        if (events) { events->push_back({j, false, out.lower[j], nb, strong}); }
        out.lower[j] = nb;
      }
    }
  }
  return out;
}

double child_rounding_distance_sq(std::span<const double> x_hat, std::size_t branch_j, BranchDirection direction,
                                  const std::vector<std::size_t>& integer_indices)
{
  const double xj = x_hat[branch_j];
  const double dist = direction == BranchDirection::Down ? xj - std::floor(xj) : std::ceil(xj) - xj;
  double total = dist * dist;
  for (std::size_t k : integer_indices) {
    if (k == branch_j) { continue; }
    const double fk = fractional_distance(x_hat[k]);
    if (fk > milp::kIntegralityTol) { total += fk * fk; }
  }
  return total;
}

double strong_convexity_node_bound(const TighteningContext& ctx, std::span<const double> x_hat,
                                   std::size_t branch_j, BranchDirection direction,
                                   const std::vector<std::size_t>& integer_indices)
{
  if (!ctx.mu) { throw UnsupportedOperation("strong_convexity_node_bound: objective has no strong convexity"); }
  const double d2 = child_rounding_distance_sq(x_hat, branch_j, direction, integer_indices);
  return ctx.f_hat + 0.5 * *ctx.mu * d2 - ctx.gap;
}

double sharpness_node_bound(const TighteningContext& ctx, std::span<const double>, double dist_lower)
{
  if (!ctx.sharpness) { throw UnsupportedOperation("sharpness_node_bound: objective has no sharpness constants"); }
  const double theta = ctx.sharpness->theta;
  const double m = ctx.sharpness->M;
  const double inner = std::max(0.0, dist_lower - m * std::pow(ctx.gap, theta));
  return std::pow(m, -1.0 / theta) * std::pow(inner, 1.0 / theta) + ctx.f_hat - ctx.gap;
}

BoundState global_tightening(const TighteningContext& root_ctx, std::span<const double> root_x,
                             double new_upper_bound, const BoundState& global_bounds,
                             const std::vector<std::size_t>& integer_indices, const PartialGap& partial,
                             std::vector<TighteningEvent>* events)
{
  TighteningContext ctx = root_ctx;
  ctx.upper_bound = new_upper_bound;
  return tighten_bounds(ctx, root_x, global_bounds, integer_indices, partial, events);
}

}  // namespace hullfw
