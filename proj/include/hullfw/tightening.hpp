#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hullfw/blmo.hpp"
#include "hullfw/objective.hpp"

namespace hullfw {

struct TighteningContext
{
  Vector gradient;
  double f_hat = 0.0;
  double gap = 0.0;
  double upper_bound = 0.0;
  std::optional<double> mu;
  std::optional<Sharpness> sharpness;
};

struct TighteningEvent
{
  std::size_t variable;
  /// true when the upper bound moved
  bool upper;
  double old_bound;
  double new_bound;
  /// whether the strong-convexity term was needed to fire
  bool strong;
};

class UnsupportedOperation : public std::logic_error
{
 public:
  using std::logic_error::logic_error;
};

/// g_{-j} = max_v sum_{k != j} grad_k (x_hat - v)_k over the node's region,
/// the gap with coordinate j left out. Used to confirm a firing of the gap
/// screen; an empty function means the plain gap is used (exact on boxes).
using PartialGap = std::function<double(std::size_t j)>;

/// Computes g_{-j} with one oracle call on `bounds`.
double partial_gap(Blmo& blmo, const BoundState& bounds, std::span<const double> gradient,
                   std::span<const double> x_hat, std::size_t j);

/// Dual tightening at bounds active in x_hat. Variable j at its lower bound
/// with grad_j >= 0 gets u_j = l_j + M - 1 for the smallest M in 1..u_j - l_j
/// with M grad_j + (mu/2) M^2 > UB - f + g; symmetric at the upper bound.
/// A firing is applied only if it also holds with g replaced by g_{-j}.
BoundState tighten_bounds(const TighteningContext& ctx, std::span<const double> x_hat, const BoundState& bounds,
                          const std::vector<std::size_t>& integer_indices, const PartialGap& partial = {},
                          std::vector<TighteningEvent>* events = nullptr);

enum class BranchDirection { Down, Up };

/// f + (mu/2) dist_j^2 + (mu/2) sum_{k fractional, k != j} min(frac_k, 1 - frac_k)^2 - g.
double strong_convexity_node_bound(const TighteningContext& ctx, std::span<const double> x_hat,
                                   std::size_t branch_j, BranchDirection direction,
                                   const std::vector<std::size_t>& integer_indices);

/// Squared distance from x_hat to the nearest point integral on J in the
/// given child, as used by the strong-convexity bound.
double child_rounding_distance_sq(std::span<const double> x_hat, std::size_t branch_j, BranchDirection direction,
                                  const std::vector<std::size_t>& integer_indices);

/// M^{-1/theta} max(0, dist_lower - M g^theta)^{1/theta} + f - g.
double sharpness_node_bound(const TighteningContext& ctx, std::span<const double> x_hat, double dist_lower);

/// tighten_bounds with the root context and a new incumbent value.
BoundState global_tightening(const TighteningContext& root_ctx, std::span<const double> root_x,
                             double new_upper_bound, const BoundState& global_bounds,
                             const std::vector<std::size_t>& integer_indices, const PartialGap& partial = {},
                             std::vector<TighteningEvent>* events = nullptr);

}  // namespace hullfw
