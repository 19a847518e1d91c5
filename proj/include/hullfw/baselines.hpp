#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "hullfw/instance.hpp"
#include "hullfw/tree.hpp"

namespace hullfw {

/// Linear underestimator f(x) >= <a, x> + offset.
struct OaCut
{
  Vector a;
  double offset = 0.0;

  double at(std::span<const double> x) const { return dot(a, x) + offset; }
};

/// Gradient cut of a convex f at x.
OaCut gradient_cut(const ObjectiveOracle& f, std::span<const double> x);

struct OaState
{
  /// index of t in the epigraph MILP (the original variables come first)
  std::size_t epigraph_var = 0;
  std::vector<OaCut> cuts;
  std::optional<Vector> incumbent;
};

struct BaselineLimits
{
  double time_limit = std::numeric_limits<double>::infinity();
  std::size_t node_limit = std::numeric_limits<std::size_t>::max();
};

/// Outer approximation: min t over the region with t >= every gradient cut,
/// cut at each MILP solution and at the continuous completion of its integer
/// part. nodes_processed counts rounds, total_lmo_calls counts MILP solves.
/// Stops with GapLimit after max_rounds.
SolveOutcome solve_oa(const ProblemInstance& instance, double tolerance, std::size_t max_rounds,
                      const BaselineLimits& limits = {}, OaState* state = nullptr);

/// Classic branch-and-bound over the continuous relaxation, each node solved
/// by conditional gradients with the relaxed oracle. total_lmo_calls counts
/// relaxed oracle calls.
SolveOutcome solve_nlp_bnb(const ProblemInstance& instance, double tolerance, const BaselineLimits& limits = {});

}  // namespace hullfw
