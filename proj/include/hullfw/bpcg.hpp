#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "hullfw/blmo.hpp"
#include "hullfw/objective.hpp"

namespace hullfw {

inline constexpr double kWeightFloor = 1e-12;

struct ActiveSet
{
  std::vector<Vector> vertices;
  std::vector<double> weights;

  bool empty() const { return vertices.empty(); }
  std::size_t size() const { return vertices.size(); }
  Vector iterate() const;
  void add(Vector v, double weight);
  /// Index of an identical vertex or size() when absent.
  std::size_t find(std::span<const double> v) const;
  static ActiveSet single(Vector v);
};

struct ShadowSet
{
  std::vector<Vector> vertices;

  bool empty() const { return vertices.empty(); }
  std::size_t size() const { return vertices.size(); }
  std::size_t find(std::span<const double> v) const;
  /// Inserts unless already present.
  void add(Vector v);
};

enum class Termination { GapTolerance, Cutoff, TreeState, IterationLimit, TimeLimit, Infeasible };

enum class StepType { Pairwise, Drop, ShadowPromote, FrankWolfe, Halve };

struct IterationTrace
{
  std::size_t iteration;
  double f;
  double phi;
  StepType step;
  std::size_t lmo_calls;
};

struct Incumbent
{
  Vector point;
  double value;
};

struct NodeSolveResult
{
  Vector iterate;
  double f_value = 0.0;
  Vector gradient;
  /// Exact FW gap at `iterate` when `gap_certified`, otherwise an estimate.
  double certified_gap = std::numeric_limits<double>::infinity();
  bool gap_certified = false;
  ActiveSet active;
  ShadowSet shadow;
  /// Feasible points discovered in this solve with their objective values.
  std::vector<Incumbent> incumbents;
  /// Every vertex returned by a global oracle call, in call order.
  std::vector<Vector> lmo_vertices;
  std::size_t lmo_calls = 0;
  std::size_t iterations = 0;
  Termination termination = Termination::GapTolerance;
  std::vector<IterationTrace> trace;
  /// f along the iterations, first entry at the warm start
  std::vector<double> f_history;

  double dual_bound() const { return f_value - certified_gap; }
};

struct BpcgOptions
{
  double eps_tol = 1e-6;
  double primal_cutoff = std::numeric_limits<double>::infinity();
  double laziness = 2.0;
  bool use_shadow = true;
  /// Certify the final gap with an exact oracle call when it is not known.
  bool certify = true;
  std::size_t max_iterations = 10000;
  /// Optimize over the continuous relaxation instead of the integer hull.
  bool relaxed = false;
  /// Receives the current dual estimate; returning true stops the solve.
  std::function<bool(double)> tree_state_probe;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  bool record_trace = false;
};

/// Lazy blended pairwise conditional gradient with shadow set and primal
/// cutoff over conv(X within bounds). `warm_active` must be nonempty with
/// vertices inside the bounds; when it is empty the solve starts from the
/// oracle answer for the zero direction.
NodeSolveResult solve_node(const ObjectiveOracle& f, Blmo& blmo, const BoundState& bounds,
                           ActiveSet warm_active, ShadowSet warm_shadow, const BpcgOptions& options);

struct StepResult
{
  double gamma;
  double lipschitz;
};

/// Step x - gamma d with the smallest L in {L_est 2^k, k >= -1} passing the
/// sufficient-decrease test, gamma = min(<grad, d> / (L |d|^2), gamma_max).
StepResult adaptive_step(const ObjectiveOracle& f, std::span<const double> x, std::span<const double> d,
                         double gamma_max, double lipschitz_estimate);

/// max over v of <grad f(x), x - v>, by one oracle call.
double frank_wolfe_gap(const ObjectiveOracle& f, Blmo& blmo, const BoundState& bounds, std::span<const double> x);

const char* to_string(Termination t);

}  // namespace hullfw
