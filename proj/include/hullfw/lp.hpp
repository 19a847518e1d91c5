#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "hullfw/linalg.hpp"

namespace hullfw::lp {

inline constexpr double kFeasibilityTol = 1e-7;
inline constexpr double kOptimalityTol = 1e-9;

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Row
{
  Vector coeffs;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;

  bool operator==(const Row&) const = default;
};

/// min <objective, x> subject to rows and lower <= x <= upper.
/// Infinite bounds are allowed as long as the feasible set stays bounded in
/// the objective direction; unbounded programs are reported, not thrown.
struct LinearProgram
{
  Vector objective;
  std::vector<Row> rows;
  Vector lower;
  Vector upper;

  std::size_t dimension() const { return objective.size(); }
  bool operator==(const LinearProgram&) const = default;

  /// Throws std::invalid_argument when vectors disagree on the dimension.
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution
{
  LpStatus status = LpStatus::Infeasible;
  Vector point;
  double value = 0.0;
  bool is_vertex = false;
};

/// Largest row or bound violation of x; used by tests and the MILP layer.
double max_violation(const LinearProgram& lp, std::span<const double> x);

/// Dense tableau simplex with bounded variables.
///
/// `solve` runs a two-phase primal simplex from the slack basis. The basis of
/// the last solve is retained; `resolve_with_bounds` on the same rows
/// restarts from it with the dual simplex (the old basis stays dual feasible
/// when only bounds move), or the primal simplex when only the objective
/// moved, and falls back to a cold solve otherwise. Pricing is Dantzig until 5 * (rows + vars) degenerate pivots
/// have been seen, then Bland's rule for the rest of the solve.
class SimplexSolver
{
 public:
  SimplexSolver();
  ~SimplexSolver();
  SimplexSolver(SimplexSolver&&) noexcept;
  SimplexSolver& operator=(SimplexSolver&&) noexcept;

  LpSolution solve(const LinearProgram& lp);
  LpSolution resolve_with_bounds(const LinearProgram& lp,
                                 std::span<const double> lower,
                                 std::span<const double> upper);
  /// Same as `solve`, restarting from the previous basis whenever the rows
  /// are unchanged (objective and bounds may differ).
  LpSolution resolve(const LinearProgram& lp);

  /// Whether the last call reused the previous basis.
  bool last_was_warm() const { return last_warm_; }
  std::size_t total_pivots() const { return total_pivots_; }

  /// Basic column indices after the last solve (structural columns first,
  /// then one slack per row, then artificials).
  std::vector<std::size_t> basis() const;

 private:
  struct Tableau;
  LpStatus finish(Tableau& s);

  std::unique_ptr<Tableau> state_;
  bool last_warm_ = false;
  std::size_t total_pivots_ = 0;
};

inline LpSolution solve_lp(const LinearProgram& lp)
{
  SimplexSolver solver;
  return solver.solve(lp);
}

}  // namespace hullfw::lp
