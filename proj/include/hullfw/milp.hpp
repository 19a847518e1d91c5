#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hullfw/lp.hpp"

namespace hullfw::milp {

inline constexpr double kIntegralityTol = 1e-6;
/// Nodes whose LP bound is within this relative distance of the cutoff or
/// incumbent are pruned.
inline constexpr double kPruneRel = 1e-10;

/// Largest amount by which a pruned node could still have beaten `threshold`.
inline double cutoff_slack(double threshold) { return kPruneRel * (1.0 + (threshold < 0 ? -threshold : threshold)); }

/// binary = 1 implies the row holds.
struct IndicatorRow
{
  std::size_t binary = 0;
  lp::Row row;

  bool operator==(const IndicatorRow&) const = default;
};

/// The base objective is ignored by the solver; every solve supplies its own
/// direction and bounds.
struct MilpModel
{
  lp::LinearProgram base;
  std::vector<std::size_t> integer_indices;
  std::vector<IndicatorRow> indicators;

  std::size_t dimension() const { return base.lower.size(); }
  void validate() const;
};

enum class MilpStatus { Optimal, Infeasible };

struct MilpSolution
{
  MilpStatus status = MilpStatus::Infeasible;
  Vector point;
  double value = 0.0;
};

/// Checks rows, bounds, integrality and the indicator implications of `x`
/// against `lower`/`upper` with absolute tolerance `tol`.
bool is_feasible(const MilpModel& model, std::span<const double> lower,
                 std::span<const double> upper, std::span<const double> x,
                 double tol = kIntegralityTol);

double row_violation(const lp::Row& row, std::span<const double> x);

/// LP-based branch-and-bound. Best-bound node selection (ties by creation
/// order), most-fractional branching (ties by lowest index), one rounding
/// probe per solved node. Indicator rows join a node's LP once the binary's
/// lower bound is 1; an integral LP point that still violates an indicator
/// whose binary is free branches on that binary.
///
/// With a cutoff the solver only looks for points whose value is below it
/// and reports Infeasible when none exists.
class MilpSolver
{
 public:
  explicit MilpSolver(MilpModel model);

  MilpSolution solve(std::span<const double> objective, std::span<const double> lower,
                     std::span<const double> upper, std::optional<double> cutoff = std::nullopt);

  /// LP relaxation over the given bounds with indicator rows whose binary is
  /// fixed to 1 included.
  lp::LpSolution solve_relaxation(std::span<const double> objective, std::span<const double> lower,
                                  std::span<const double> upper);

  std::size_t count_lp_solves() const { return lp_solves_; }
  void reset_count() { lp_solves_ = 0; }
  std::size_t last_node_count() const { return last_nodes_; }
  const MilpModel& model() const { return model_; }

 private:
  lp::LpSolution solve_node_lp(std::span<const double> objective, std::span<const double> lower,
                               std::span<const double> upper);

  MilpModel model_;
  std::map<std::vector<bool>, lp::SimplexSolver> engines_;
  std::size_t lp_solves_ = 0;
  std::size_t last_nodes_ = 0;
};

inline MilpSolution solve_milp(const MilpModel& model, std::span<const double> objective,
                               std::span<const double> lower, std::span<const double> upper,
                               std::optional<double> cutoff = std::nullopt)
{
  MilpSolver solver(model);
  return solver.solve(objective, lower, upper, cutoff);
}

}  // namespace hullfw::milp
