#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hullfw/bpcg.hpp"
#include "hullfw/instance.hpp"
#include "hullfw/runlog.hpp"
#include "hullfw/tightening.hpp"

namespace hullfw {

enum class BranchingRule { MostFractional, PartialStrong, Hybrid };

struct BranchingConfig
{
  BranchingRule rule = BranchingRule::MostFractional;
  /// BPCG iteration budget per child in strong branching
  std::size_t strong_iterations = 10;
  double strong_eps = 1e-3;
  /// Hybrid uses strong branching while depth < |J| / hybrid_divisor
  double hybrid_divisor = 2.0;
};

struct SolverConfig
{
  double abs_gap = 1e-6;
  double rel_gap = 1e-4;
  double eps0 = 1e-2;
  double rho = 0.9;
  /// defaults to min(abs_gap / 2, eps0) when absent
  std::optional<double> eps_min;
  BranchingConfig branching;
  double laziness = 2.0;
  std::optional<std::size_t> tree_state_threshold;
  bool use_local_tightening = true;
  bool use_global_tightening = true;
  bool use_strong_convexity = true;
  /// node bound from the sharpness constants; assumes a unique relaxed optimum
  bool use_sharpness = false;
  bool use_shadow_set = true;
  bool use_warm_start = true;
  bool certify = true;
  std::size_t node_limit = std::numeric_limits<std::size_t>::max();
  double time_limit = std::numeric_limits<double>::infinity();
  std::size_t max_bpcg_iterations = 10000;
  bool record_trace = false;
  bool record_nodes = false;

  double effective_eps_min() const { return eps_min.value_or(std::min(abs_gap / 2.0, eps0)); }
  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

enum class SolveStatus { Optimal, GapLimit, NodeLimit, TimeLimit, Infeasible };

const char* to_string(SolveStatus s);
SolveStatus solve_status_from_string(const std::string& s);

struct NodeRecord
{
  std::size_t id;
  std::size_t depth;
  BoundState bounds;
  double f_value;
  double gap;
  /// whether f_value - gap is a proven bound for this node
  bool certified;
  double dual_bound;
};

struct SolveOutcome
{
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<Vector> incumbent;
  double primal = std::numeric_limits<double>::infinity();
  double dual = -std::numeric_limits<double>::infinity();
  std::size_t nodes_processed = 0;
  /// exact oracle (MILP) calls
  std::size_t total_lmo_calls = 0;
  std::size_t total_lp_solves = 0;
  /// (LB, UB) before each node is processed
  std::vector<std::pair<double, double>> bound_history;
  std::vector<NodeRecord> nodes;
  std::size_t tightenings = 0;
  RunLog log;
};

/// An iteration-capped node solve with nothing to branch on is resumed, warm,
/// while each attempt still lowers f beyond rounding. Resumes count as
/// processed nodes, so node and time limits bound them.
inline bool resume_progress(double f, double last_f)
{
  return f < last_f - 1e-12 * std::max(1.0, std::abs(f));
}

struct Node
{
  std::size_t id = 0;
  BoundState bounds;
  ActiveSet warm_active;
  ShadowSet warm_shadow;
  double inherited_gap = std::numeric_limits<double>::infinity();
  double dual_bound = -std::numeric_limits<double>::infinity();
  std::size_t depth = 0;
  /// f of the last iteration-capped solve put back in the queue
  double resume_f = std::numeric_limits<double>::infinity();
};

SolveOutcome solve(const ProblemInstance& instance, const SolverConfig& config);

struct PartitionSide
{
  ActiveSet active;
  ShadowSet shadow;
};

/// Splits the sets at variable j: v_j <= floor_val goes left, v_j >= ceil_val
/// right; weights renormalized per side. Throws std::logic_error when a side
/// has no active vertex.
std::pair<PartitionSide, PartitionSide> partition_vertices(const ActiveSet& active, const ShadowSet& shadow,
                                                           std::size_t j, double floor_val, double ceil_val);

struct BranchContext
{
  const ObjectiveOracle* objective = nullptr;
  Blmo* blmo = nullptr;
  const BoundState* bounds = nullptr;
  const ActiveSet* active = nullptr;
  std::size_t depth = 0;
};

/// Throws std::invalid_argument when no variable of J is fractional.
std::size_t select_branch_variable(std::span<const double> x_hat, const std::vector<std::size_t>& integer_indices,
                                   const BranchingConfig& strategy, const BranchContext& context = {});

/// Open nodes ordered by (dual bound, id).
using OpenSet = std::set<std::pair<double, std::size_t>>;

/// Whether at least `threshold` open nodes have a dual bound below current_dual.
bool tree_state_probe(const OpenSet& open_nodes, double current_dual, std::size_t threshold);

}  // namespace hullfw
