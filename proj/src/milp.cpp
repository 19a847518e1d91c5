#include "hullfw/milp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

namespace hullfw::milp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct OpenNode
{
  double bound;
  std::size_t id;
  Vector lower;
  Vector upper;
};

struct WorseNode
{
  bool operator()(const OpenNode& a, const OpenNode& b) const
  {
    if (a.bound != b.bound) { return a.bound > b.bound; }
    return a.id > b.id;
  }
};

double fractionality(double v)
{
  const double f = v - std::floor(v);
  return std::min(f, 1.0 - f);
}

}  // namespace

void MilpModel::validate() const
{
  base.validate();
  const std::size_t n = dimension();
  for (std::size_t j : integer_indices) {
    if (j >= n) { throw std::invalid_argument("MilpModel: integer index " + std::to_string(j) + " out of range"); }
  }
  for (const auto& ind : indicators) {
    if (std::find(integer_indices.begin(), integer_indices.end(), ind.binary) == integer_indices.end()) {
      throw std::invalid_argument("MilpModel: indicator variable " + std::to_string(ind.binary) +
                                  " is not integer");
    }
    if (base.lower[ind.binary] < 0.0 || base.upper[ind.binary] > 1.0) {
      throw std::invalid_argument("MilpModel: indicator variable " + std::to_string(ind.binary) +
                                  " is not binary");
    }
    if (ind.row.coeffs.size() != n) { throw std::invalid_argument("MilpModel: indicator row has wrong length"); }
  }
}

double row_violation(const lp::Row& row, std::span<const double> x)
{
  const double activity = dot(row.coeffs, x);
  switch (row.sense) {
    case lp::Sense::LessEqual: return std::max(0.0, activity - row.rhs);
    case lp::Sense::GreaterEqual: return std::max(0.0, row.rhs - activity);
    case lp::Sense::Equal: return std::abs(activity - row.rhs);
  }
  return 0.0;
}

bool is_feasible(const MilpModel& model, std::span<const double> lower, std::span<const double> upper,
                 std::span<const double> x, double tol)
{
  if (x.size() != model.dimension()) { return false; }
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!std::isfinite(x[j])) { return false; }
    if (x[j] < lower[j] - tol || x[j] > upper[j] + tol) { return false; }
  }
  for (std::size_t j : model.integer_indices) {
    if (std::abs(x[j] - std::round(x[j])) > tol) { return false; }
  }
  for (const auto& row : model.base.rows) {
    if (row_violation(row, x) > tol) { return false; }
  }
  for (const auto& ind : model.indicators) {
    if (std::round(x[ind.binary]) >= 1.0 && row_violation(ind.row, x) > tol) { return false; }
  }
  return true;
}

MilpSolver::MilpSolver(MilpModel model) : model_(std::move(model))
{
  model_.validate();
  std::sort(model_.integer_indices.begin(), model_.integer_indices.end());
}

lp::LpSolution MilpSolver::solve_node_lp(std::span<const double> objective, std::span<const double> lower,
                                         std::span<const double> upper)
{
  std::vector<bool> active(model_.indicators.size(), false);
  lp::LinearProgram prog;
  prog.objective.assign(objective.begin(), objective.end());
  prog.rows = model_.base.rows;
  for (std::size_t k = 0; k < model_.indicators.size(); ++k) {
    if (lower[model_.indicators[k].binary] >= 0.5) {
      active[k] = true;
      prog.rows.push_back(model_.indicators[k].row);
    }
  }
  prog.lower.assign(lower.begin(), lower.end());
  prog.upper.assign(upper.begin(), upper.end());
  ++lp_solves_;
  return engines_[active].resolve(prog);
}

lp::LpSolution MilpSolver::solve_relaxation(std::span<const double> objective, std::span<const double> lower,
                                            std::span<const double> upper)
{
  const std::size_t n = model_.dimension();
  if (objective.size() != n || lower.size() != n || upper.size() != n) {
    throw std::invalid_argument("MilpSolver: dimension mismatch");
  }
  return solve_node_lp(objective, lower, upper);
}

MilpSolution MilpSolver::solve(std::span<const double> objective, std::span<const double> lower,
                               std::span<const double> upper, std::optional<double> cutoff)
{
  const std::size_t n = model_.dimension();
  if (objective.size() != n || lower.size() != n || upper.size() != n) {
    throw std::invalid_argument("MilpSolver: dimension mismatch (expected " + std::to_string(n) + ")");
  }
  last_nodes_ = 0;

  Vector root_lo(lower.begin(), lower.end());
  Vector root_up(upper.begin(), upper.end());
  for (std::size_t j : model_.integer_indices) {
    root_lo[j] = std::ceil(root_lo[j] - kIntegralityTol);
    root_up[j] = std::floor(root_up[j] + kIntegralityTol);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (root_lo[j] > root_up[j]) { return {}; }
  }

  MilpSolution best;
  double threshold = cutoff.value_or(kInf);
  auto prunable = [&](double bound) {
    return std::isfinite(threshold) && bound >= threshold - cutoff_slack(threshold);
  };
  auto offer = [&](Vector x) {
    for (std::size_t j : model_.integer_indices) { x[j] = std::round(x[j]); }
    const double value = dot(objective, x);
    if (value < threshold && (best.status != MilpStatus::Optimal || value < best.value)) {
      best.status = MilpStatus::Optimal;
      best.value = value;
      best.point = std::move(x);
      threshold = value;
    }
  };

  std::priority_queue<OpenNode, std::vector<OpenNode>, WorseNode> open;
  std::size_t next_id = 0;
  open.push({-kInf, next_id++, std::move(root_lo), std::move(root_up)});

  while (!open.empty()) {
    OpenNode node = open.top();
    open.pop();
    if (prunable(node.bound)) { continue; }
    ++last_nodes_;
    const lp::LpSolution rel = solve_node_lp(objective, node.lower, node.upper);
    if (rel.status == lp::LpStatus::Unbounded) {
      throw std::runtime_error("MilpSolver: unbounded relaxation; the region must be compact");
    }
    if (rel.status == lp::LpStatus::Infeasible) { continue; }
    const double bound = std::max(node.bound, rel.value);
    if (prunable(bound)) { continue; }
    const Vector& x = rel.point;

    std::size_t branch = n;
    double best_frac = kIntegralityTol;
    for (std::size_t j : model_.integer_indices) {
      const double f = fractionality(x[j]);
      if (f > best_frac) {
        best_frac = f;
        branch = j;
      }
    }
    if (branch == n) {
      for (const auto& ind : model_.indicators) {
        const std::size_t z = ind.binary;
        if (node.lower[z] < 0.5 && std::round(x[z]) >= 1.0 && row_violation(ind.row, x) > kIntegralityTol) {
          branch = z;
          break;
        }
      }
      if (branch == n) {
        offer(x);
        continue;
      }
    } else {
      Vector rounded = x;
      for (std::size_t j : model_.integer_indices) { rounded[j] = std::round(rounded[j]); }
      if (is_feasible(model_, node.lower, node.upper, rounded)) { offer(std::move(rounded)); }
    }

    const double v = x[branch];
    const double down = fractionality(v) <= kIntegralityTol ? std::round(v) - 1.0 : std::floor(v);
    // down child keeps x_branch <= down, up child x_branch >= down + 1
    OpenNode left{bound, next_id++, node.lower, node.upper};
    left.upper[branch] = down;
    OpenNode right{bound, next_id++, std::move(node.lower), std::move(node.upper)};
    right.lower[branch] = down + 1.0;
    if (left.lower[branch] <= left.upper[branch]) { open.push(std::move(left)); }
    if (right.lower[branch] <= right.upper[branch]) { open.push(std::move(right)); }
  }
  return best;
}

}  // namespace hullfw::milp
