#include "hullfw/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hullfw::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kZeroStep = 1e-12;
constexpr std::size_t kRefactorEvery = 64;

enum class VarStatus { Basic, AtLower, AtUpper, FreeZero };

}  // namespace

void LinearProgram::validate() const
{
  const std::size_t n = objective.size();
  if (lower.size() != n || upper.size() != n) {
    throw std::invalid_argument("LinearProgram: bound vectors have length " +
                                std::to_string(lower.size()) + "/" + std::to_string(upper.size()) +
                                ", expected " + std::to_string(n));
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].coeffs.size() != n) {
      throw std::invalid_argument("LinearProgram: row " + std::to_string(i) + " has " +
                                  std::to_string(rows[i].coeffs.size()) + " coefficients, expected " +
                                  std::to_string(n));
    }
  }
}

double max_violation(const LinearProgram& lp, std::span<const double> x)
{
  double worst = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    worst = std::max(worst, lp.lower[j] - x[j]);
    worst = std::max(worst, x[j] - lp.upper[j]);
  }
  for (const Row& row : lp.rows) {
    const double activity = dot(row.coeffs, x);
    switch (row.sense) {
      case Sense::LessEqual: worst = std::max(worst, activity - row.rhs); break;
      case Sense::GreaterEqual: worst = std::max(worst, row.rhs - activity); break;
      case Sense::Equal: worst = std::max(worst, std::abs(activity - row.rhs)); break;
    }
  }
  return worst;
}

struct SimplexSolver::Tableau
{
  // structure of the program this tableau was built for
  LinearProgram source;

  std::size_t n = 0;      // structural columns
  std::size_t m = 0;      // rows
  std::size_t ncols = 0;  // n + m + artificials
  std::size_t width = 0;  // ncols + 1 (rhs column)

  std::vector<double> original;  // m x width, never pivoted
  std::vector<double> t;         // m x width, B^{-1} [A I art | b]
  std::vector<std::size_t> basis;
  std::vector<VarStatus> status;
  std::vector<double> lo, up, cost, x, d;
  std::size_t pivots_since_refactor = 0;
  std::size_t pivots = 0;
  std::size_t degenerate = 0;
  bool bland = false;

  double& at(std::size_t i, std::size_t j) { return t[i * width + j]; }
  double at(std::size_t i, std::size_t j) const { return t[i * width + j]; }

  bool is_fixed(std::size_t j) const { return up[j] - lo[j] <= 0.0; }

  void place_nonbasic(std::size_t j)
  {
    if (std::isfinite(lo[j])) {
      status[j] = VarStatus::AtLower;
      x[j] = lo[j];
    } else if (std::isfinite(up[j])) {
      status[j] = VarStatus::AtUpper;
      x[j] = up[j];
    } else {
      status[j] = VarStatus::FreeZero;
      x[j] = 0.0;
    }
  }

  void pivot(std::size_t r, std::size_t q, bool update_costs)
  {
    const double p = at(r, q);
    double* row_r = &t[r * width];
    for (std::size_t j = 0; j < width; ++j) { row_r[j] /= p; }
    row_r[q] = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r) { continue; }
      double* row_i = &t[i * width];
      const double f = row_i[q];
      if (f == 0.0) { continue; }
      for (std::size_t j = 0; j < width; ++j) { row_i[j] -= f * row_r[j]; }
      row_i[q] = 0.0;
    }
    if (update_costs) {
      const double f = d[q];
      if (f != 0.0) {
        for (std::size_t j = 0; j < ncols; ++j) { d[j] -= f * row_r[j]; }
      }
      d[q] = 0.0;
    }
    basis[r] = q;
    status[q] = VarStatus::Basic;
  }

  void recompute_basic_values()
  {
    for (std::size_t i = 0; i < m; ++i) {
      const double* row_i = &t[i * width];
      double v = row_i[ncols];
      for (std::size_t j = 0; j < ncols; ++j) {
        if (status[j] != VarStatus::Basic && x[j] != 0.0) { v -= row_i[j] * x[j]; }
      }
      x[basis[i]] = v;
    }
  }

  void recompute_reduced_costs()
  {
    d = cost;
    for (std::size_t i = 0; i < m; ++i) {
      const double cb = cost[basis[i]];
      if (cb == 0.0) { continue; }
      const double* row_i = &t[i * width];
      for (std::size_t j = 0; j < ncols; ++j) { d[j] -= cb * row_i[j]; }
    }
    for (std::size_t i = 0; i < m; ++i) { d[basis[i]] = 0.0; }
  }

  /// Rebuilds B^{-1}[A I art | b] from the original matrix for the current
  /// basic set. Returns false (leaving state untouched) if the basis is
  /// numerically singular.
  bool refactor()
  {
    std::vector<double> fresh = original;
    std::vector<std::size_t> cols(basis.begin(), basis.end());
    std::sort(cols.begin(), cols.end());
    std::vector<bool> used(m, false);
    std::vector<std::size_t> new_basis(m, 0);
    auto cell = [&](std::size_t i, std::size_t j) -> double& { return fresh[i * width + j]; };
    for (std::size_t q : cols) {
      std::size_t best = m;
      double best_abs = 1e-11;
      for (std::size_t i = 0; i < m; ++i) {
        if (!used[i] && std::abs(cell(i, q)) > best_abs) {
          best_abs = std::abs(cell(i, q));
          best = i;
        }
      }
      if (best == m) { return false; }
      const double p = cell(best, q);
      for (std::size_t j = 0; j < width; ++j) { cell(best, j) /= p; }
      for (std::size_t i = 0; i < m; ++i) {
        if (i == best) { continue; }
        const double f = cell(i, q);
        if (f == 0.0) { continue; }
        for (std::size_t j = 0; j < width; ++j) { cell(i, j) -= f * cell(best, j); }
      }
      used[best] = true;
      new_basis[best] = q;
    }
    t = std::move(fresh);
    basis = std::move(new_basis);
    pivots_since_refactor = 0;
    recompute_reduced_costs();
    recompute_basic_values();
    return true;
  }

  void after_pivot()
  {
    ++pivots;
    if (++pivots_since_refactor >= kRefactorEvery) {
      refactor();
    } else {
      recompute_basic_values();
    }
  }

  std::size_t iteration_cap() const { return 50 * (m + ncols) + 1000; }

  enum class Outcome { Optimal, Unbounded };

  /// Primal simplex from a primal feasible basis for the current `cost`.
  Outcome primal()
  {
    const std::size_t degenerate_limit = 5 * (m + n);
    for (std::size_t iter = 0;; ++iter) {
      if (iter > iteration_cap()) {
        throw std::runtime_error("simplex: iteration limit exceeded (numerical cycling)");
      }
      // pricing
      std::size_t q = ncols;
      double q_score = 0.0;
      int q_dir = 0;
      for (std::size_t j = 0; j < ncols; ++j) {
        if (status[j] == VarStatus::Basic || is_fixed(j)) { continue; }
        int dir = 0;
        if (status[j] == VarStatus::AtLower && d[j] < -kOptimalityTol) {
          dir = 1;
        } else if (status[j] == VarStatus::AtUpper && d[j] > kOptimalityTol) {
          dir = -1;
        } else if (status[j] == VarStatus::FreeZero && std::abs(d[j]) > kOptimalityTol) {
          dir = d[j] < 0.0 ? 1 : -1;
        }
        if (dir == 0) { continue; }
        if (bland) {
          q = j;
          q_dir = dir;
          break;
        }
        if (std::abs(d[j]) > q_score) {
          q_score = std::abs(d[j]);
          q = j;
          q_dir = dir;
        }
      }
      if (q == ncols) { return Outcome::Optimal; }

      // ratio test
      double step = kInf;
      std::size_t leave_row = m;
      double leave_alpha = 0.0;
      if (std::isfinite(lo[q]) && std::isfinite(up[q])) { step = up[q] - lo[q]; }
      for (std::size_t i = 0; i < m; ++i) {
        const double alpha = q_dir * at(i, q);
        const std::size_t b = basis[i];
        double limit = kInf;
        if (alpha > kPivotTol && std::isfinite(lo[b])) {
          limit = std::max(0.0, (x[b] - lo[b]) / alpha);
        } else if (alpha < -kPivotTol && std::isfinite(up[b])) {
          limit = std::max(0.0, (up[b] - x[b]) / -alpha);
        }
        if (!std::isfinite(limit)) { continue; }
        bool take = false;
        if (limit < step - kZeroStep) {
          take = true;
        } else if (limit <= step + kZeroStep) {
          if (leave_row == m) {
            take = limit < step;  // ties with a bound flip keep the flip
          } else if (bland) {
            take = b < basis[leave_row];
          } else {
            take = std::abs(alpha) > std::abs(leave_alpha);
          }
        }
        if (take) {
          step = limit;
          leave_row = i;
          leave_alpha = alpha;
        }
      }
      if (!std::isfinite(step)) { return Outcome::Unbounded; }

      if (step <= kZeroStep) {
        if (++degenerate > degenerate_limit) { bland = true; }
      }

      if (leave_row == m) {
        // bound flip of the entering variable
        x[q] = q_dir > 0 ? up[q] : lo[q];
        status[q] = q_dir > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
        recompute_basic_values();
        continue;
      }
      const std::size_t leaving = basis[leave_row];
      x[q] += q_dir * step;
      pivot(leave_row, q, true);
      if (leave_alpha > 0.0) {
        status[leaving] = VarStatus::AtLower;
        x[leaving] = lo[leaving];
      } else {
        status[leaving] = VarStatus::AtUpper;
        x[leaving] = up[leaving];
      }
      after_pivot();
    }
  }

  enum class DualOutcome { Feasible, Infeasible };

  /// Dual simplex from a dual feasible basis until primal feasible.
  DualOutcome dual()
  {
    for (std::size_t iter = 0;; ++iter) {
      if (iter > iteration_cap()) {
        throw std::runtime_error("dual simplex: iteration limit exceeded (numerical cycling)");
      }
      std::size_t r = m;
      double worst = kFeasibilityTol;
      double target = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t b = basis[i];
        if (lo[b] - x[b] > worst) {
          worst = lo[b] - x[b];
          r = i;
          target = lo[b];
        } else if (x[b] - up[b] > worst) {
          worst = x[b] - up[b];
          r = i;
          target = up[b];
        }
      }
      if (r == m) { return DualOutcome::Feasible; }
      const std::size_t leaving = basis[r];
      const bool increase = target > x[leaving];

      std::size_t q = ncols;
      double best_ratio = kInf;
      double best_abs = 0.0;
      for (std::size_t j = 0; j < ncols; ++j) {
        if (status[j] == VarStatus::Basic || is_fixed(j)) { continue; }
        const double a = at(r, j);
        if (std::abs(a) <= kPivotTol) { continue; }
        // moving x_j up changes x_leaving by -a per unit
        const bool can_up = status[j] == VarStatus::AtLower || status[j] == VarStatus::FreeZero;
        const bool can_down = status[j] == VarStatus::AtUpper || status[j] == VarStatus::FreeZero;
        const bool eligible = increase ? ((can_up && a < 0.0) || (can_down && a > 0.0))
                                       : ((can_up && a > 0.0) || (can_down && a < 0.0));
        if (!eligible) { continue; }
        const double ratio = std::abs(d[j]) / std::abs(a);
        if (ratio < best_ratio - kZeroStep ||
            (ratio <= best_ratio + kZeroStep && std::abs(a) > best_abs)) {
          best_ratio = ratio;
          best_abs = std::abs(a);
          q = j;
        }
      }
      if (q == ncols) { return DualOutcome::Infeasible; }

      const double delta = -(target - x[leaving]) / at(r, q);
      x[q] += delta;
      pivot(r, q, true);
      status[leaving] = target == lo[leaving] ? VarStatus::AtLower : VarStatus::AtUpper;
      x[leaving] = target;
      after_pivot();
    }
  }

  bool dual_feasible() const
  {
    for (std::size_t j = 0; j < ncols; ++j) {
      if (status[j] == VarStatus::Basic || is_fixed(j)) { continue; }
      if (status[j] == VarStatus::AtLower && d[j] < -kOptimalityTol) { return false; }
      if (status[j] == VarStatus::AtUpper && d[j] > kOptimalityTol) { return false; }
      if (status[j] == VarStatus::FreeZero && std::abs(d[j]) > kOptimalityTol) { return false; }
    }
    return true;
  }

  bool primal_feasible() const
  {
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t b = basis[i];
      if (x[b] < lo[b] - kFeasibilityTol || x[b] > up[b] + kFeasibilityTol) { return false; }
    }
    return true;
  }

  LpSolution extract(LpStatus st) const
  {
    LpSolution sol;
    sol.status = st;
    if (st != LpStatus::Optimal) { return sol; }
    sol.point.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
    sol.value = dot(source.objective, sol.point);
    sol.is_vertex = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (status[j] == VarStatus::FreeZero) { sol.is_vertex = false; }
    }
    return sol;
  }

  void set_phase2_costs()
  {
    std::fill(cost.begin(), cost.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) { cost[j] = source.objective[j]; }
    recompute_reduced_costs();
  }
};

SimplexSolver::SimplexSolver() = default;
SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

std::vector<std::size_t> SimplexSolver::basis() const
{
  if (!state_) { return {}; }
  std::vector<std::size_t> b = state_->basis;
  std::sort(b.begin(), b.end());
  return b;
}

LpSolution SimplexSolver::solve(const LinearProgram& lp)
{
  lp.validate();
  last_warm_ = false;
  for (std::size_t j = 0; j < lp.dimension(); ++j) {
    if (lp.lower[j] > lp.upper[j]) {
      state_.reset();
      return LpSolution{};
    }
  }

  auto tab = std::make_unique<Tableau>();
  Tableau& s = *tab;
  s.source = lp;
  s.n = lp.dimension();
  s.m = lp.rows.size();
  const std::size_t n = s.n;
  const std::size_t m = s.m;

  // nonbasic structurals at a finite bound, slacks decide which rows need
  // an artificial
  std::vector<double> xs(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isfinite(lp.lower[j])) {
      xs[j] = lp.lower[j];
    } else if (std::isfinite(lp.upper[j])) {
      xs[j] = lp.upper[j];
    } else {
      xs[j] = 0.0;
    }
  }
  std::vector<double> slack_lo(m), slack_up(m), residual(m);
  std::vector<int> art_sign(m, 0);
  std::size_t n_art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const Row& row = lp.rows[i];
    switch (row.sense) {
      case Sense::LessEqual: slack_lo[i] = 0.0; slack_up[i] = kInf; break;
      case Sense::GreaterEqual: slack_lo[i] = -kInf; slack_up[i] = 0.0; break;
      case Sense::Equal: slack_lo[i] = 0.0; slack_up[i] = 0.0; break;
    }
    residual[i] = row.rhs - dot(row.coeffs, xs);
    if (residual[i] < slack_lo[i] - kFeasibilityTol || residual[i] > slack_up[i] + kFeasibilityTol) {
      const double bound = residual[i] < slack_lo[i] ? slack_lo[i] : slack_up[i];
      art_sign[i] = residual[i] - bound > 0.0 ? 1 : -1;
      ++n_art;
    }
  }

  s.ncols = n + m + n_art;
  s.width = s.ncols + 1;
  s.original.assign(m * s.width, 0.0);
  s.lo.assign(s.ncols, 0.0);
  s.up.assign(s.ncols, 0.0);
  s.cost.assign(s.ncols, 0.0);
  s.x.assign(s.ncols, 0.0);
  s.status.assign(s.ncols, VarStatus::AtLower);
  s.basis.assign(m, 0);

  std::size_t art = n + m;
  for (std::size_t i = 0; i < m; ++i) {
    double* row = &s.original[i * s.width];
    std::copy(lp.rows[i].coeffs.begin(), lp.rows[i].coeffs.end(), row);
    row[n + i] = 1.0;
    row[s.ncols] = lp.rows[i].rhs;
    s.lo[n + i] = slack_lo[i];
    s.up[n + i] = slack_up[i];
    if (art_sign[i] != 0) {
      row[art] = art_sign[i];
      s.lo[art] = 0.0;
      s.up[art] = kInf;
      s.cost[art] = 1.0;
      s.basis[i] = art;
      ++art;
    } else {
      s.basis[i] = n + i;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    s.lo[j] = lp.lower[j];
    s.up[j] = lp.upper[j];
  }
  for (std::size_t j = 0; j < s.ncols; ++j) { s.place_nonbasic(j); }
  for (std::size_t i = 0; i < m; ++i) { s.status[s.basis[i]] = VarStatus::Basic; }
  s.t = s.original;
  if (!s.refactor()) { throw std::logic_error("simplex: initial basis is singular"); }

  if (n_art > 0) {
    s.primal();
    double infeasibility = 0.0;
    for (std::size_t j = n + m; j < s.ncols; ++j) { infeasibility += s.x[j]; }
    double scale = 1.0;
    for (const Row& row : lp.rows) { scale = std::max(scale, std::abs(row.rhs)); }
    total_pivots_ += s.pivots;
    if (infeasibility > kFeasibilityTol * scale) {
      state_.reset();
      return LpSolution{};
    }
    for (std::size_t j = n + m; j < s.ncols; ++j) {
      s.up[j] = 0.0;
      if (s.status[j] != VarStatus::Basic) {
        s.status[j] = VarStatus::AtLower;
        s.x[j] = 0.0;
      }
    }
    s.pivots = 0;
    s.degenerate = 0;
    s.bland = false;
    s.recompute_basic_values();
  }

  s.set_phase2_costs();
  const LpStatus status = finish(s);
  total_pivots_ += s.pivots;
  if (status != LpStatus::Optimal) {
    state_.reset();
    LpSolution sol;
    sol.status = status;
    return sol;
  }
  LpSolution sol = s.extract(LpStatus::Optimal);
  state_ = std::move(tab);
  return sol;
}

LpSolution SimplexSolver::resolve_with_bounds(const LinearProgram& lp,
                                              std::span<const double> lower,
                                              std::span<const double> upper)
{
  const std::size_t n = lp.dimension();
  if (lower.size() != n || upper.size() != n) {
    throw std::invalid_argument("resolve_with_bounds: bound vectors do not match the LP dimension");
  }
  LinearProgram bounded = lp;
  bounded.lower.assign(lower.begin(), lower.end());
  bounded.upper.assign(upper.begin(), upper.end());
  return resolve(bounded);
}

LpSolution SimplexSolver::resolve(const LinearProgram& lp)
{
  lp.validate();
  const std::size_t n = lp.dimension();
  const bool compatible = state_ && state_->n == n && state_->source.rows == lp.rows;
  if (!compatible) { return solve(lp); }
  for (std::size_t j = 0; j < n; ++j) {
    if (lp.lower[j] > lp.upper[j]) {
      last_warm_ = false;
      return LpSolution{};
    }
  }

  Tableau& s = *state_;
  const bool new_costs = s.source.objective != lp.objective;
  s.source.objective = lp.objective;
  s.source.lower = lp.lower;
  s.source.upper = lp.upper;
  s.pivots = 0;
  s.degenerate = 0;
  s.bland = false;
  for (std::size_t j = 0; j < n; ++j) {
    s.lo[j] = lp.lower[j];
    s.up[j] = lp.upper[j];
    if (s.status[j] == VarStatus::Basic) { continue; }
    if (s.status[j] == VarStatus::AtLower && std::isfinite(s.lo[j])) {
      s.x[j] = s.lo[j];
    } else if (s.status[j] == VarStatus::AtUpper && std::isfinite(s.up[j])) {
      s.x[j] = s.up[j];
    } else {
      s.place_nonbasic(j);
    }
  }
  if (new_costs) { s.set_phase2_costs(); }
  s.recompute_basic_values();
  if (!s.dual_feasible() && !s.primal_feasible()) { return solve(lp); }

  last_warm_ = true;
  const LpStatus status = finish(s);
  total_pivots_ += s.pivots;
  if (status == LpStatus::Unbounded) { state_.reset(); }
  if (status != LpStatus::Optimal) {
    LpSolution sol;
    sol.status = status;
    return sol;
  }
  return s.extract(LpStatus::Optimal);
}

// Drives a basis that is primal or dual feasible for the phase-2 costs to
// optimality, re-polishing after the final refactor.
LpStatus SimplexSolver::finish(Tableau& s)
{
  for (int round = 0; round < 3; ++round) {
    if (!s.primal_feasible()) {
      if (!s.dual_feasible()) { return LpStatus::Infeasible; }
      if (s.dual() == Tableau::DualOutcome::Infeasible) { return LpStatus::Infeasible; }
    }
    if (s.primal() == Tableau::Outcome::Unbounded) { return LpStatus::Unbounded; }
    s.refactor();
    if (s.primal_feasible() && s.dual_feasible()) { return LpStatus::Optimal; }
  }
  return s.primal_feasible() ? LpStatus::Optimal : LpStatus::Infeasible;
}

}  // namespace hullfw::lp
