#include "hullfw/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace hullfw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

std::optional<Clock::time_point> deadline_after(double seconds)
{
  if (!std::isfinite(seconds)) { return std::nullopt; }
  return Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
}

bool expired(const std::optional<Clock::time_point>& deadline)
{
  return deadline && Clock::now() >= *deadline;
}

bool has_continuous(const ProblemInstance& inst) { return inst.integer_indices().size() < inst.dimension(); }

/// Copy of x with J rounded to the nearest integer.
Vector round_integers(const Vector& x, const std::vector<std::size_t>& J)
{
  Vector r = x;
  for (std::size_t j : J) { r[j] = std::round(r[j]); }
  return r;
}

/// Best continuous completion of x's integer part within `bounds`, or nothing
/// when that fixing is empty or the solve is cut short.
std::optional<Incumbent> complete(const ObjectiveOracle& f, Blmo& blmo, const BoundState& bounds, const Vector& x,
                                  const std::vector<std::size_t>& J, double eps,
                                  const std::optional<Clock::time_point>& deadline)
{
  BoundState fixed = bounds;
  for (std::size_t j : J) {
    const double v = std::clamp(std::round(x[j]), bounds.lower[j], bounds.upper[j]);
    fixed.lower[j] = v;
    fixed.upper[j] = v;
  }
  BpcgOptions opts;
  opts.relaxed = true;
  opts.eps_tol = eps;
  opts.use_shadow = false;
  opts.deadline = deadline;
  const NodeSolveResult res = solve_node(f, blmo, fixed, {}, {}, opts);
  if (res.termination == Termination::Infeasible || res.termination == Termination::TimeLimit) {
    return std::nullopt;
  }
  const Vector point = round_integers(res.iterate, J);
  if (!blmo.is_integer_feasible(bounds, point)) { return std::nullopt; }
  return Incumbent{point, f.eval(point)};
}

void finish_log(SolveOutcome& out)
{
  out.log.summary = {to_string(out.status), out.primal,           out.dual,
                     out.nodes_processed,   out.total_lmo_calls, out.log.elapsed()};
}

}  // namespace

OaCut gradient_cut(const ObjectiveOracle& f, std::span<const double> x)
{
  OaCut cut;
  cut.a = f.grad(x);
  cut.offset = f.eval(x) - dot(cut.a, x);
  return cut;
}

SolveOutcome solve_oa(const ProblemInstance& instance, double tolerance, std::size_t max_rounds,
                      const BaselineLimits& limits, OaState* state)
{
  if (!(tolerance > 0.0)) { throw std::invalid_argument("solve_oa: tolerance must be positive"); }
  if (max_rounds == 0) { throw std::invalid_argument("solve_oa: max_rounds must be positive"); }
  instance.validate();
  SolveOutcome out;
  out.log.header.instance = instance.name;
  out.log.header.solver = "oa";
  const auto deadline = deadline_after(limits.time_limit);

  const ObjectiveOracle& f = *instance.objective;
  Blmo blmo(instance.region);
  const auto& J = instance.integer_indices();
  const BoundState global = instance.global_bounds();
  const std::size_t n = instance.dimension();

  milp::MilpModel epi = instance.region.model;
  for (auto& row : epi.base.rows) { row.coeffs.push_back(0.0); }
  for (auto& ind : epi.indicators) { ind.row.coeffs.push_back(0.0); }
  epi.base.objective.assign(n + 1, 0.0);
  epi.base.objective[n] = 1.0;
  epi.base.lower.push_back(-kInf);
  epi.base.upper.push_back(kInf);

  OaState st;
  st.epigraph_var = n;
  double ub = kInf;
  double lb = -kInf;
  std::set<Vector> cut_points;
  std::size_t milp_solves = 0;
  std::size_t lp_solves = 0;

  auto offer = [&](const Vector& x, double value) {
    if (!(value < ub)) { return; }
    ub = value;
    st.incumbent = x;
    out.log.add("incumbent", {{"round", static_cast<double>(out.nodes_processed)}, {"value", value}});
  };
  auto add_cut = [&](const Vector& x) {
    if (!cut_points.insert(x).second) { return; }
    OaCut cut = gradient_cut(f, x);
    lp::Row row;
    row.coeffs = cut.a;
    row.coeffs.push_back(-1.0);
    row.sense = lp::Sense::LessEqual;
    row.rhs = -cut.offset;
    epi.base.rows.push_back(std::move(row));
    st.cuts.push_back(std::move(cut));
  };
  auto visit = [&](const Vector& x) {
    const Vector r = round_integers(x, J);
    if (blmo.is_integer_feasible(global, r)) { offer(r, f.eval(r)); }
    add_cut(x);
    if (has_continuous(instance)) {
      if (auto c = complete(f, blmo, global, x, J, tolerance / 4.0, deadline)) {
        offer(c->point, c->value);
        add_cut(c->point);
      }
    }
  };

  bool limited = false;
  bool closed = false;
  if (auto x0 = blmo.lmo(global, Vector(n, 0.0))) {
    ++milp_solves;
    visit(*x0);
    // t is bounded below by the first cut's minimum over the box
    const OaCut& c0 = st.cuts.front();
    double floor = c0.offset;
    for (std::size_t j = 0; j < n; ++j) { floor += std::min(c0.a[j] * global.lower[j], c0.a[j] * global.upper[j]); }
    if (std::isfinite(floor)) { epi.base.lower[n] = floor - 1.0; }

    while (out.nodes_processed < max_rounds) {
      if (expired(deadline)) {
        limited = true;
        break;
      }
      milp::MilpSolver solver(epi);
      const milp::MilpSolution sol = solver.solve(epi.base.objective, epi.base.lower, epi.base.upper);
      ++milp_solves;
      lp_solves += solver.count_lp_solves();
      ++out.nodes_processed;
      if (sol.status != milp::MilpStatus::Optimal) { break; }
      const Vector xk(sol.point.begin(), sol.point.begin() + static_cast<std::ptrdiff_t>(n));
      visit(xk);
      lb = std::min(std::max(lb, sol.value), ub);
      out.bound_history.push_back({lb, ub});
      out.log.add("round", {{"round", static_cast<double>(out.nodes_processed)}, {"lower", lb}, {"upper", ub}});
      if (ub - lb <= tolerance) {
        closed = true;
        break;
      }
    }
  } else {
    ++milp_solves;
  }

  if (!std::isfinite(ub) && !limited) {
    out.status = SolveStatus::Infeasible;
    lb = kInf;
  } else if (closed) {
    out.status = SolveStatus::Optimal;
  } else {
    out.status = limited ? SolveStatus::TimeLimit : SolveStatus::GapLimit;
  }
  out.incumbent = st.incumbent;
  out.primal = ub;
  out.dual = lb;
  out.total_lmo_calls = milp_solves;
  out.total_lp_solves = lp_solves + blmo.lp_solves();
  if (state) { *state = std::move(st); }
  finish_log(out);
  return out;
}

SolveOutcome solve_nlp_bnb(const ProblemInstance& instance, double tolerance, const BaselineLimits& limits)
{
  if (!(tolerance > 0.0)) { throw std::invalid_argument("solve_nlp_bnb: tolerance must be positive"); }
  instance.validate();
  SolveOutcome out;
  RunLog& log = out.log;
  log.header.instance = instance.name;
  log.header.solver = "nlp-bnb";
  const auto deadline = deadline_after(limits.time_limit);

  const ObjectiveOracle& f = *instance.objective;
  Blmo blmo(instance.region);
  const auto& J = instance.integer_indices();

  struct BnbNode
  {
    BoundState bounds;
    double bound = -kInf;
    std::size_t depth = 0;
    ActiveSet warm_active;
    double resume_f = kInf;
  };
  std::map<std::size_t, BnbNode> pending;
  OpenSet open;
  pending.emplace(0, BnbNode{instance.global_bounds(), -kInf, 0});
  open.insert({-kInf, 0});
  std::size_t next_id = 1;

  double ub = kInf;
  double lb = -kInf;
  double closed_floor = kInf;
  auto offer = [&](const Vector& x, double value) {
    if (!(value < ub)) { return; }
    ub = value;
    out.incumbent = x;
    log.add("incumbent", {{"value", value}});
  };
  auto current_lb = [&]() {
    double v = std::min(ub, closed_floor);
    if (!open.empty()) { v = std::min(v, open.begin()->first); }
    lb = std::min(std::max(lb, v), ub);
    return lb;
  };
  auto branch = [&](const BnbNode& node, double bound, std::size_t j, double down, double up) {
    for (int side = 0; side < 2; ++side) {
      BnbNode child{node.bounds, bound, node.depth + 1, {}, kInf};
      (side == 0 ? child.bounds.upper[j] : child.bounds.lower[j]) = side == 0 ? down : up;
      open.insert({bound, next_id});
      pending.emplace(next_id++, std::move(child));
    }
  };

  bool limited = false;
  SolveStatus limit_status = SolveStatus::NodeLimit;
  while (!open.empty()) {
    if (out.nodes_processed >= limits.node_limit || expired(deadline)) {
      limited = true;
      limit_status = out.nodes_processed >= limits.node_limit ? SolveStatus::NodeLimit : SolveStatus::TimeLimit;
      break;
    }
    const auto [bound, id] = *open.begin();
    if (bound >= ub - tolerance) {
      closed_floor = std::min(closed_floor, bound);
      open.erase(open.begin());
      pending.erase(id);
      continue;
    }
    out.bound_history.push_back({current_lb(), ub});
    open.erase(open.begin());
    BnbNode node = std::move(pending.at(id));
    pending.erase(id);
    ++out.nodes_processed;

    BpcgOptions opts;
    opts.relaxed = true;
    opts.eps_tol = tolerance / 2.0;
    opts.use_shadow = false;
    opts.primal_cutoff = ub;
    opts.deadline = deadline;
    NodeSolveResult res = solve_node(f, blmo, node.bounds, std::move(node.warm_active), {}, opts);
    for (const auto& inc : res.incumbents) {
      const Vector r = round_integers(inc.point, J);
      offer(r, f.eval(r));
    }
    if (res.termination == Termination::TimeLimit) {
      open.insert({node.bound, id});
      pending.emplace(id, std::move(node));
      limited = true;
      limit_status = SolveStatus::TimeLimit;
      break;
    }
    if (res.termination == Termination::Infeasible) { continue; }
    const double node_dual = std::max(node.bound, res.dual_bound());
    log.add("node", {{"node", static_cast<double>(id)}, {"depth", static_cast<double>(node.depth)},
                     {"f", res.f_value}, {"bound", node_dual}});
    if (res.termination == Termination::Cutoff || node_dual >= ub - tolerance) {
      closed_floor = std::min(closed_floor, node_dual);
      continue;
    }

    // conditional gradients approach integral optima only slowly, so the
    // node closes once its rounded point is within tolerance of its bound
    const Vector rounded = round_integers(res.iterate, J);
    if (blmo.is_integer_feasible(node.bounds, rounded)) {
      const double value = f.eval(rounded);
      offer(rounded, value);
      if (value <= node_dual + tolerance) {
        closed_floor = std::min(closed_floor, node_dual);
        continue;
      }
    }

    std::size_t pick = J.size();
    double best = milp::kIntegralityTol;
    for (std::size_t k = 0; k < J.size(); ++k) {
      const double v = res.iterate[J[k]];
      const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
      if (frac > best) {
        best = frac;
        pick = k;
      }
    }
    if (pick < J.size()) {
      const std::size_t j = J[pick];
      branch(node, node_dual, j, std::floor(res.iterate[j]), std::ceil(res.iterate[j]));
      continue;
    }

    // integral on J but infeasible (an indicator on a free binary): complete
    // the integer part, then split the first free integer variable
    if (auto c = complete(f, blmo, node.bounds, res.iterate, J, tolerance / 4.0, deadline)) {
      offer(c->point, c->value);
      if (c->value <= node_dual + tolerance) {
        closed_floor = std::min(closed_floor, node_dual);
        continue;
      }
    }
    std::size_t free_j = instance.dimension();
    for (std::size_t j : J) {
      if (node.bounds.lower[j] < node.bounds.upper[j]) {
        free_j = j;
        break;
      }
    }
    if (free_j == instance.dimension()) {
      if (res.termination == Termination::IterationLimit && resume_progress(res.f_value, node.resume_f)) {
        // continue an iteration-capped solve later from where it stopped
        node.warm_active = std::move(res.active);
        node.resume_f = res.f_value;
        node.bound = node_dual;
        open.insert({node_dual, id});
        pending.emplace(id, std::move(node));
        continue;
      }
      closed_floor = std::min(closed_floor, node_dual);
      continue;
    }
    const double v = rounded[free_j];
    if (v < node.bounds.upper[free_j]) {
      branch(node, node_dual, free_j, v, v + 1.0);
    } else {
      branch(node, node_dual, free_j, v - 1.0, v);
    }
  }

  current_lb();
  if (!std::isfinite(ub) && !limited) {
    out.status = SolveStatus::Infeasible;
    lb = kInf;
  } else if (limited) {
    out.status = limit_status;
  } else {
    out.status = ub - lb <= tolerance ? SolveStatus::Optimal : SolveStatus::GapLimit;
  }
  out.bound_history.push_back({lb, ub});
  out.primal = ub;
  out.dual = lb;
  out.total_lmo_calls = blmo.relaxed_calls();
  out.total_lp_solves = blmo.lp_solves();
  finish_log(out);
  return out;
}

}  // namespace hullfw
