#include "hullfw/tree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace hullfw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double fractionality(double v)
{
  const double f = v - std::floor(v);
  return std::min(f, 1.0 - f);
}

bool within(const BoundState& b, const Vector& v)
{
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j] < b.lower[j] - 1e-9 || v[j] > b.upper[j] + 1e-9) { return false; }
  }
  return true;
}

/// Drops vertices outside the bounds and renormalizes the weights.
void restrict_sets(ActiveSet& active, ShadowSet& shadow, const BoundState& b)
{
  ActiveSet kept;
  double total = 0.0;
  for (std::size_t k = 0; k < active.size(); ++k) {
    if (within(b, active.vertices[k])) {
      kept.add(std::move(active.vertices[k]), active.weights[k]);
      total += active.weights[k];
    }
  }
  if (total > 0.0) {
    for (double& w : kept.weights) { w /= total; }
  } else {
    kept = {};
  }
  active = std::move(kept);
  std::erase_if(shadow.vertices, [&](const Vector& v) { return !within(b, v); });
}

bool crossed(const BoundState& b)
{
  for (std::size_t j = 0; j < b.lower.size(); ++j) {
    if (b.lower[j] > b.upper[j]) { return true; }
  }
  return false;
}

double status_code(Termination t) { return static_cast<double>(static_cast<int>(t)); }

}  // namespace

void SolverConfig::validate() const
{
  auto fail = [](const std::string& what) { throw std::invalid_argument("solver config: " + what); };
  if (!(abs_gap > 0.0)) { fail("abs_gap must be positive"); }
  if (!(rel_gap >= 0.0)) { fail("rel_gap must be nonnegative"); }
  if (!(eps0 > 0.0)) { fail("eps0 must be positive"); }
  if (!(rho > 0.0 && rho <= 1.0)) { fail("rho must lie in (0, 1]"); }
  const double em = effective_eps_min();
  if (!(em > 0.0) || em > eps0) { fail("eps_min must lie in (0, eps0]"); }
  if (!(laziness >= 1.0)) { fail("laziness must be at least 1"); }
  if (!(branching.hybrid_divisor > 0.0)) { fail("hybrid_divisor must be positive"); }
  if (!(branching.strong_eps > 0.0)) { fail("strong_eps must be positive"); }
  if (tree_state_threshold && *tree_state_threshold == 0) { fail("tree_state_threshold must be positive"); }
  if (!(time_limit > 0.0)) { fail("time_limit must be positive"); }
}

const char* to_string(SolveStatus s)
{
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::GapLimit: return "gap_limit";
    case SolveStatus::NodeLimit: return "node_limit";
    case SolveStatus::TimeLimit: return "time_limit";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

SolveStatus solve_status_from_string(const std::string& s)
{
  for (SolveStatus v : {SolveStatus::Optimal, SolveStatus::GapLimit, SolveStatus::NodeLimit, SolveStatus::TimeLimit,
                        SolveStatus::Infeasible}) {
    if (s == to_string(v)) { return v; }
  }
  throw std::invalid_argument("unknown solve status '" + s + "'");
}

std::pair<PartitionSide, PartitionSide> partition_vertices(const ActiveSet& active, const ShadowSet& shadow,
                                                           std::size_t j, double floor_val, double ceil_val)
{
  PartitionSide left, right;
  double wl = 0.0, wr = 0.0;
  for (std::size_t k = 0; k < active.size(); ++k) {
    const Vector& v = active.vertices[k];
    if (v[j] <= floor_val) {
      left.active.add(v, active.weights[k]);
      wl += active.weights[k];
    } else if (v[j] >= ceil_val) {
      right.active.add(v, active.weights[k]);
      wr += active.weights[k];
    } else {
      throw std::logic_error("partition_vertices: vertex is fractional at the branching variable");
    }
  }
  if (left.active.empty() || right.active.empty()) {
    throw std::logic_error("partition_vertices: one side has no active vertex");
  }
  for (double& w : left.active.weights) { w /= wl; }
  for (double& w : right.active.weights) { w /= wr; }
  for (const Vector& v : shadow.vertices) {
    if (v[j] <= floor_val) {
      left.shadow.vertices.push_back(v);
    } else if (v[j] >= ceil_val) {
      right.shadow.vertices.push_back(v);
    }
  }
  return {std::move(left), std::move(right)};
}

std::size_t select_branch_variable(std::span<const double> x_hat, const std::vector<std::size_t>& integer_indices,
                                   const BranchingConfig& strategy, const BranchContext& context)
{
  std::vector<std::size_t> candidates;
  for (std::size_t j : integer_indices) {
    if (fractionality(x_hat[j]) > milp::kIntegralityTol) { candidates.push_back(j); }
  }
  if (candidates.empty()) { throw std::invalid_argument("select_branch_variable: no fractional variable"); }
  std::sort(candidates.begin(), candidates.end());

  BranchingRule rule = strategy.rule;
  if (rule == BranchingRule::Hybrid) {
    const double limit = static_cast<double>(integer_indices.size()) / strategy.hybrid_divisor;
    rule = static_cast<double>(context.depth) < limit ? BranchingRule::PartialStrong : BranchingRule::MostFractional;
  }
  const bool can_probe = context.objective && context.blmo && context.bounds;
  if (rule == BranchingRule::MostFractional || candidates.size() == 1 || !can_probe) {
    std::size_t best = candidates.front();
    for (std::size_t j : candidates) {
      if (fractionality(x_hat[j]) > fractionality(x_hat[best])) { best = j; }
    }
    return best;
  }

  std::size_t best = candidates.front();
  double best_score = -kInf;
  for (std::size_t j : candidates) {
    const double fl = std::floor(x_hat[j]);
    std::optional<std::pair<PartitionSide, PartitionSide>> sides;
    if (context.active) {
      try {
        sides = partition_vertices(*context.active, {}, j, fl, fl + 1.0);
      } catch (const std::logic_error&) {
        sides.reset();
      }
    }
    double score = kInf;
    for (int dir = 0; dir < 2; ++dir) {
      BoundState child = *context.bounds;
      if (dir == 0) {
        child.upper[j] = fl;
      } else {
        child.lower[j] = fl + 1.0;
      }
      if (crossed(child)) { continue; }
      ActiveSet warm;
      if (sides) { warm = dir == 0 ? sides->first.active : sides->second.active; }
      ShadowSet none;
      restrict_sets(warm, none, child);
      BpcgOptions opt;
      opt.relaxed = true;
      opt.max_iterations = strategy.strong_iterations;
      opt.eps_tol = strategy.strong_eps;
      opt.use_shadow = false;
      const NodeSolveResult r = solve_node(*context.objective, *context.blmo, child, std::move(warm), {}, opt);
      const double bound = r.termination == Termination::Infeasible ? kInf : r.dual_bound();
      score = std::min(score, bound);
    }
    if (score > best_score) {
      best_score = score;
      best = j;
    }
  }
  return best;
}

bool tree_state_probe(const OpenSet& open_nodes, double current_dual, std::size_t threshold)
{
  std::size_t count = 0;
  for (const auto& [bound, id] : open_nodes) {
    if (!(bound < current_dual)) { break; }
    if (++count >= threshold) { return true; }
  }
  return false;
}

SolveOutcome solve(const ProblemInstance& instance, const SolverConfig& config)
{
  config.validate();
  instance.validate();
  SolveOutcome out;
  RunLog& log = out.log;
  log.header.instance = instance.name;
  log.header.solver = "hullfw";

  const auto start = std::chrono::steady_clock::now();
  std::optional<std::chrono::steady_clock::time_point> deadline;
  if (std::isfinite(config.time_limit)) {
    deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                           std::chrono::duration<double>(config.time_limit));
  }

  const ObjectiveOracle& f = *instance.objective;
  Blmo blmo(instance.region);
  const std::vector<std::size_t>& J = instance.integer_indices();
  const BoundState original = instance.global_bounds();
  BoundState global = original;
  const double eps_min = config.effective_eps_min();
  const std::optional<double> mu = config.use_strong_convexity ? f.strong_convexity_mu : std::nullopt;

  double ub = kInf;
  double closed_floor = kInf;
  double lb = -kInf;
  std::size_t current_node = 0;

  std::optional<TighteningContext> root_ctx;
  Vector root_x;
  std::map<std::size_t, double> root_partial;
  const PartialGap root_pg = [&](std::size_t j) {
    auto it = root_partial.find(j);
    if (it == root_partial.end()) {
      it = root_partial.emplace(j, partial_gap(blmo, original, root_ctx->gradient, root_x, j)).first;
    }
    return it->second;
  };

  auto log_tightening = [&](const std::vector<TighteningEvent>& events, bool is_global) {
    for (const auto& e : events) {
      ++out.tightenings;
      log.add("tightening", {{"node", static_cast<double>(current_node)},
                             {"variable", static_cast<double>(e.variable)},
                             {"upper", e.upper ? 1.0 : 0.0},
                             {"old", e.old_bound},
                             {"new", e.new_bound},
                             {"strong", e.strong ? 1.0 : 0.0},
                             {"global", is_global ? 1.0 : 0.0}});
    }
  };

  auto apply_global_tightening = [&]() {
    if (!config.use_global_tightening || !root_ctx || !std::isfinite(ub)) { return; }
    std::vector<TighteningEvent> events;
    const BoundState t = global_tightening(*root_ctx, root_x, ub, original, J, root_pg, &events);
    std::vector<TighteningEvent> changed;
    for (const auto& e : events) {
      const std::size_t j = e.variable;
      if (e.upper && e.new_bound < global.upper[j]) {
        changed.push_back({j, true, global.upper[j], e.new_bound, e.strong});
        global.upper[j] = t.upper[j];
      } else if (!e.upper && e.new_bound > global.lower[j]) {
        changed.push_back({j, false, global.lower[j], e.new_bound, e.strong});
        global.lower[j] = t.lower[j];
      }
    }
    log_tightening(changed, true);
  };

  auto offer = [&](const Vector& v, double value) {
    if (!(value < ub)) { return; }
    ub = value;
    out.incumbent = v;
    log.add("incumbent", {{"node", static_cast<double>(current_node)}, {"value", value}});
    apply_global_tightening();
  };

  std::map<std::size_t, Node> pending;
  OpenSet open;
  std::size_t next_id = 1;
  {
    Node root;
    root.bounds = global;
    pending.emplace(0, std::move(root));
    open.insert({-kInf, 0});
  }

  auto gap_closed = [&](double lo, double hi) {
    if (!std::isfinite(hi)) { return false; }
    const double gap = hi - lo;
    return gap <= config.abs_gap || gap <= config.rel_gap * std::max(std::abs(hi), 1e-8);
  };
  auto current_lb = [&]() {
    double v = std::min(ub, closed_floor);
    if (!open.empty()) { v = std::min(v, open.begin()->first); }
    return std::min(std::max(lb, v), ub);
  };
  // bounds within the gap tolerance of the incumbent cannot improve it by more
  // than abs_gap; they stay in the dual bound through closed_floor
  auto prunable = [&](double bound) {
    if (!std::isfinite(ub) || bound < ub - std::max(config.abs_gap, milp::cutoff_slack(ub))) { return false; }
    closed_floor = std::min(closed_floor, bound);
    return true;
  };

  SolveStatus limit_status = SolveStatus::Optimal;
  bool limited = false;
  while (!open.empty()) {
    lb = current_lb();
    out.bound_history.push_back({lb, ub});
    if (gap_closed(lb, ub)) { break; }
    if (out.nodes_processed >= config.node_limit) {
      limit_status = SolveStatus::NodeLimit;
      limited = true;
      break;
    }
    if (deadline && std::chrono::steady_clock::now() > *deadline) {
      limit_status = SolveStatus::TimeLimit;
      limited = true;
      break;
    }

    const auto [bound, id] = *open.begin();
    open.erase(open.begin());
    Node node = std::move(pending.at(id));
    pending.erase(id);
    current_node = id;
    if (prunable(bound)) {
      log.add("prune", {{"node", static_cast<double>(id)}, {"bound", bound}});
      continue;
    }
    for (std::size_t j = 0; j < global.lower.size(); ++j) {
      node.bounds.lower[j] = std::max(node.bounds.lower[j], global.lower[j]);
      node.bounds.upper[j] = std::min(node.bounds.upper[j], global.upper[j]);
    }
    if (crossed(node.bounds)) {
      log.add("infeasible", {{"node", static_cast<double>(id)}});
      continue;
    }
    restrict_sets(node.warm_active, node.warm_shadow, node.bounds);

    double eps = std::max(config.eps0 * std::pow(config.rho, static_cast<double>(node.depth)), eps_min);
    BpcgOptions opt;
    opt.eps_tol = eps;
    opt.primal_cutoff = ub;
    opt.laziness = config.laziness;
    opt.use_shadow = config.use_shadow_set;
    opt.certify = config.certify;
    opt.max_iterations = config.max_bpcg_iterations;
    opt.deadline = deadline;
    opt.record_trace = config.record_trace;
    if (config.tree_state_threshold) {
      const std::size_t threshold = *config.tree_state_threshold;
      opt.tree_state_probe = [&open, threshold](double dual) { return tree_state_probe(open, dual, threshold); };
    }

    auto run = [&](ActiveSet a, ShadowSet s) {
      NodeSolveResult r = solve_node(f, blmo, node.bounds, std::move(a), std::move(s), opt);
      for (const auto& inc : r.incumbents) { offer(inc.point, inc.value); }
      if (config.record_trace) {
        for (const auto& t : r.trace) {
          log.add("iteration", {{"node", static_cast<double>(id)},
                                {"iteration", static_cast<double>(t.iteration)},
                                {"f", t.f},
                                {"phi", t.phi},
                                {"step", static_cast<double>(static_cast<int>(t.step))},
                                {"lmo_calls", static_cast<double>(t.lmo_calls)}});
        }
      }
      return r;
    };
    NodeSolveResult res = run(std::move(node.warm_active), std::move(node.warm_shadow));
    ++out.nodes_processed;
    if (res.termination == Termination::Infeasible) {
      log.add("infeasible", {{"node", static_cast<double>(id)}});
      continue;
    }

    auto is_integral = [&](const Vector& x) {
      return std::all_of(J.begin(), J.end(), [&](std::size_t j) { return fractionality(x[j]) <= milp::kIntegralityTol; });
    };
    auto rounding_probe = [&](const Vector& x) {
      Vector rounded = x;
      for (std::size_t j : J) { rounded[j] = std::round(rounded[j]); }
      if (blmo.is_integer_feasible(global, rounded)) {
        const double value = f.eval(rounded);
        if (std::isfinite(value)) { offer(rounded, value); }
      }
    };
    bool integral = is_integral(res.iterate);
    rounding_probe(res.iterate);
    if (res.termination == Termination::GapTolerance && res.certified_gap > config.abs_gap && eps > eps_min &&
        (integral || ub <= res.f_value + config.abs_gap)) {
      // the incumbent already matches this node's primal value; only a
      // smaller gap can close it
      eps = eps_min;
      opt.eps_tol = eps;
      opt.primal_cutoff = ub;
      res = run(std::move(res.active), std::move(res.shadow));
      integral = is_integral(res.iterate);
      rounding_probe(res.iterate);
    }

    double node_dual = node.dual_bound;
    if (res.gap_certified) { node_dual = std::max(node_dual, res.dual_bound()); }
    if (config.record_nodes) {
      out.nodes.push_back({id, node.depth, node.bounds, res.f_value, res.certified_gap, res.gap_certified, node_dual});
    }
    log.add("node", {{"node", static_cast<double>(id)},
                     {"depth", static_cast<double>(node.depth)},
                     {"f", res.f_value},
                     {"gap", res.certified_gap},
                     {"dual", node_dual},
                     {"eps", eps},
                     {"lmo_calls", static_cast<double>(res.lmo_calls)},
                     {"iterations", static_cast<double>(res.iterations)},
                     {"termination", status_code(res.termination)}});

    if (res.termination == Termination::TimeLimit) {
      node.warm_active = std::move(res.active);
      node.warm_shadow = std::move(res.shadow);
      node.dual_bound = node_dual;
      open.insert({node_dual, id});
      pending.emplace(id, std::move(node));
      limit_status = SolveStatus::TimeLimit;
      limited = true;
      break;
    }

    TighteningContext ctx{res.gradient, res.f_value, res.certified_gap, ub, mu, f.sharpness};
    if (id == 0 && res.gap_certified) {
      root_ctx = ctx;
      root_x = res.iterate;
      apply_global_tightening();
    }

    if (prunable(node_dual)) {
      log.add("prune", {{"node", static_cast<double>(id)}, {"bound", node_dual}});
      continue;
    }
    if (integral && res.termination == Termination::IterationLimit && resume_progress(res.f_value, node.resume_f)) {
      // nothing to branch on yet the gap is open: continue later from where
      // the solve stopped
      node.warm_active = std::move(res.active);
      node.warm_shadow = std::move(res.shadow);
      node.dual_bound = node_dual;
      node.resume_f = res.f_value;
      open.insert({node_dual, id});
      pending.emplace(id, std::move(node));
      log.add("resume", {{"node", static_cast<double>(id)}, {"bound", node_dual}});
      continue;
    }
    if (integral) {
      if (blmo.is_integer_feasible(node.bounds, res.iterate)) { offer(res.iterate, res.f_value); }
      closed_floor = std::min(closed_floor, node_dual);
      log.add("closed", {{"node", static_cast<double>(id)}, {"bound", node_dual}});
      continue;
    }

    if (config.use_local_tightening && res.gap_certified && std::isfinite(ub)) {
      ctx.upper_bound = ub;
      std::map<std::size_t, double> cache;
      const PartialGap pg = [&](std::size_t j) {
        auto it = cache.find(j);
        if (it == cache.end()) {
          it = cache.emplace(j, partial_gap(blmo, node.bounds, res.gradient, res.iterate, j)).first;
        }
        return it->second;
      };
      std::vector<TighteningEvent> events;
      node.bounds = tighten_bounds(ctx, res.iterate, node.bounds, J, pg, &events);
      log_tightening(events, false);
    }

    BranchContext bctx{&f, &blmo, &node.bounds, &res.active, node.depth};
    const std::size_t j = select_branch_variable(res.iterate, J, config.branching, bctx);
    const double fl = std::floor(res.iterate[j]);
    std::optional<std::pair<PartitionSide, PartitionSide>> sides;
    if (config.use_warm_start) { sides = partition_vertices(res.active, res.shadow, j, fl, fl + 1.0); }
    log.add("branch", {{"node", static_cast<double>(id)}, {"variable", static_cast<double>(j)}, {"value", res.iterate[j]}});

    for (BranchDirection dir : {BranchDirection::Down, BranchDirection::Up}) {
      Node child;
      child.bounds = node.bounds;
      if (dir == BranchDirection::Down) {
        child.bounds.upper[j] = std::min(child.bounds.upper[j], fl);
      } else {
        child.bounds.lower[j] = std::max(child.bounds.lower[j], fl + 1.0);
      }
      if (crossed(child.bounds)) { continue; }
      double child_bound = node_dual;
      if (res.gap_certified && mu) {
        child_bound = std::max(child_bound, strong_convexity_node_bound(ctx, res.iterate, j, dir, J));
      }
      if (res.gap_certified && config.use_sharpness && f.sharpness) {
        const double dist = std::sqrt(child_rounding_distance_sq(res.iterate, j, dir, J));
        child_bound = std::max(child_bound, sharpness_node_bound(ctx, res.iterate, dist));
      }
      if (prunable(child_bound)) {
        log.add("prune", {{"node", static_cast<double>(next_id)}, {"bound", child_bound}});
        ++next_id;
        continue;
      }
      if (sides) {
        PartitionSide& side = dir == BranchDirection::Down ? sides->first : sides->second;
        child.warm_active = std::move(side.active);
        child.warm_shadow = std::move(side.shadow);
        restrict_sets(child.warm_active, child.warm_shadow, child.bounds);
      }
      child.id = next_id++;
      child.inherited_gap = res.certified_gap;
      child.dual_bound = child_bound;
      child.depth = node.depth + 1;
      open.insert({child_bound, child.id});
      pending.emplace(child.id, std::move(child));
    }
  }

  lb = current_lb();
  if (open.empty() && !std::isfinite(ub) && !std::isfinite(closed_floor)) {
    out.status = SolveStatus::Infeasible;
    lb = kInf;
  } else if (limited) {
    out.status = limit_status;
  } else {
    out.status = gap_closed(lb, ub) ? SolveStatus::Optimal : SolveStatus::GapLimit;
  }
  out.bound_history.push_back({lb, ub});
  out.primal = ub;
  out.dual = lb;
  out.total_lmo_calls = blmo.calls();
  out.total_lp_solves = blmo.lp_solves();
  log.summary = {to_string(out.status), out.primal,           out.dual,
                 out.nodes_processed,   out.total_lmo_calls, log.elapsed()};
  return out;
}

}  // namespace hullfw
