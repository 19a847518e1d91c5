#include "hullfw/bpcg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hullfw {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string describe(std::span<const double> x)
{
  std::ostringstream os;
  os << "[";
  for (std::size_t j = 0; j < x.size() && j < 8; ++j) { os << (j ? ", " : "") << x[j]; }
  if (x.size() > 8) { os << ", ..."; }
  os << "]";
  return os.str();
}

double eval_checked(const ObjectiveOracle& f, std::span<const double> x)
{
  const double v = f.eval(x);
  if (!std::isfinite(v)) { throw NumericalFailure("objective is not finite at " + describe(x)); }
  return v;
}

Vector grad_checked(const ObjectiveOracle& f, std::span<const double> x)
{
  Vector g = f.grad(x);
  for (double v : g) {
    if (!std::isfinite(v)) { throw NumericalFailure("gradient is not finite at " + describe(x)); }
  }
  return g;
}

StepResult step_with(const ObjectiveOracle& f, std::span<const double> x, double fx, double gd,
                     std::span<const double> d, double gamma_max, double lipschitz_estimate)
{
  const double dd = dot(d, d);
  if (dd == 0.0) { return {0.0, lipschitz_estimate}; }
  const double slack = 4.0 * kEps * std::max(1.0, std::abs(fx));
  double lip = std::max(lipschitz_estimate, 1e-12) / 2.0;
  Vector trial(x.size());
  for (int k = 0; k < 200; ++k) {
    const double gamma = std::min(gd / (lip * dd), gamma_max);
    for (std::size_t j = 0; j < x.size(); ++j) { trial[j] = x[j] - gamma * d[j]; }
    const double ft = f.eval(trial);
    if (std::isfinite(ft) && ft <= fx - gamma * gd + 0.5 * gamma * gamma * lip * dd + slack) {
      return {gamma, lip};
    }
    lip *= 2.0;
  }
  throw NumericalFailure("step size search failed at " + describe(x));
}

}  // namespace

Vector ActiveSet::iterate() const
{
  if (vertices.empty()) { return {}; }
  Vector x(vertices.front().size(), 0.0);
  for (std::size_t k = 0; k < vertices.size(); ++k) { axpy(weights[k], vertices[k], x); }
  return x;
}

void ActiveSet::add(Vector v, double weight)
{
  vertices.push_back(std::move(v));
  weights.push_back(weight);
}

std::size_t ActiveSet::find(std::span<const double> v) const
{
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    if (std::equal(vertices[k].begin(), vertices[k].end(), v.begin(), v.end())) { return k; }
  }
  return vertices.size();
}

ActiveSet ActiveSet::single(Vector v)
{
  ActiveSet a;
  a.add(std::move(v), 1.0);
  return a;
}

std::size_t ShadowSet::find(std::span<const double> v) const
{
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    if (std::equal(vertices[k].begin(), vertices[k].end(), v.begin(), v.end())) { return k; }
  }
  return vertices.size();
}

void ShadowSet::add(Vector v)
{
  if (find(v) == vertices.size()) { vertices.push_back(std::move(v)); }
}

StepResult adaptive_step(const ObjectiveOracle& f, std::span<const double> x, std::span<const double> d,
                         double gamma_max, double lipschitz_estimate)
{
  if (!(gamma_max > 0.0)) { throw std::invalid_argument("adaptive_step: gamma_max must be positive"); }
  const Vector g = grad_checked(f, x);
  const double gd = dot(g, d);
  if (!(gd > 0.0)) { throw std::invalid_argument("adaptive_step: d is not a descent direction"); }
  return step_with(f, x, eval_checked(f, x), gd, d, gamma_max, lipschitz_estimate);
}

double frank_wolfe_gap(const ObjectiveOracle& f, Blmo& blmo, const BoundState& bounds, std::span<const double> x)
{
  const Vector g = grad_checked(f, x);
  const auto v = blmo.lmo(bounds, g);
  if (!v) { throw std::invalid_argument("frank_wolfe_gap: the bounded region is empty"); }
  return std::max(0.0, dot(g, x) - dot(g, *v));
}

const char* to_string(Termination t)
{
  switch (t) {
    case Termination::GapTolerance: return "gap_tolerance";
    case Termination::Cutoff: return "cutoff";
    case Termination::TreeState: return "tree_state";
    case Termination::IterationLimit: return "iteration_limit";
    case Termination::TimeLimit: return "time_limit";
    case Termination::Infeasible: return "infeasible";
  }
  return "unknown";
}

NodeSolveResult solve_node(const ObjectiveOracle& f, Blmo& blmo, const BoundState& bounds,
                           ActiveSet warm_active, ShadowSet warm_shadow, const BpcgOptions& options)
{
  NodeSolveResult res;
  const bool exact_oracle = !options.relaxed && blmo.region().kind != RegionKind::IntegerBox;

  auto offer = [&](const Vector& v) {
    if (options.relaxed && !blmo.is_integer_feasible(bounds, v)) { return; }
    const double value = f.eval(v);
    if (std::isfinite(value)) { res.incumbents.push_back({v, value}); }
  };
  auto oracle = [&](std::span<const double> d, std::optional<double> cutoff) -> std::optional<Vector> {
    ++res.lmo_calls;
    std::optional<Vector> v = options.relaxed ? blmo.relaxed_lmo(bounds, d) : blmo.lmo(bounds, d, cutoff);
    if (v && cutoff && options.relaxed && dot(d, *v) >= *cutoff) { v.reset(); }
    if (v) {
      res.lmo_vertices.push_back(*v);
      offer(*v);
    }
    return v;
  };

  ActiveSet A = std::move(warm_active);
  ShadowSet S = options.use_shadow ? std::move(warm_shadow) : ShadowSet{};
  if (A.empty()) {
    const Vector zero(bounds.lower.size(), 0.0);
    auto v = oracle(zero, std::nullopt);
    if (!v) {
      res.termination = Termination::Infeasible;
      return res;
    }
    A = ActiveSet::single(std::move(*v));
  }
  {
    double total = 0.0;
    for (double w : A.weights) { total += w; }
    for (double& w : A.weights) { w /= total; }
  }
  for (const auto& v : A.vertices) {
    const std::size_t k = S.find(v);
    if (k < S.size()) { S.vertices.erase(S.vertices.begin() + static_cast<std::ptrdiff_t>(k)); }
  }

  Vector x = A.iterate();
  double fx = eval_checked(f, x);
  Vector g = grad_checked(f, x);
  res.f_history.push_back(fx);

  // oracle answer for the current x
  bool exact_known = false;
  double exact_gap = 0.0;
  Vector exact_w;

  auto certify_here = [&]() -> bool {
    double c_local = std::numeric_limits<double>::infinity();
    const Vector* best = nullptr;
    for (const auto& v : A.vertices) {
      const double s = dot(g, v);
      if (s < c_local) {
        c_local = s;
        best = &v;
      }
    }
    for (const auto& v : S.vertices) {
      const double s = dot(g, v);
      if (s < c_local) {
        c_local = s;
        best = &v;
      }
    }
    auto w = oracle(g, c_local);
    const double gx = dot(g, x);
    if (w) {
      exact_gap = std::max(0.0, gx - dot(g, *w));
      exact_w = std::move(*w);
      // kept so the oracle never has to produce it again
      if (options.use_shadow) { S.add(exact_w); }
    } else {
      if (best == nullptr) { return false; }
      exact_gap = std::max(0.0, gx - c_local);
      if (exact_oracle) { exact_gap += milp::cutoff_slack(c_local); }
      exact_w = *best;
    }
    exact_known = true;
    return true;
  };

  double phi;
  if (!certify_here()) {
    res.termination = Termination::Infeasible;
    return res;
  }
  phi = exact_gap / 2.0;

  double lip = -1.0;
  auto initial_lipschitz = [&](std::span<const double> d) {
    if (lip > 0.0) { return lip; }
    const double h = 1e-3;
    Vector xs(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) { xs[j] = x[j] - h * d[j]; }
    const Vector gs = f.grad(xs);
    double num = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) { num += (g[j] - gs[j]) * (g[j] - gs[j]); }
    const double est = std::sqrt(num) / (h * norm2(d));
    return std::isfinite(est) && est > 0.0 ? est : 1.0;
  };

  auto move_to_shadow = [&](std::size_t k) {
    if (options.use_shadow) { S.add(std::move(A.vertices[k])); }
    A.vertices.erase(A.vertices.begin() + static_cast<std::ptrdiff_t>(k));
    A.weights.erase(A.weights.begin() + static_cast<std::ptrdiff_t>(k));
  };

  auto finish_step = [&]() {
    for (std::size_t k = A.size(); k-- > 0;) {
      if (A.weights[k] <= kWeightFloor && A.size() > 1) { move_to_shadow(k); }
    }
    double total = 0.0;
    for (double w : A.weights) { total += w; }
    for (double& w : A.weights) { w /= total; }
    x = A.iterate();
    fx = eval_checked(f, x);
    g = grad_checked(f, x);
    res.f_history.push_back(fx);
    exact_known = false;
  };

  auto pairwise = [&](std::size_t a, std::size_t s) -> bool {
    Vector d = A.vertices[a];
    for (std::size_t j = 0; j < d.size(); ++j) { d[j] -= A.vertices[s][j]; }
    const double gd = dot(g, d);
    const double gamma_max = A.weights[a];
    const StepResult st = step_with(f, x, fx, gd, d, gamma_max, initial_lipschitz(d));
    lip = st.lipschitz;
    const bool drop = st.gamma >= gamma_max;
    A.weights[s] += drop ? gamma_max : st.gamma;
    A.weights[a] = drop ? 0.0 : A.weights[a] - st.gamma;
    if (drop) { move_to_shadow(a); }
    finish_step();
    return drop;
  };

  auto frank_wolfe = [&](Vector w) {
    Vector d = x;
    for (std::size_t j = 0; j < d.size(); ++j) { d[j] -= w[j]; }
    const double gd = dot(g, d);
    const StepResult st = step_with(f, x, fx, gd, d, 1.0, initial_lipschitz(d));
    lip = st.lipschitz;
    const double gamma = st.gamma;
    if (gamma >= 1.0) {
      for (std::size_t k = A.size(); k-- > 0;) {
        if (A.vertices[k] != w) { move_to_shadow(k); }
      }
    }
    for (double& lw : A.weights) { lw *= (1.0 - gamma); }
    const std::size_t k = A.find(w);
    if (k < A.size()) {
      A.weights[k] += gamma;
    } else {
      const std::size_t ks = S.find(w);
      if (ks < S.size()) { S.vertices.erase(S.vertices.begin() + static_cast<std::ptrdiff_t>(ks)); }
      A.add(std::move(w), gamma);
    }
    finish_step();
  };

  auto trace = [&](StepType type) {
    if (options.record_trace) { res.trace.push_back({res.iterations, fx, phi, type, res.lmo_calls}); }
  };

  Termination term = Termination::GapTolerance;
  while (true) {
    if (exact_known && exact_gap <= options.eps_tol) {
      term = Termination::GapTolerance;
      break;
    }
    if (phi <= options.eps_tol) {
      if (!options.certify) {
        term = Termination::GapTolerance;
        break;
      }
      if (!exact_known) { certify_here(); }
      if (exact_gap <= options.eps_tol) {
        term = Termination::GapTolerance;
        break;
      }
      phi = exact_gap / 2.0;
    }
    if (fx - phi >= options.primal_cutoff) {
      if (!options.certify) {
        term = Termination::Cutoff;
        break;
      }
      if (!exact_known) { certify_here(); }
      if (fx - exact_gap >= options.primal_cutoff) {
        term = Termination::Cutoff;
        break;
      }
    }
    if (res.iterations >= options.max_iterations) {
      term = Termination::IterationLimit;
      break;
    }
    if (options.deadline && res.iterations % 256 == 0 && std::chrono::steady_clock::now() > *options.deadline) {
      term = Termination::TimeLimit;
      break;
    }
    if (options.tree_state_probe && res.iterations % 16 == 0 && options.tree_state_probe(fx - phi)) {
      term = Termination::TreeState;
      break;
    }
    ++res.iterations;

    std::size_t a = 0, s = 0;
    double sa = -std::numeric_limits<double>::infinity();
    double ss = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < A.size(); ++k) {
      const double sc = dot(g, A.vertices[k]);
      if (sc > sa) {
        sa = sc;
        a = k;
      }
      if (sc < ss) {
        ss = sc;
        s = k;
      }
    }
    if (a != s && sa - ss >= phi) {
      trace(pairwise(a, s) ? StepType::Drop : StepType::Pairwise);
      continue;
    }
    if (!S.empty()) {
      std::size_t best = 0;
      double sb = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < S.size(); ++k) {
        const double sc = dot(g, S.vertices[k]);
        if (sc < sb) {
          sb = sc;
          best = k;
        }
      }
      if (sa - sb >= phi) {
        A.add(std::move(S.vertices[best]), 0.0);
        S.vertices.erase(S.vertices.begin() + static_cast<std::ptrdiff_t>(best));
        pairwise(a, A.size() - 1);
        trace(StepType::ShadowPromote);
        continue;
      }
    }
    if (!exact_known) { certify_here(); }
    if (exact_gap <= options.eps_tol) { continue; }
    const double fw_gap = dot(g, x) - dot(g, exact_w);
    if (fw_gap >= phi / options.laziness && fw_gap > 0.0) {
      frank_wolfe(exact_w);
      trace(StepType::FrankWolfe);
    } else {
      phi /= 2.0;
      trace(StepType::Halve);
    }
  }

  res.termination = term;
  if (exact_known) {
    res.certified_gap = exact_gap;
    res.gap_certified = true;
  } else if (options.certify && term != Termination::TimeLimit) {
    certify_here();
    res.certified_gap = exact_gap;
    res.gap_certified = true;
  } else {
    res.certified_gap = 2.0 * phi * options.laziness;
    res.gap_certified = false;
  }
  res.iterate = std::move(x);
  res.f_value = fx;
  res.gradient = std::move(g);
  res.active = std::move(A);
  res.shadow = std::move(S);
  return res;
}

}  // namespace hullfw
