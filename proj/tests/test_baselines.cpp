#include <cmath>
#include <random>

#include "doctest.h"
#include "hullfw/baselines.hpp"
#include "oracles/brute_force.hpp"

using namespace hullfw;

namespace {

ProblemInstance quadratic_instance(const Matrix& q, const Vector& c, FeasibleRegion region)
{
  ProblemInstance inst;
  inst.name = "quadratic";
  inst.family = "custom_quadratic";
  inst.objective = std::make_shared<QuadraticObjective>(q, c);
  inst.region = std::move(region);
  return inst;
}

std::vector<ProblemInstance> fixtures()
{
  return {make_portfolio(6, 0.5, 11),
          make_portfolio(5, 1.0, 21),
          make_sparse_regression(10, 4, 2, 12),
          make_poisson_regression(12, 3, 2, 13),
          make_logistic_regression(12, 3, 1, 14),
          make_tcmp(3, 0.3, 0.05, Vector(3, 0.2), 15)};
}

Vector sample_in_box(const BoundState& b, std::mt19937_64& rng)
{
  Vector x(b.lower.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    x[j] = std::uniform_real_distribution<double>(b.lower[j], b.upper[j])(rng);
  }
  return x;
}

void check_sound(const SolveOutcome& out, double optimum, double tol)
{
  CHECK(out.status == SolveStatus::Optimal);
  CHECK(std::abs(out.primal - optimum) <= tol);
  for (const auto& [lo, hi] : out.bound_history) {
    CHECK(lo <= optimum + 1e-7);
    CHECK(hi >= optimum - 1e-9);
  }
  for (std::size_t t = 1; t < out.bound_history.size(); ++t) {
    CHECK(out.bound_history[t].first >= out.bound_history[t - 1].first);
    CHECK(out.bound_history[t].second <= out.bound_history[t - 1].second);
  }
}

}  // namespace

TEST_CASE("gradient cuts underestimate every generated objective")
{
  std::mt19937_64 rng(3);
  for (const auto& inst : fixtures()) {
    const ObjectiveOracle& f = *inst.objective;
    const BoundState box = inst.global_bounds();
    for (int trial = 0; trial < 40; ++trial) {
      const Vector x = sample_in_box(box, rng);
      const OaCut cut = gradient_cut(f, x);
      CHECK(cut.at(x) == doctest::Approx(f.eval(x)).epsilon(1e-12));
      const Vector y = sample_in_box(box, rng);
      const double fy = f.eval(y);
      CHECK(fy >= cut.at(y) - 1e-9 * (1.0 + std::abs(fy)));
    }
  }
}

TEST_CASE("outer approximation of a linear objective closes in one round")
{
  const Matrix zero(3, 3);
  const Vector c{-1.0, -2.0, 0.5};
  const ProblemInstance inst =
      quadratic_instance(zero, c, make_budget({1.0, 2.0, 1.0}, 3.0, Vector(3, 0.0), Vector(3, 2.0), {0, 1, 2}));
  const oracles::BruteForce brute = oracles::brute_force(inst, inst.global_bounds());
  const SolveOutcome out = solve_oa(inst, 1e-6, 50);
  CHECK(out.status == SolveStatus::Optimal);
  CHECK(out.nodes_processed == 1);
  CHECK(out.primal == doctest::Approx(brute.value).epsilon(1e-12));
}

TEST_CASE("outer approximation of a strictly convex quadratic over the unit square")
{
  Matrix q(2, 2);
  q(0, 0) = 2.0;
  q(1, 1) = 1.0;
  q(0, 1) = q(1, 0) = 0.5;
  const Vector c{-2.5, -0.4};
  const ProblemInstance inst = quadratic_instance(q, c, make_integer_box({0.0, 0.0}, {1.0, 1.0}, {0, 1}));
  double best = std::numeric_limits<double>::infinity();
  for (double a : {0.0, 1.0}) {
    for (double b : {0.0, 1.0}) { best = std::min(best, inst.objective->eval(std::vector<double>{a, b})); }
  }
  OaState state;
  const SolveOutcome out = solve_oa(inst, 1e-8, 50, {}, &state);
  check_sound(out, best, 1e-8);
  CHECK(state.epigraph_var == 2);
  REQUIRE(state.incumbent.has_value());
  CHECK(inst.objective->eval(*state.incumbent) == out.primal);
}

TEST_CASE("outer approximation agrees with enumeration on the fixtures")
{
  for (const auto& inst : fixtures()) {
    CAPTURE(inst.name);
    const oracles::BruteForce brute = oracles::brute_force(inst, inst.global_bounds());
    REQUIRE(brute.feasible);
    OaState state;
    const SolveOutcome out = solve_oa(inst, 1e-6, 200, {}, &state);
    check_sound(out, brute.value, 1e-5);
    // every cut stays below f at the enumerated optimum
    const double f_star = inst.objective->eval(brute.point);
    for (const auto& cut : state.cuts) { CHECK(cut.at(brute.point) <= f_star + 1e-9 * (1.0 + std::abs(f_star))); }
    REQUIRE(out.incumbent.has_value());
    Blmo blmo(inst.region);
    CHECK(blmo.is_integer_feasible(inst.global_bounds(), *out.incumbent));
  }
}

TEST_CASE("outer approximation stops at the round limit with valid bounds")
{
  const ProblemInstance inst = make_portfolio(6, 0.5, 11);
  const oracles::BruteForce brute = oracles::brute_force(inst, inst.global_bounds());
  const SolveOutcome out = solve_oa(inst, 1e-6, 1);
  CHECK(out.status == SolveStatus::GapLimit);
  CHECK(out.nodes_processed == 1);
  CHECK(out.dual <= brute.value + 1e-7);
  CHECK(out.primal >= brute.value - 1e-9);
  CHECK_THROWS_AS(solve_oa(inst, 0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(solve_oa(inst, 1e-6, 0), std::invalid_argument);
}

TEST_CASE("NLP branch-and-bound closes an integral root in one node")
{
  Matrix eye(2, 2);
  eye(0, 0) = eye(1, 1) = 1.0;
  // (x - 1)^2 + (y - 2)^2 up to a constant
  const ProblemInstance inst = quadratic_instance(eye, {-2.0, -4.0}, make_integer_box({0.0, 0.0}, {3.0, 3.0}, {0, 1}));
  const SolveOutcome out = solve_nlp_bnb(inst, 1e-6);
  CHECK(out.status == SolveStatus::Optimal);
  CHECK(out.nodes_processed == 1);
  CHECK(out.primal == doctest::Approx(-5.0).epsilon(1e-12));
  REQUIRE(out.incumbent.has_value());
  CHECK(*out.incumbent == Vector{1.0, 2.0});
}

TEST_CASE("NLP branch-and-bound agrees with enumeration and the hull tree")
{
  for (const auto& inst : fixtures()) {
    CAPTURE(inst.name);
    const oracles::BruteForce brute = oracles::brute_force(inst, inst.global_bounds());
    REQUIRE(brute.feasible);
    const SolveOutcome out = solve_nlp_bnb(inst, 1e-6);
    check_sound(out, brute.value, 1e-5);
    SolverConfig c;
    c.rel_gap = 0.0;
    const SolveOutcome tree = solve(inst, c);
    CHECK(std::abs(tree.primal - out.primal) <= 1e-5);
    REQUIRE(out.incumbent.has_value());
    Blmo blmo(inst.region);
    CHECK(blmo.is_integer_feasible(inst.global_bounds(), *out.incumbent));
    CHECK(out.log.header.solver == "nlp-bnb");
    CHECK(out.log.summary.nodes == out.nodes_processed);
  }
}

TEST_CASE("NLP branch-and-bound resumes iteration-capped leaves")
{
  const ProblemInstance inst = make_tcmp(4, 0.1, 0.02, {0.0, 0.1, 0.2, 0.3}, 16);
  const oracles::BruteForce brute = oracles::brute_force(inst, inst.global_bounds());
  const SolveOutcome out = solve_nlp_bnb(inst, 1e-6);
  CHECK(out.status == SolveStatus::Optimal);
  CHECK(std::abs(out.primal - brute.value) <= 1e-5);
  CHECK(out.dual <= brute.value + 1e-9);
}

TEST_CASE("baselines report infeasibility and limits")
{
  Matrix eye(2, 2);
  eye(0, 0) = eye(1, 1) = 1.0;
  milp::MilpModel m;
  m.base.objective = {0.0, 0.0};
  m.base.lower = {0.0, 0.0};
  m.base.upper = {1.0, 1.0};
  m.base.rows.push_back({{2.0, 2.0}, lp::Sense::Equal, 1.0});
  m.integer_indices = {0, 1};
  const ProblemInstance bad = quadratic_instance(eye, {0.0, 0.0}, make_generic(m));
  CHECK(solve_oa(bad, 1e-6, 10).status == SolveStatus::Infeasible);
  CHECK(solve_nlp_bnb(bad, 1e-6).status == SolveStatus::Infeasible);

  const ProblemInstance inst = make_portfolio(12, 1.0, 5);
  BaselineLimits limits;
  limits.node_limit = 2;
  const SolveOutcome out = solve_nlp_bnb(inst, 1e-6, limits);
  CHECK(out.nodes_processed <= 2);
  if (out.status != SolveStatus::Optimal) { CHECK(out.status == SolveStatus::NodeLimit); }
  CHECK(out.dual <= out.primal);
  CHECK_THROWS_AS(solve_nlp_bnb(inst, -1.0), std::invalid_argument);
}
