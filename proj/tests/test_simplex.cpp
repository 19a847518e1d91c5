#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "hullfw/lp.hpp"
#include "oracles/lp_vertex_enumeration.hpp"
#include "oracles/random_models.hpp"

using namespace hullfw;
using namespace hullfw::lp;

namespace {

using oracles::random_lp;

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("single active row")
{
  LinearProgram lp;
  lp.objective = {1.0, 1.0};
  lp.rows = {{{1.0, 1.0}, Sense::GreaterEqual, 1.0}};
  lp.lower = {0.0, 0.0};
  lp.upper = {1.0, 1.0};
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_violation(lp, sol.point) <= 1e-9);
}

TEST_CASE("bound-active optimum")
{
  LinearProgram lp;
  lp.objective = {-1.0};
  lp.lower = {0.0};
  lp.upper = {3.0};
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.point[0] == 3.0);
  CHECK(sol.value == -3.0);
  CHECK(sol.is_vertex);
}

TEST_CASE("infeasible and unbounded are statuses")
{
  LinearProgram infeasible;
  infeasible.objective = {1.0, 0.0};
  infeasible.rows = {{{1.0, 1.0}, Sense::GreaterEqual, 3.0}};
  infeasible.lower = {0.0, 0.0};
  infeasible.upper = {1.0, 1.0};
  CHECK(solve_lp(infeasible).status == LpStatus::Infeasible);

  LinearProgram unbounded;
  unbounded.objective = {-1.0, 0.0};
  unbounded.rows = {{{1.0, -1.0}, Sense::LessEqual, 1.0}};
  unbounded.lower = {0.0, 0.0};
  unbounded.upper = {kInf, kInf};
  CHECK(solve_lp(unbounded).status == LpStatus::Unbounded);

  LinearProgram crossed;
  crossed.objective = {1.0};
  crossed.lower = {1.0};
  crossed.upper = {0.0};
  CHECK(solve_lp(crossed).status == LpStatus::Infeasible);
}

TEST_CASE("free variable bounded through rows")
{
  // min t s.t. t >= x - 2, t >= -x, x in [0, 4], t free
  LinearProgram lp;
  lp.objective = {0.0, 1.0};
  lp.rows = {{{-1.0, 1.0}, Sense::GreaterEqual, -2.0}, {{1.0, 1.0}, Sense::GreaterEqual, 0.0}};
  lp.lower = {0.0, -kInf};
  lp.upper = {4.0, kInf};
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(sol.point[0] == doctest::Approx(1.0));
}

TEST_CASE("dimension mismatch is an argument error")
{
  LinearProgram lp;
  lp.objective = {1.0, 1.0};
  lp.lower = {0.0};
  lp.upper = {1.0, 1.0};
  CHECK_THROWS_AS(solve_lp(lp), std::invalid_argument);
  lp.lower = {0.0, 0.0};
  lp.rows = {{{1.0}, Sense::LessEqual, 1.0}};
  CHECK_THROWS_AS(solve_lp(lp), std::invalid_argument);
}

TEST_CASE("random LPs match basis enumeration")
{
  std::mt19937_64 rng(7);
  int feasible = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const std::size_t m = 1 + trial % 5;
    const LinearProgram lp = random_lp(rng, n, m);
    const auto oracle = oracles::enumerate_lp_vertices(lp);
    const auto sol = solve_lp(lp);
    CAPTURE(trial);
    if (!oracle.feasible) {
      CHECK(sol.status == LpStatus::Infeasible);
      continue;
    }
    ++feasible;
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(std::abs(sol.value - oracle.value) <= 1e-7 * (1.0 + std::abs(oracle.value)));
    CHECK(max_violation(lp, sol.point) <= kFeasibilityTol);
    CHECK(std::abs(sol.value - dot(lp.objective, sol.point)) <= 1e-9 * (1.0 + std::abs(sol.value)));
  }
  CHECK(feasible > 30);
}

TEST_CASE("weak duality spot check against feasible samples")
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const LinearProgram lp = random_lp(rng, 4, 3);
    const auto sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal) { continue; }
    for (int s = 0; s < 200; ++s) {
      Vector x(4);
      for (std::size_t j = 0; j < 4; ++j) { x[j] = lp.lower[j] + (lp.upper[j] - lp.lower[j]) * unit(rng); }
      if (max_violation(lp, x) > 0.0) { continue; }
      CHECK(sol.value <= dot(lp.objective, x) + 1e-9);
    }
  }
}

TEST_CASE("resolve_with_bounds")
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SUBCASE("inactive tightening keeps the value")
  {
    LinearProgram lp;
    lp.objective = {-1.0, -1.0};
    lp.rows = {{{1.0, 2.0}, Sense::LessEqual, 2.0}};
    lp.lower = {0.0, 0.0};
    lp.upper = {1.0, 1.0};
    SimplexSolver solver;
    const auto first = solver.solve(lp);
    REQUIRE(first.status == LpStatus::Optimal);
    CHECK(first.value == doctest::Approx(-1.5));
    // x1 = 1, x2 = 0.5 at optimum; a bound of 0.9 on x2 is inactive
    const Vector lo = {0.0, 0.0};
    const Vector up = {1.0, 0.9};
    const auto second = solver.resolve_with_bounds(lp, lo, up);
    CHECK(solver.last_was_warm());
    CHECK(second.value == doctest::Approx(first.value).epsilon(1e-12));
  }

  SUBCASE("random tighter boxes match cold solves")
  {
    int warm = 0;
    for (int trial = 0; trial < 80; ++trial) {
      const LinearProgram lp = random_lp(rng, 3 + trial % 4, 2 + trial % 3);
      SimplexSolver solver;
      const auto base = solver.solve(lp);
      if (base.status != LpStatus::Optimal) { continue; }
      Vector lo = lp.lower;
      Vector up = lp.upper;
      for (std::size_t j = 0; j < lo.size(); ++j) {
        const double a = lo[j] + (up[j] - lo[j]) * 0.5 * unit(rng);
        const double b = up[j] - (up[j] - lo[j]) * 0.5 * unit(rng);
        lo[j] = a;
        up[j] = b;
      }
      const auto warm_sol = solver.resolve_with_bounds(lp, lo, up);
      warm += solver.last_was_warm() ? 1 : 0;
      LinearProgram cold_lp = lp;
      cold_lp.lower = lo;
      cold_lp.upper = up;
      const auto cold = solve_lp(cold_lp);
      CAPTURE(trial);
      REQUIRE(warm_sol.status == cold.status);
      if (cold.status == LpStatus::Optimal) {
        CHECK(std::abs(warm_sol.value - cold.value) <= 1e-9 * (1.0 + std::abs(cold.value)));
        CHECK(warm_sol.value >= base.value - 1e-9);
        CHECK(max_violation(cold_lp, warm_sol.point) <= kFeasibilityTol);
      }
    }
    CHECK(warm > 0);
  }
}

TEST_CASE("identical inputs give identical bases")
{
  std::mt19937_64 rng(5);
  const LinearProgram lp = random_lp(rng, 5, 4);
  SimplexSolver a;
  SimplexSolver b;
  const auto sa = a.solve(lp);
  const auto sb = b.solve(lp);
  CHECK(sa.status == sb.status);
  CHECK(a.basis() == b.basis());
  CHECK(sa.point == sb.point);
}

TEST_CASE("degenerate program terminates")
{
  // many redundant rows through the same vertex
  LinearProgram lp;
  const std::size_t n = 4;
  lp.objective = {-1.0, -1.0, -1.0, -1.0};
  lp.lower.assign(n, 0.0);
  lp.upper.assign(n, 10.0);
  for (int k = 1; k <= 12; ++k) {
    Row row;
    row.coeffs = {1.0 * k, 1.0, 1.0 / k, 2.0};
    row.sense = Sense::LessEqual;
    row.rhs = 0.0;
    lp.rows.push_back(row);
  }
  lp.rows.push_back({{1.0, 1.0, 1.0, 1.0}, Sense::LessEqual, 1.0});
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  const auto oracle = oracles::enumerate_lp_vertices(lp);
  CHECK(sol.value == doctest::Approx(oracle.value));
}

TEST_CASE("resolve with a new objective matches cold solves")
{
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int warm = 0;
  for (int trial = 0; trial < 60; ++trial) {
    LinearProgram lp = random_lp(rng, 3 + trial % 4, 2 + trial % 4);
    SimplexSolver solver;
    if (solver.solve(lp).status != LpStatus::Optimal) { continue; }
    for (int k = 0; k < 5; ++k) {
      for (double& c : lp.objective) { c = normal(rng); }
      if (k % 2 == 1) {
        for (std::size_t j = 0; j < lp.dimension(); ++j) {
          lp.upper[j] = std::max(lp.lower[j], lp.upper[j] - 0.3 * unit(rng));
        }
      }
      const auto warm_sol = solver.resolve(lp);
      warm += solver.last_was_warm() ? 1 : 0;
      const auto cold = solve_lp(lp);
      CAPTURE(trial);
      REQUIRE(warm_sol.status == cold.status);
      if (cold.status != LpStatus::Optimal) { break; }
      CHECK(std::abs(warm_sol.value - cold.value) <= 1e-9 * (1.0 + std::abs(cold.value)));
    }
  }
  CHECK(warm > 50);
}
