#include <cmath>
#include <random>

#include "doctest.h"
#include "hullfw/milp.hpp"
#include "oracles/milp_enumeration.hpp"
#include "oracles/random_models.hpp"

using namespace hullfw;
using namespace hullfw::milp;
using lp::Row;
using lp::Sense;

using oracles::random_milp;
using oracles::RandomMilp;

TEST_CASE("covering row over a small grid")
{
  MilpModel m;
  m.base.objective = {0.0, 0.0};
  m.base.rows = {{{1.0, 1.0}, Sense::GreaterEqual, 1.5}};
  m.base.lower = {0.0, 0.0};
  m.base.upper = {2.0, 2.0};
  m.integer_indices = {0, 1};
  const Vector c = {1.0, 1.0};
  const auto sol = solve_milp(m, c, m.base.lower, m.base.upper);
  REQUIRE(sol.status == MilpStatus::Optimal);
  CHECK(sol.value == doctest::Approx(2.0));
  const auto oracle = oracles::enumerate_milp(m, c, m.base.lower, m.base.upper);
  CHECK(sol.value == doctest::Approx(oracle.value));
}

TEST_CASE("constant objective returns a feasible integral point")
{
  MilpModel m;
  m.base.objective = {0.0, 0.0, 0.0};
  m.base.rows = {{{1.0, 2.0, 1.0}, Sense::GreaterEqual, 2.5}, {{1.0, -1.0, 0.0}, Sense::LessEqual, 0.5}};
  m.base.lower = {0.0, 0.0, 0.0};
  m.base.upper = {3.0, 3.0, 1.0};
  m.integer_indices = {0, 1};
  const Vector zero(3, 0.0);
  const auto sol = solve_milp(m, zero, m.base.lower, m.base.upper);
  REQUIRE(sol.status == MilpStatus::Optimal);
  CHECK(sol.value == 0.0);
  CHECK(is_feasible(m, m.base.lower, m.base.upper, sol.point));
}

TEST_CASE("indicator with binary fixed to one")
{
  // vars (x, z, s): z = 1 => s <= 0, s >= x - 0.5, minimize -x
  MilpModel m;
  m.base.objective = {0.0, 0.0, 0.0};
  m.base.rows = {{{1.0, 0.0, -1.0}, Sense::LessEqual, 0.5}};
  m.base.lower = {0.0, 0.0, 0.0};
  m.base.upper = {2.0, 1.0, 2.0};
  m.integer_indices = {1};
  m.indicators = {{1, {{0.0, 0.0, 1.0}, Sense::LessEqual, 0.0}}};
  const Vector c = {-1.0, 0.0, 0.0};
  Vector lo = m.base.lower;
  lo[1] = 1.0;
  const auto sol = solve_milp(m, c, lo, m.base.upper);
  REQUIRE(sol.status == MilpStatus::Optimal);
  CHECK(sol.point[2] <= 1e-6);
  CHECK(sol.value == doctest::Approx(-0.5));

  SUBCASE("free binary branches on the violated indicator")
  {
    // z rewarded, so the LP sets z = 1 with s > 0
    const Vector c2 = {-1.0, -0.2, 0.0};
    const auto free_sol = solve_milp(m, c2, m.base.lower, m.base.upper);
    REQUIRE(free_sol.status == MilpStatus::Optimal);
    CHECK(is_feasible(m, m.base.lower, m.base.upper, free_sol.point));
    const auto oracle = oracles::enumerate_milp(m, c2, m.base.lower, m.base.upper);
    CHECK(free_sol.value == doctest::Approx(oracle.value).epsilon(1e-9));
    CHECK(free_sol.value == doctest::Approx(-2.0));
  }
}

TEST_CASE("lp solve counter")
{
  MilpModel m;
  m.base.objective = {0.0, 0.0};
  m.base.rows = {{{1.0, -1.0}, Sense::LessEqual, 0.5}};
  m.base.lower = {0.0, 0.0};
  m.base.upper = {2.0, 1.0};
  m.integer_indices = {0};
  MilpSolver solver(m);
  CHECK(solver.count_lp_solves() == 0);

  // root LP (0.5, 0) -> children x1 <= 0 at (0, 0) and x1 >= 1 at (1, 0.5),
  // both value 0; one branching, no infeasible child
  const Vector c = {-1.0, 2.0};
  const auto sol = solver.solve(c, m.base.lower, m.base.upper);
  REQUIRE(sol.status == MilpStatus::Optimal);
  CHECK(sol.value == doctest::Approx(0.0));
  CHECK(solver.count_lp_solves() == 3);

  solver.reset_count();
  const Vector c_int = {1.0, 1.0};
  solver.solve(c_int, m.base.lower, m.base.upper);
  CHECK(solver.count_lp_solves() == 1);
}

TEST_CASE("dimension mismatch throws")
{
  MilpModel m;
  m.base.objective = {0.0, 0.0};
  m.base.lower = {0.0, 0.0};
  m.base.upper = {1.0, 1.0};
  m.integer_indices = {0, 1};
  MilpSolver solver(m);
  const Vector c = {1.0};
  CHECK_THROWS_AS(solver.solve(c, m.base.lower, m.base.upper), std::invalid_argument);
  MilpModel bad = m;
  bad.indicators = {{0, {{1.0, 0.0}, Sense::LessEqual, 0.0}}};
  bad.base.upper[0] = 2.0;
  CHECK_THROWS_AS(MilpSolver{bad}, std::invalid_argument);
}

TEST_CASE("fractional bounds are rounded inward")
{
  MilpModel m;
  m.base.objective = {0.0};
  m.base.lower = {0.0};
  m.base.upper = {5.0};
  m.integer_indices = {0};
  const Vector c = {-1.0};
  const Vector lo = {0.2};
  const Vector up = {3.7};
  const auto sol = solve_milp(m, c, lo, up);
  REQUIRE(sol.status == MilpStatus::Optimal);
  CHECK(sol.point[0] == 3.0);
  const Vector lo2 = {1.2};
  const Vector up2 = {1.8};
  CHECK(solve_milp(m, c, lo2, up2).status == MilpStatus::Infeasible);
}

TEST_CASE("random models match enumeration")
{
  std::mt19937_64 rng(2024);
  int feasible = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const RandomMilp r = random_milp(rng);
    const auto& m = r.model;
    const auto oracle = oracles::enumerate_milp(m, r.objective, m.base.lower, m.base.upper);
    MilpSolver solver(m);
    const auto sol = solver.solve(r.objective, m.base.lower, m.base.upper);
    CAPTURE(trial);
    if (!oracle.feasible) {
      CHECK(sol.status == MilpStatus::Infeasible);
      continue;
    }
    ++feasible;
    REQUIRE(sol.status == MilpStatus::Optimal);
    CHECK(std::abs(sol.value - oracle.value) <= 1e-6);
    CHECK(is_feasible(m, m.base.lower, m.base.upper, sol.point));

    // cutoff just above the optimum keeps it, cutoff at the optimum removes it
    const auto with_cutoff = solver.solve(r.objective, m.base.lower, m.base.upper, oracle.value + 1e-3);
    REQUIRE(with_cutoff.status == MilpStatus::Optimal);
    CHECK(std::abs(with_cutoff.value - oracle.value) <= 1e-6);
    const auto cut_all = solver.solve(r.objective, m.base.lower, m.base.upper, oracle.value - 1e-3);
    CHECK(cut_all.status == MilpStatus::Infeasible);

    // generic objectives make the optimum unique; pure-integer ones must then
    // coincide with the enumerated minimizer
    if (m.integer_indices.size() == m.dimension()) {
      for (std::size_t j = 0; j < m.dimension(); ++j) { CHECK(sol.point[j] == oracle.point[j]); }
    }
  }
  CHECK(feasible >= 60);
}

TEST_CASE("shrinking bounds never lowers the optimum")
{
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const RandomMilp r = random_milp(rng);
    const auto& m = r.model;
    MilpSolver solver(m);
    const auto base = solver.solve(r.objective, m.base.lower, m.base.upper);
    if (base.status != MilpStatus::Optimal) { continue; }
    Vector up = m.base.upper;
    const std::size_t j = rng() % m.integer_indices.size();
    up[j] = std::max(m.base.lower[j], up[j] - 1.0);
    const auto tighter = solver.solve(r.objective, m.base.lower, up);
    if (tighter.status == MilpStatus::Optimal) { CHECK(tighter.value >= base.value - 1e-9); }
  }
}
