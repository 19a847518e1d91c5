#include <cmath>
#include <random>

#include "doctest.h"
#include "hullfw/blmo.hpp"
#include "hullfw/instance.hpp"
#include "oracles/milp_enumeration.hpp"

using namespace hullfw;

TEST_CASE("integer box closed form")
{
  Blmo box(make_integer_box({0.0, 0.0}, {3.0, 3.0}, {0, 1}));
  const BoundState b = box.region().global_bounds();
  const auto v = box.lmo(b, Vector{1.0, -2.0});
  REQUIRE(v.has_value());
  CHECK(*v == Vector{0.0, 3.0});
  // zero direction breaks toward the lower bound
  CHECK(*box.lmo(b, Vector{0.0, 0.0}) == Vector{0.0, 0.0});
  CHECK(*box.relaxed_lmo(b, Vector{1.0, -2.0}) == Vector{0.0, 3.0});
  CHECK(box.calls() == 2);
  // cutoff: the best value is -6
  CHECK_FALSE(box.lmo(b, Vector{1.0, -2.0}, -6.0).has_value());
  CHECK(box.lmo(b, Vector{1.0, -2.0}, -5.9).has_value());
}

TEST_CASE("budget region ties break toward the lower index")
{
  Blmo budget(make_budget({1.0, 1.0}, 1.0, {0.0, 0.0}, {1.0, 1.0}, {0, 1}));
  const BoundState b = budget.region().global_bounds();
  const auto v = budget.lmo(b, Vector{-1.0, -1.0});
  REQUIRE(v.has_value());
  CHECK(*v == Vector{1.0, 0.0});
  const auto oracle = oracles::enumerate_milp(budget.region().model, {-1.0, -1.0}, b.lower, b.upper);
  CHECK(dot(*v, Vector{-1.0, -1.0}) == oracle.value);
}

TEST_CASE("relaxed budget is a fractional knapsack")
{
  Blmo budget(make_budget({1.0, 1.0}, 1.5, {0.0, 0.0}, {1.0, 1.0}, {0, 1}));
  const BoundState b = budget.region().global_bounds();
  const auto v = budget.relaxed_lmo(b, Vector{-2.0, -1.0});
  REQUIRE(v.has_value());
  CHECK((*v)[0] == doctest::Approx(1.0));
  CHECK((*v)[1] == doctest::Approx(0.5));
  const auto vi = budget.lmo(b, Vector{-2.0, -1.0});
  REQUIRE(vi.has_value());
  CHECK(*vi == Vector{1.0, 0.0});
}

TEST_CASE("crossed or empty bounds are infeasible")
{
  Blmo box(make_integer_box({0.0}, {2.0}, {0}));
  BoundState crossed{{2.0}, {1.0}};
  CHECK_FALSE(box.lmo(crossed, Vector{1.0}).has_value());
  CHECK_FALSE(box.relaxed_lmo(crossed, Vector{1.0}).has_value());

  Blmo budget(make_budget({1.0, 1.0}, 1.0, {0.0, 0.0}, {2.0, 2.0}, {0, 1}));
  BoundState b = budget.region().global_bounds();
  b.lower = {1.0, 1.0};
  CHECK_FALSE(budget.lmo(b, Vector{1.0, 1.0}).has_value());
  CHECK_FALSE(budget.relaxed_lmo(b, Vector{1.0, 1.0}).has_value());
}

TEST_CASE("integer feasibility test")
{
  Blmo box(make_integer_box({0.0, 0.0}, {3.0, 3.0}, {0, 1}));
  const BoundState b = box.region().global_bounds();
  const Vector v1 = *box.lmo(b, Vector{1.0, -1.0});
  const Vector v2 = *box.lmo(b, Vector{-1.0, -1.0});
  CHECK(box.is_integer_feasible(b, v1));
  CHECK(box.is_integer_feasible(b, v2));
  CHECK_FALSE(box.is_integer_feasible(b, Vector{1.5, 3.0}));
  CHECK_FALSE(box.is_integer_feasible(b, Vector{4.0, 0.0}));

  // TCMP point with z = 1 and a positive slack violates the indicator
  const ProblemInstance t = make_tcmp(2, 0.5, 0.1, {0.5, 0.5}, 3);
  Blmo tb(t.region);
  // (x, z, s) with x_0 = 1 so s_0 >= 0.5 is required by the slack rows
  const Vector bad = {1.0, 0.0, 1.0, 0.0, 0.5, 0.0};
  CHECK_FALSE(tb.is_integer_feasible(t.global_bounds(), bad));
  const Vector good = {1.0, 0.0, 0.0, 0.0, 0.5, 0.0};
  CHECK(tb.is_integer_feasible(t.global_bounds(), good));
}

TEST_CASE("lmo properties on random small regions")
{
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 4;
    Vector costs(n);
    for (double& c : costs) { c = 1.0 + unit(rng); }
    std::vector<std::size_t> ints;
    for (std::size_t j = 0; j < n; ++j) { ints.push_back(j); }
    const FeasibleRegion region = make_budget(costs, 2.0 + 3.0 * unit(rng), Vector(n, 0.0), Vector(n, 2.0), ints);
    Blmo oracle(region);
    Vector d(n);
    for (double& v : d) { v = normal(rng); }
    BoundState b = region.global_bounds();
    const auto v = oracle.lmo(b, d);
    REQUIRE(v.has_value());
    CHECK(oracle.is_integer_feasible(b, *v));
    const auto enumerated = oracles::enumerate_milp(region.model, d, b.lower, b.upper);
    CHECK(dot(d, *v) == doctest::Approx(enumerated.value).epsilon(1e-12));
    for (const auto& x : enumerated.feasible_integer_parts) { CHECK(dot(d, *v) <= dot(d, x) + 1e-12); }

    const auto r = oracle.relaxed_lmo(b, d);
    REQUIRE(r.has_value());
    CHECK(dot(d, *r) <= dot(d, *v) + 1e-9);

    const std::size_t j = rng() % n;
    b.upper[j] = 1.0;
    const auto w = oracle.lmo(b, d);
    REQUIRE(w.has_value());
    CHECK(dot(d, *w) >= dot(d, *v) - 1e-12);
  }
}
