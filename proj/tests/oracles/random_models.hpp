#pragma once

// Seeded random models shared by the unit tests and the acceptance run.

#include <cmath>
#include <random>

#include "hullfw/milp.hpp"
#include "hullfw/objective.hpp"

namespace oracles {

/// Convex quadratic x'Qx + <c, x>, Q = B'B/n + shift I, minimizer near
/// center + spread * N(0, 1) per coordinate.
inline hullfw::QuadraticObjective random_quadratic(std::mt19937_64& rng, std::size_t n, double shift, double center,
                                                   double spread = 1.0)
{
  using namespace hullfw;
  std::normal_distribution<double> normal;
  Matrix b(n, n);
  for (double& v : b.data) { v = normal(rng); }
  Matrix q(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) { s += b(k, i) * b(k, j); }
      q(i, j) = s / static_cast<double>(n) + (i == j ? shift : 0.0);
    }
  }
  Vector target(n);
  for (double& v : target) { v = center + spread * normal(rng); }
  Vector c = matvec(q, target);
  for (double& v : c) { v *= -2.0; }
  return QuadraticObjective(q, c);
}

// smallest eigenvalue of 2Q by power iteration on s I - Q, shrunk slightly
inline double strong_convexity(const hullfw::QuadraticObjective& f)
{
  using namespace hullfw;
  const Matrix& q = f.q();
  const std::size_t n = q.rows;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j) { r += std::abs(q(i, j)); }
    s = std::max(s, r);
  }
  Vector v(n, 1.0);
  double lam = 0.0;
  for (int it = 0; it < 5000; ++it) {
    Vector w = matvec(q, v);
    for (std::size_t i = 0; i < n; ++i) { w[i] = s * v[i] - w[i]; }
    lam = norm2(w) / norm2(v);
    const double nw = norm2(w);
    for (std::size_t i = 0; i < n; ++i) { v[i] = w[i] / nw; }
  }
  return 2.0 * (s - lam) * (1.0 - 1e-6);
}

struct RandomMilp
{
  hullfw::milp::MilpModel model;
  hullfw::Vector objective;
};

/// Small feasible-leaning MILP with 2..10 integer variables.
inline RandomMilp random_milp(std::mt19937_64& rng)
{
  using namespace hullfw;
  using namespace hullfw::milp;
  using lp::Row;
  using lp::Sense;
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick_ints(2, 10);
  const std::size_t n_int = static_cast<std::size_t>(pick_ints(rng));
  const std::size_t n_cont = static_cast<std::size_t>(rng() % 3);
  const std::size_t n = n_int + n_cont;
  // keep the enumeration below ~20k points
  const int span = n_int <= 5 ? 4 : (n_int <= 7 ? 2 : 1);

  RandomMilp r;
  MilpModel& m = r.model;
  m.base.objective.assign(n, 0.0);
  m.base.lower.assign(n, 0.0);
  m.base.upper.assign(n, 0.0);
  for (std::size_t j = 0; j < n_int; ++j) {
    m.integer_indices.push_back(j);
    m.base.upper[j] = static_cast<double>(1 + rng() % span);
  }
  for (std::size_t j = n_int; j < n; ++j) { m.base.upper[j] = 1.0 + 2.0 * unit(rng); }

  Vector probe(n);
  for (std::size_t j = 0; j < n; ++j) {
    probe[j] = j < n_int ? std::floor(unit(rng) * (m.base.upper[j] + 1.0)) : unit(rng) * m.base.upper[j];
  }
  const std::size_t n_rows = 1 + rng() % 4;
  for (std::size_t i = 0; i < n_rows; ++i) {
    Row row;
    row.coeffs.resize(n);
    for (double& a : row.coeffs) { a = normal(rng); }
    row.sense = unit(rng) < 0.7 ? Sense::LessEqual : Sense::GreaterEqual;
    const double act = dot(row.coeffs, probe);
    row.rhs = row.sense == Sense::LessEqual ? act + 0.5 * unit(rng) : act - 0.5 * unit(rng);
    m.base.rows.push_back(row);
  }
  // indicator: first integer var (made binary) forces a continuous var down
  if (n_cont > 0 && unit(rng) < 0.6) {
    m.base.upper[0] = 1.0;
    IndicatorRow ind;
    ind.binary = 0;
    ind.row.coeffs.assign(n, 0.0);
    ind.row.coeffs[n_int] = 1.0;
    ind.row.sense = Sense::LessEqual;
    ind.row.rhs = 0.3 * unit(rng);
    m.indicators.push_back(ind);
  }
  r.objective.resize(n);
  for (double& c : r.objective) { c = normal(rng); }
  return r;
}

/// LP over a random box with m random rows; most draws are feasible.
inline hullfw::lp::LinearProgram random_lp(std::mt19937_64& rng, std::size_t n, std::size_t m)
{
  using namespace hullfw;
  using namespace hullfw::lp;
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  LinearProgram lp;
  lp.objective.resize(n);
  for (double& c : lp.objective) { c = normal(rng); }
  lp.lower.assign(n, 0.0);
  lp.upper.resize(n);
  for (double& u : lp.upper) { u = 1.0 + 3.0 * unit(rng); }
  for (std::size_t i = 0; i < m; ++i) {
    Row row;
    row.coeffs.resize(n);
    for (double& a : row.coeffs) { a = normal(rng); }
    const double pick = unit(rng);
    row.sense = pick < 0.6 ? Sense::LessEqual : (pick < 0.9 ? Sense::GreaterEqual : Sense::Equal);
    // rhs relative to a random box point keeps most instances feasible
    Vector probe(n);
    for (std::size_t j = 0; j < n; ++j) { probe[j] = lp.upper[j] * unit(rng); }
    const double act = dot(row.coeffs, probe);
    row.rhs = row.sense == Sense::LessEqual ? act + unit(rng)
              : row.sense == Sense::GreaterEqual ? act - unit(rng)
                                                 : act;
    lp.rows.push_back(row);
  }
  return lp;
}

}  // namespace oracles
