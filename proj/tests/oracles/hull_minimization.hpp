#pragma once

// Test-only oracle: minimum of a smooth convex f over the convex hull of an
// explicit point list, by accelerated projected gradient on the weights.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace oracles {

using Vec = std::vector<double>;

/// Euclidean projection onto the probability simplex.
inline Vec project_to_simplex(Vec y)
{
  Vec u = y;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cum += u[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) { theta = t; }
  }
  for (double& v : y) { v = std::max(0.0, v - theta); }
  return y;
}

struct HullOptimum
{
  double value;
  Vec point;
  Vec weights;
};

inline HullOptimum minimize_over_hull(const std::function<double(const Vec&)>& f,
                                      const std::function<Vec(const Vec&)>& grad, const std::vector<Vec>& points,
                                      int iterations = 20000)
{
  const std::size_t m = points.size();
  const std::size_t n = points.front().size();
  auto combine = [&](const Vec& w) {
    Vec x(n, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t j = 0; j < n; ++j) { x[j] += w[k] * points[k][j]; }
    }
    return x;
  };
  auto phi = [&](const Vec& w) { return f(combine(w)); };
  auto dphi = [&](const Vec& w) {
    const Vec g = grad(combine(w));
    Vec out(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t j = 0; j < n; ++j) { out[k] += g[j] * points[k][j]; }
    }
    return out;
  };

  Vec w(m, 1.0 / static_cast<double>(m));
  Vec y = w;
  double t = 1.0;
  double lip = 1.0;
  for (int it = 0; it < iterations; ++it) {
    const Vec gy = dphi(y);
    const double fy = phi(y);
    Vec next;
    while (true) {
      Vec trial(m);
      for (std::size_t k = 0; k < m; ++k) { trial[k] = y[k] - gy[k] / lip; }
      next = project_to_simplex(trial);
      double lin = 0.0, sq = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const double d = next[k] - y[k];
        lin += gy[k] * d;
        sq += d * d;
      }
      if (phi(next) <= fy + lin + 0.5 * lip * sq + 1e-15) { break; }
      lip *= 2.0;
    }
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    for (std::size_t k = 0; k < m; ++k) { y[k] = next[k] + (t - 1.0) / tn * (next[k] - w[k]); }
    // restart keeps the sequence monotone
    if (phi(next) > phi(w)) {
      y = next;
      t = 1.0;
    } else {
      t = tn;
    }
    w = next;
  }
  const Vec x = combine(w);
  return {f(x), x, w};
}

}  // namespace oracles
