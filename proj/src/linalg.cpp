#include "hullfw/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace hullfw {

double dot(std::span<const double> a, std::span<const double> b)
{
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) { s += a[i] * b[i]; }
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a)
{
  double m = 0.0;
  for (double v : a) { m = std::max(m, std::abs(v)); }
  return m;
}

double squared_distance(std::span<const double> a, std::span<const double> b)
{
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y)
{
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) { y[i] += alpha * x[i]; }
}

Vector matvec(const Matrix& m, std::span<const double> x)
{
  assert(x.size() == m.cols);
  Vector y(m.rows, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) { y[i] = dot(m.row(i), x); }
  return y;
}

Vector matvec_transposed(const Matrix& m, std::span<const double> x)
{
  assert(x.size() == m.rows);
  Vector y(m.cols, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) { axpy(x[i], m.row(i), y); }
  return y;
}

}  // namespace hullfw
