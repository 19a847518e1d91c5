#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hullfw {

using Vector = std::vector<double>;

/// Dense row-major matrix, only what the generators and solvers need.
struct Matrix
{
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }

  bool operator==(const Matrix&) const = default;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);
double squared_distance(std::span<const double> a, std::span<const double> b);

// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

Vector matvec(const Matrix& m, std::span<const double> x);
Vector matvec_transposed(const Matrix& m, std::span<const double> x);

}  // namespace hullfw
