#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "hullfw/linalg.hpp"

namespace hullfw {

/// Hölder error bound parameters: ||x - x*|| <= M (f(x) - f*)^theta.
struct Sharpness
{
  double theta = 0.5;
  double M = 1.0;
};

/// Raised when an objective or gradient evaluates to a non-finite value.
class NumericalFailure : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

class ObjectiveOracle
{
 public:
  virtual ~ObjectiveOracle() = default;

  virtual std::size_t dimension() const = 0;
  virtual double eval(std::span<const double> x) const = 0;
  virtual void gradient(std::span<const double> x, std::span<double> out) const = 0;

  Vector grad(std::span<const double> x) const
  {
    Vector g(dimension());
    gradient(x, g);
    return g;
  }

  std::optional<double> strong_convexity_mu;
  std::optional<Sharpness> sharpness;
};

/// f(x) = x'Qx + <c, x> + constant, Q symmetric.
class QuadraticObjective : public ObjectiveOracle
{
 public:
  QuadraticObjective(Matrix q, Vector c, double constant = 0.0);

  std::size_t dimension() const override { return c_.size(); }
  double eval(std::span<const double> x) const override;
  void gradient(std::span<const double> x, std::span<double> out) const override;

  const Matrix& q() const { return q_; }
  const Vector& c() const { return c_; }
  double constant() const { return constant_; }

 private:
  Matrix q_;
  Vector c_;
  double constant_;
};

enum class Loss { Squared, Poisson, Logistic };

/// Generalized linear loss on the leading block of variables,
///   f(x) = loss(A b, y) + ridge ||b||^2 + <linear, x>,  b = x[0 .. p),
/// with p = columns of A. Squared: ||A b - y||^2. Poisson:
/// sum_i exp(<a_i, b>) - y_i <a_i, b>. Logistic: sum_i log(1 + exp(-y_i <a_i, b>)).
class GlmObjective : public ObjectiveOracle
{
 public:
  GlmObjective(Loss loss, Matrix design, Vector response, double ridge, Vector linear);

  std::size_t dimension() const override { return linear_.size(); }
  double eval(std::span<const double> x) const override;
  void gradient(std::span<const double> x, std::span<double> out) const override;

  Loss loss() const { return loss_; }
  const Matrix& design() const { return design_; }
  const Vector& response() const { return response_; }
  double ridge() const { return ridge_; }
  const Vector& linear() const { return linear_; }

 private:
  Loss loss_;
  Matrix design_;
  Vector response_;
  double ridge_;
  Vector linear_;
};

std::string to_string(Loss loss);
Loss loss_from_string(const std::string& name);

}  // namespace hullfw
