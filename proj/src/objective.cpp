#include "hullfw/objective.hpp"

#include <cmath>

namespace hullfw {

namespace {

double softplus(double t)
{
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t)
{
  if (t >= 0.0) { return 1.0 / (1.0 + std::exp(-t)); }
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

QuadraticObjective::QuadraticObjective(Matrix q, Vector c, double constant)
    : q_(std::move(q)), c_(std::move(c)), constant_(constant)
{
  if (q_.rows != c_.size() || q_.cols != c_.size()) {
    throw std::invalid_argument("QuadraticObjective: Q must be square with the length of c");
  }
  for (std::size_t i = 0; i < q_.rows; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(q_(i, j) - q_(j, i)) > 1e-12 * (1.0 + std::abs(q_(i, j)))) {
        throw std::invalid_argument("QuadraticObjective: Q is not symmetric");
      }
    }
  }
}

double QuadraticObjective::eval(std::span<const double> x) const
{
  const Vector qx = matvec(q_, x);
  return dot(x, qx) + dot(c_, x) + constant_;
}

void QuadraticObjective::gradient(std::span<const double> x, std::span<double> out) const
{
  const Vector qx = matvec(q_, x);
  for (std::size_t i = 0; i < out.size(); ++i) { out[i] = 2.0 * qx[i] + c_[i]; }
}

GlmObjective::GlmObjective(Loss loss, Matrix design, Vector response, double ridge, Vector linear)
    : loss_(loss),
      design_(std::move(design)),
      response_(std::move(response)),
      ridge_(ridge),
      linear_(std::move(linear))
{
  if (design_.rows != response_.size()) {
    throw std::invalid_argument("GlmObjective: response length differs from the number of samples");
  }
  if (design_.cols > linear_.size()) {
    throw std::invalid_argument("GlmObjective: design has more columns than the dimension");
  }
  if (ridge_ < 0.0) { throw std::invalid_argument("GlmObjective: negative ridge"); }
  if (loss_ == Loss::Poisson) {
    for (double y : response_) {
      if (y < 0.0) { throw std::invalid_argument("GlmObjective: Poisson counts must be nonnegative"); }
    }
  }
}

double GlmObjective::eval(std::span<const double> x) const
{
  const std::size_t p = design_.cols;
  const auto beta = x.first(p);
  const Vector eta = matvec(design_, beta);
  double f = 0.0;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    const double y = response_[i];
    switch (loss_) {
      case Loss::Squared: f += (eta[i] - y) * (eta[i] - y); break;
      case Loss::Poisson: f += std::exp(eta[i]) - y * eta[i]; break;
      case Loss::Logistic: f += softplus(-y * eta[i]); break;
    }
  }
  return f + ridge_ * dot(beta, beta) + dot(linear_, x);
}

void GlmObjective::gradient(std::span<const double> x, std::span<double> out) const
{
  const std::size_t p = design_.cols;
  const auto beta = x.first(p);
  Vector w = matvec(design_, beta);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double y = response_[i];
    switch (loss_) {
      case Loss::Squared: w[i] = 2.0 * (w[i] - y); break;
      case Loss::Poisson: w[i] = std::exp(w[i]) - y; break;
      case Loss::Logistic: w[i] = -y * sigmoid(-y * w[i]); break;
    }
  }
  const Vector g = matvec_transposed(design_, w);
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = linear_[j];
    if (j < p) { out[j] += g[j] + 2.0 * ridge_ * beta[j]; }
  }
}

std::string to_string(Loss loss)
{
  switch (loss) {
    case Loss::Squared: return "squared";
    case Loss::Poisson: return "poisson";
    case Loss::Logistic: return "logistic";
  }
  return "squared";
}

Loss loss_from_string(const std::string& name)
{
  if (name == "squared") { return Loss::Squared; }
  if (name == "poisson") { return Loss::Poisson; }
  if (name == "logistic") { return Loss::Logistic; }
  throw std::invalid_argument("unknown loss '" + name + "'");
}

}  // namespace hullfw
