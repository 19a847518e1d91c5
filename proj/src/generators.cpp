#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "hullfw/instance.hpp"

namespace hullfw {

namespace {

Matrix gaussian_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double scale = 1.0)
{
  std::normal_distribution<double> normal;
  Matrix a(rows, cols);
  for (double& v : a.data) { v = scale * normal(rng); }
  return a;
}

// beta in [-R, R]^p, z in {0,1}^p, -R z <= beta <= R z, sum z <= k
FeasibleRegion sparse_region(std::size_t p, std::size_t k, double radius)
{
  milp::MilpModel m;
  const std::size_t n = 2 * p;
  m.base.objective.assign(n, 0.0);
  m.base.lower.assign(n, 0.0);
  m.base.upper.assign(n, 1.0);
  for (std::size_t i = 0; i < p; ++i) {
    m.base.lower[i] = -radius;
    m.base.upper[i] = radius;
    m.integer_indices.push_back(p + i);
  }
  for (std::size_t i = 0; i < p; ++i) {
    lp::Row up;
    up.coeffs.assign(n, 0.0);
    up.coeffs[i] = 1.0;
    up.coeffs[p + i] = -radius;
    up.sense = lp::Sense::LessEqual;
    m.base.rows.push_back(up);
    lp::Row down = up;
    down.coeffs[i] = -1.0;
    m.base.rows.push_back(down);
  }
  lp::Row card;
  card.coeffs.assign(n, 0.0);
  for (std::size_t i = 0; i < p; ++i) { card.coeffs[p + i] = 1.0; }
  card.rhs = static_cast<double>(k);
  m.base.rows.push_back(card);
  return make_generic(std::move(m));
}

Vector sparse_truth(std::mt19937_64& rng, std::size_t p, std::size_t k)
{
  std::vector<std::size_t> idx(p);
  for (std::size_t i = 0; i < p; ++i) { idx[i] = i; }
  std::shuffle(idx.begin(), idx.end(), rng);
  std::uniform_real_distribution<double> mag(0.5, 1.5);
  std::bernoulli_distribution sign;
  Vector beta(p, 0.0);
  for (std::size_t i = 0; i < k; ++i) { beta[idx[i]] = (sign(rng) ? 1.0 : -1.0) * mag(rng); }
  return beta;
}

void check_regression_args(std::size_t m, std::size_t p, std::size_t k, const char* who)
{
  if (m == 0 || p == 0 || k == 0) { throw std::invalid_argument(std::string(who) + ": sizes must be positive"); }
  if (k > p) { throw std::invalid_argument(std::string(who) + ": k_sparsity exceeds p_features"); }
}

}  // namespace

void ProblemInstance::validate() const
{
  if (!objective) { throw std::invalid_argument("ProblemInstance: missing objective"); }
  if (objective->dimension() != region.dimension()) {
    throw std::invalid_argument("ProblemInstance: objective dimension " + std::to_string(objective->dimension()) +
                                " differs from region dimension " + std::to_string(region.dimension()));
  }
  region.model.validate();
  validate_bounds(region, region.global_bounds());
}

double min_eigenvalue(const Matrix& m)
{
  Eigen::MatrixXd e(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) { e(i, j) = m(i, j); }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(e, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double coupling_radius(const Matrix& design, const Vector& response, double ridge)
{
  const Vector aty = matvec_transposed(design, response);
  double denom = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < design.cols; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < design.rows; ++i) { col += design(i, j) * design(i, j); }
    denom = std::min(denom, col + ridge);
  }
  const double r = denom > 0.0 ? 2.0 * norm_inf(aty) / denom : 100.0;
  return std::clamp(r, 1.0, 100.0);
}

ProblemInstance make_portfolio(std::size_t n, double integer_fraction, std::uint64_t seed,
                               const PortfolioOptions& options)
{
  if (n < 2) { throw std::invalid_argument("make_portfolio: n must be at least 2"); }
  if (!(integer_fraction > 0.0 && integer_fraction <= 1.0)) {
    throw std::invalid_argument("make_portfolio: integer_fraction must lie in (0, 1]");
  }
  std::mt19937_64 rng(seed);
  const Matrix a = gaussian_matrix(rng, n, n);
  Matrix q(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) { s += a(k, i) * a(k, j); }
      q(i, j) = s / static_cast<double>(n);
    }
    q(i, i) += options.diagonal;
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> cost(1.0, 2.0);
  Vector r(n), c(n);
  for (double& v : r) { v = options.return_scale * unit(rng); }
  for (double& v : c) { v = cost(rng); }
  double full = 0.0;
  for (double v : c) { full += v * options.upper; }
  const double budget = options.budget_fraction * full;

  const auto n_int = static_cast<std::size_t>(std::ceil(integer_fraction * static_cast<double>(n) - 1e-12));
  std::vector<std::size_t> ints;
  for (std::size_t j = 0; j < n_int; ++j) { ints.push_back(j); }

  const double mu = 2.0 * min_eigenvalue(q);
  Vector neg_r(n);
  for (std::size_t j = 0; j < n; ++j) { neg_r[j] = -r[j]; }
  auto obj = std::make_shared<QuadraticObjective>(std::move(q), std::move(neg_r));
  obj->strong_convexity_mu = std::max(0.0, mu);

  ProblemInstance inst;
  inst.name = "portfolio_n" + std::to_string(n) + "_s" + std::to_string(seed);
  inst.family = "portfolio";
  inst.objective = std::move(obj);
  inst.region = make_budget(std::move(c), budget, Vector(n, 0.0), Vector(n, options.upper), std::move(ints));
  return inst;
}

ProblemInstance make_sparse_regression(std::size_t m_samples, std::size_t p_features, std::size_t k_sparsity,
                                       std::uint64_t seed, const RegressionOptions& options)
{
  check_regression_args(m_samples, p_features, k_sparsity, "make_sparse_regression");
  std::mt19937_64 rng(seed);
  Matrix a = gaussian_matrix(rng, m_samples, p_features);
  const Vector truth = sparse_truth(rng, p_features, k_sparsity);
  Vector y = matvec(a, truth);
  std::normal_distribution<double> normal;
  for (double& v : y) { v += options.noise * normal(rng); }
  const double radius = coupling_radius(a, y, options.ridge);

  ProblemInstance inst;
  inst.name = "sparse_reg_m" + std::to_string(m_samples) + "_p" + std::to_string(p_features) + "_k" +
              std::to_string(k_sparsity) + "_s" + std::to_string(seed);
  inst.family = "sparse_reg";
  inst.objective = std::make_shared<GlmObjective>(Loss::Squared, std::move(a), std::move(y), options.ridge,
                                                  Vector(2 * p_features, 0.0));
  inst.region = sparse_region(p_features, k_sparsity, radius);
  return inst;
}

ProblemInstance make_poisson_regression(std::size_t m_samples, std::size_t p_features, std::size_t k_sparsity,
                                        std::uint64_t seed, const RegressionOptions& options)
{
  check_regression_args(m_samples, p_features, k_sparsity, "make_poisson_regression");
  std::mt19937_64 rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(p_features));
  Matrix a = gaussian_matrix(rng, m_samples, p_features, scale);
  const Vector truth = sparse_truth(rng, p_features, k_sparsity);
  const Vector eta = matvec(a, truth);
  Vector y(m_samples);
  for (std::size_t i = 0; i < m_samples; ++i) {
    std::poisson_distribution<int> counts(std::exp(eta[i]));
    y[i] = counts(rng);
  }
  // keep exp(<a_i, beta>) finite at every vertex of the coupling box
  double row_l1 = 0.0;
  for (std::size_t i = 0; i < m_samples; ++i) {
    double s = 0.0;
    for (double v : a.row(i)) { s += std::abs(v); }
    row_l1 = std::max(row_l1, s);
  }
  const double radius = std::min(coupling_radius(a, y, options.ridge), 10.0 / std::max(row_l1, 1e-12));

  ProblemInstance inst;
  inst.name = "poisson_m" + std::to_string(m_samples) + "_p" + std::to_string(p_features) + "_k" +
              std::to_string(k_sparsity) + "_s" + std::to_string(seed);
  inst.family = "poisson";
  inst.objective = std::make_shared<GlmObjective>(Loss::Poisson, std::move(a), std::move(y), options.ridge,
                                                  Vector(2 * p_features, 0.0));
  inst.region = sparse_region(p_features, k_sparsity, radius);
  return inst;
}

ProblemInstance make_logistic_regression(std::size_t m_samples, std::size_t p_features,
                                         std::size_t k_sparsity, std::uint64_t seed,
                                         const RegressionOptions& options)
{
  check_regression_args(m_samples, p_features, k_sparsity, "make_logistic_regression");
  std::mt19937_64 rng(seed);
  Matrix a = gaussian_matrix(rng, m_samples, p_features);
  const Vector truth = sparse_truth(rng, p_features, k_sparsity);
  const Vector eta = matvec(a, truth);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector y(m_samples);
  for (std::size_t i = 0; i < m_samples; ++i) {
    y[i] = unit(rng) < 1.0 / (1.0 + std::exp(-eta[i])) ? 1.0 : -1.0;
  }
  const double radius = coupling_radius(a, y, options.ridge);

  ProblemInstance inst;
  inst.name = "logistic_m" + std::to_string(m_samples) + "_p" + std::to_string(p_features) + "_k" +
              std::to_string(k_sparsity) + "_s" + std::to_string(seed);
  inst.family = "logistic";
  inst.objective = std::make_shared<GlmObjective>(Loss::Logistic, std::move(a), std::move(y), options.ridge,
                                                  Vector(2 * p_features, 0.0));
  inst.region = sparse_region(p_features, k_sparsity, radius);
  return inst;
}

ProblemInstance make_tcmp(std::size_t n, double lambda, double mu_r, const Vector& tau, std::uint64_t seed)
{
  if (n == 0) { throw std::invalid_argument("make_tcmp: n must be positive"); }
  if (!(lambda >= 0.0) || !(mu_r > 0.0)) {
    throw std::invalid_argument("make_tcmp: lambda must be nonnegative and mu_r positive");
  }
  if (tau.size() != n) { throw std::invalid_argument("make_tcmp: tau must have length n"); }
  for (double t : tau) {
    if (!(t >= 0.0)) { throw std::invalid_argument("make_tcmp: tau must be nonnegative"); }
  }
  std::mt19937_64 rng(seed);
  const std::size_t m_samples = 2 * n;
  Matrix a = gaussian_matrix(rng, m_samples, n);
  std::normal_distribution<double> normal;
  Vector truth(n);
  for (double& v : truth) { v = normal(rng); }
  Vector y = matvec(a, truth);
  for (double& v : y) { v += 0.1 * normal(rng); }
  const double radius = coupling_radius(a, y, mu_r);

  // x in [0, n), z in [n, 2n), s in [2n, 3n)
  const std::size_t dim = 3 * n;
  milp::MilpModel m;
  m.base.objective.assign(dim, 0.0);
  m.base.lower.assign(dim, 0.0);
  m.base.upper.assign(dim, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    m.base.lower[i] = -radius;
    m.base.upper[i] = radius;
    m.base.upper[2 * n + i] = radius;
    m.integer_indices.push_back(n + i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    lp::Row pos;
    pos.coeffs.assign(dim, 0.0);
    pos.coeffs[i] = 1.0;
    pos.coeffs[2 * n + i] = -1.0;
    pos.rhs = tau[i];
    m.base.rows.push_back(pos);
    lp::Row neg = pos;
    neg.coeffs[i] = -1.0;
    m.base.rows.push_back(neg);
    milp::IndicatorRow ind;
    ind.binary = n + i;
    ind.row.coeffs.assign(dim, 0.0);
    ind.row.coeffs[2 * n + i] = 1.0;
    ind.row.rhs = 0.0;
    m.indicators.push_back(ind);
  }

  Vector linear(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) { linear[n + i] = -lambda; }

  ProblemInstance inst;
  inst.name = "tcmp_n" + std::to_string(n) + "_s" + std::to_string(seed);
  inst.family = "tcmp";
  inst.objective = std::make_shared<GlmObjective>(Loss::Squared, std::move(a), std::move(y), mu_r, std::move(linear));
  inst.region = make_generic(std::move(m));
  return inst;
}

}  // namespace hullfw
