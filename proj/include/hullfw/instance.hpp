#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hullfw/blmo.hpp"
#include "hullfw/objective.hpp"

namespace hullfw {

struct ProblemInstance
{
  std::string name;
  /// portfolio, sparse_reg, poisson, logistic, tcmp or custom_quadratic
  std::string family;
  std::shared_ptr<const ObjectiveOracle> objective;
  FeasibleRegion region;
  std::optional<double> known_optimum;

  std::size_t dimension() const { return region.dimension(); }
  const std::vector<std::size_t>& integer_indices() const { return region.integer_indices(); }
  BoundState global_bounds() const { return region.global_bounds(); }

  /// Dimensions agree, integer bounds are integral, lower <= upper.
  void validate() const;
};

struct PortfolioOptions
{
  double upper = 3.0;
  /// budget as a fraction of the cost of buying every asset at its upper bound
  double budget_fraction = 0.25;
  double diagonal = 0.05;
  double return_scale = 1.0;
};

/// h(x) = x'Mx - <r, x>, M = A'A/n + diagonal I, r ~ U(0,1) * return_scale,
/// c ~ U(1,2), <c, x> <= b, 0 <= x <= upper; the first
/// ceil(integer_fraction * n) variables are integral.
ProblemInstance make_portfolio(std::size_t n, double integer_fraction, std::uint64_t seed,
                               const PortfolioOptions& options = {});

struct RegressionOptions
{
  double ridge = 1e-3;
  double noise = 0.1;
};

/// Variables (beta, z) of length 2p: ||A beta - y||^2 + ridge ||beta||^2 with
/// -R z_i <= beta_i <= R z_i, sum z <= k, z binary.
ProblemInstance make_sparse_regression(std::size_t m_samples, std::size_t p_features, std::size_t k_sparsity,
                                       std::uint64_t seed, const RegressionOptions& options = {});
ProblemInstance make_poisson_regression(std::size_t m_samples, std::size_t p_features, std::size_t k_sparsity,
                                        std::uint64_t seed, const RegressionOptions& options = {});
ProblemInstance make_logistic_regression(std::size_t m_samples, std::size_t p_features,
                                         std::size_t k_sparsity, std::uint64_t seed,
                                         const RegressionOptions& options = {});

/// Variables (x, z, s) of length 3n: ||A x - y||^2 - lambda sum z + mu_r ||x||^2
/// with s_i >= x_i - tau_i, s_i >= -x_i - tau_i, s >= 0, |x| <= R and the
/// indicator z_i = 1 => s_i <= 0.
/// lambda = 0 is allowed.
ProblemInstance make_tcmp(std::size_t n, double lambda, double mu_r, const Vector& tau, std::uint64_t seed);

/// Coupling big-M used by the regression families:
/// 2 ||A'y||_inf / min_j (||a_j||^2 + ridge), clipped to [1, 100].
double coupling_radius(const Matrix& design, const Vector& response, double ridge);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix& m);

}  // namespace hullfw
