// Densities of sums: Cauchy and inverse-Gaussian closure, and the ratio
// sums of correlated Gaussians that come out exactly standard Cauchy.
#ifndef GLMIX_CONVOLUTIONS_HPP
#define GLMIX_CONVOLUTIONS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "glmix/record.hpp"
#include "glmix/scalar_density.hpp"

namespace glmix {

struct WeightVector {
  std::vector<double> weights;
};

/// Throws std::invalid_argument unless every weight is ≥ 0 and one is > 0;
/// with `unit_sum`, the weights must also add to 1 within 1e-12.
void validate(const WeightVector& w, bool unit_sum);

/// ∫ f(x) g(z - x) dx over the overlap of the supports. When both supports
/// are bounded below the overlap is split in half and each end is integrated
/// in a log coordinate, which resolves spikes at the support edges.
/// Both densities must be flagged normalized.
QuadResult convolve_pdf(const ScalarDensity& f, const ScalarDensity& g, double z, double tol);

/// f ∗ g as a density; every evaluation is one convolve_pdf quadrature.
ScalarDensity convolution_density(const ScalarDensity& f, const ScalarDensity& g, double tol);

/// w1 C1 + w2 C2 against C(0, w1 + w2) on z_grid. The record carries the
/// worst grid point; lhs/rhs are the convolution and the closed form there.
VerificationRecord verify_cauchy_sum(double w1, double w2, const std::vector<double>& z_grid,
                                     double tol);
/// Three summands through two pairwise convolutions.
VerificationRecord verify_cauchy_sum3(double w1, double w2, double w3,
                                      const std::vector<double>& z_grid, double tol);
/// ∫ cos(tz) (C(0,w1) ∗ C(0,w2))(z) dz against e^{-(w1+w2)|t|}. The integral
/// is summed half-period by half-period and accelerated with Wynn's epsilon.
VerificationRecord verify_cauchy_characteristic(double w1, double w2, double t, double tol);

/// X_i with mean α t_i and shape α t_i². The sum is compared with mean
/// α(t1 + t2) and shape α(t1 + t2)²; the notes carry the residual against
/// shape α(t1² + t2²).
VerificationRecord verify_invgauss_sum(double alpha, double t1, double t2,
                                       const std::vector<double>& z_grid, double tol);
/// max over z_grid of |convolution - IG(α(t1+t2), α(t1²+t2²)) pdf|.
double invgauss_printed_shape_residual(double alpha, double t1, double t2,
                                       const std::vector<double>& z_grid, double tol);

struct KsRecord {
  double statistic = 0.0;
  double critical = 0.0;  ///< 1.628/√n
  bool pass = false;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// Z = Σ w_j X_j/Y_j with X, Y independent N(0, Σ), against the standard
/// Cauchy. Throws std::invalid_argument when Σ is not positive definite or
/// the weights do not match it.
KsRecord simulate_pillai_meng(const Eigen::MatrixXd& covariance, const WeightVector& weights,
                              std::size_t n, std::uint64_t seed);

/// Limit of a sequence of partial sums by Wynn's epsilon algorithm.
double wynn_epsilon(const std::vector<double>& partial_sums);

}  // namespace glmix

#endif  // GLMIX_CONVOLUTIONS_HPP
