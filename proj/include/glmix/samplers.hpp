// Inverse-CDF and Khintchine samplers, Kolmogorov-Smirnov distance, CSV
// export.
//
// Every draw is a pure function of (seed, method, density), so equal inputs
// give bit-identical batches.
#ifndef GLMIX_SAMPLERS_HPP
#define GLMIX_SAMPLERS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "glmix/scalar_density.hpp"

namespace glmix {

struct SampleBatch {
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string method;
};

/// Quantile function of a normalized density: `nodes` probabilities spaced
/// evenly in logit(p) over [1e-7, 1 - 1e-7], quantiles found against a
/// quadrature CDF and joined by monotone cubic (PCHIP) interpolation.
/// Probabilities outside the table are resolved by bisection on the CDF.
class QuantileTable {
 public:
  static QuantileTable build(const ScalarDensity& f, std::size_t nodes = 4096);

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& quantiles() const { return quantiles_; }

  double quantile(double p) const;
  /// Quadrature CDF: dense tabulated mass plus one local integral.
  double cdf(double x) const;

  struct Impl;

 private:
  std::vector<double> grid_;
  std::vector<double> quantiles_;
  std::shared_ptr<const Impl> impl_;
};

/// n draws by inverting the CDF of f; f must be flagged normalized.
SampleBatch inverse_cdf_sample(const ScalarDensity& f, std::size_t n, std::uint64_t seed);
SampleBatch inverse_cdf_sample(const QuantileTable& table, std::size_t n, std::uint64_t seed);

/// f_Z(z) = -z f_X'(z), built from f_X.dlog_pdf. Throws
/// std::invalid_argument when f_Z is not a density to within 1e-6, which
/// means f_X is not unimodal about zero.
ScalarDensity khintchine_z_density(const ScalarDensity& fx);

/// X = Z·U with Z ~ f_Z and U ~ Uniform(0, 1) on separate streams.
SampleBatch khintchine_sample(const ScalarDensity& fx, std::size_t n, std::uint64_t seed);

/// sup_x |F_n(x) - cdf(x)|. Throws std::invalid_argument on an empty batch.
double ks_statistic(const std::vector<double>& values, const std::function<double(double)>& cdf);
double ks_statistic(const SampleBatch& batch, const std::function<double(double)>& cdf);

/// Asymptotic 1% critical value 1.628/√n.
double ks_critical_value_1pct(std::size_t n);

/// Header `value`, one draw per line with 17 significant digits. Throws
/// std::runtime_error when the file cannot be written.
void write_csv(const SampleBatch& batch, const std::string& path);

}  // namespace glmix

#endif  // GLMIX_SAMPLERS_HPP
