// A univariate density held as its log-density on an open interval.

#ifndef GLMIX_SCALAR_DENSITY_HPP
#define GLMIX_SCALAR_DENSITY_HPP

#include <functional>
#include <string>
#include <vector>

#include "glmix/numeric.hpp"

namespace glmix {

class ScalarDensity {
 public:
  using Fn = std::function<double(double)>;

  ScalarDensity(Interval support, Fn log_pdf, bool normalized, std::string description);

  const Interval& support() const { return support_; }
  bool normalized() const { return normalized_; }
  const std::string& description() const { return description_; }

  /// -inf outside the support.
  double log_pdf(double x) const;
  double pdf(double x) const;

  /// d/dx log f. Uses the registered analytic derivative when there is one,
  /// otherwise a central difference with step max(1e-6, 1e-6·|x|), one-sided
  /// within one step of the edge of the support.
  double dlog_pdf(double x) const;
  bool has_analytic_derivative() const { return static_cast<bool>(dlog_pdf_); }

  /// Points where the density has its bulk or a kink; quadrature over the
  /// density splits there.
  const std::vector<double>& landmarks() const { return landmarks_; }

  ScalarDensity with_derivative(Fn dlog_pdf) const;
  ScalarDensity with_landmarks(std::vector<double> points) const;

 private:
  Interval support_;
  Fn log_pdf_;
  Fn dlog_pdf_;
  bool normalized_;
  std::string description_;
  std::vector<double> landmarks_;
};

/// ∫ weight(x) f(x) dx over the support, split at the landmarks. A null
/// weight means 1.
QuadResult integrate_density(const ScalarDensity& f, const Integrand& weight,
                             double abs_tol, double rel_tol);

/// ∫ f over the support.
QuadResult total_mass(const ScalarDensity& f, double abs_tol = 1e-14, double rel_tol = 1e-13);

}  // namespace glmix

#endif  // GLMIX_SCALAR_DENSITY_HPP
