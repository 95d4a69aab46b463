// Cauchy-Schlömilch and Liouville transformations, self-inverse maps and
// the mother → daughter density construction.
//
// Integrals are taken over (0, ∞) in a logarithmic coordinate centred on
// the point where the transformed argument vanishes, so the peak is
// resolved for any (a, b). Functions f with kinks or jumps can pass the
// values y at which f(y²) (or f(shift + y)) changes character; they become
// quadrature breakpoints.

#ifndef GLMIX_TRANSFORMS_HPP
#define GLMIX_TRANSFORMS_HPP

#include <utility>
#include <vector>

#include "glmix/numeric.hpp"
#include "glmix/scalar_density.hpp"

namespace glmix {

enum class SelfInverseKind { kReciprocal, kLogistic };

/// Decreasing involution on (0, ∞): s(x) = b/x, or the logistic
/// s(x) = -a^{-1} log(1 - e^{-ax}).
class SelfInverseMap {
 public:
  SelfInverseMap(SelfInverseKind kind, double parameter);
  static SelfInverseMap reciprocal(double b) { return {SelfInverseKind::kReciprocal, b}; }
  static SelfInverseMap logistic(double a) { return {SelfInverseKind::kLogistic, a}; }

  SelfInverseKind kind() const { return kind_; }
  double parameter() const { return parameter_; }

  double operator()(double x) const;
  /// x - s(x), the map t of the transformation.
  double difference(double x) const;
  /// Inverse of difference(): the x > 0 with x - s(x) = y.
  double difference_inverse(double y) const;

 private:
  SelfInverseKind kind_;
  double parameter_;
};

/// ∫_0^∞ f{(ax - b/x)²} dx. Equals (1/a) ∫_0^∞ f(y²) dy.
QuadResult cs_identity_lhs(const Integrand& f, double a, double b, double tol,
                           const std::vector<double>& y_breaks = {});

/// ∫_0^∞ f(y²) dy.
QuadResult square_argument_integral(const Integrand& f, double tol,
                                    const std::vector<double>& y_breaks = {});

/// ∫_0^∞ f[{x - s(x)}²] dx. Equals ∫_0^∞ f(y²) dy.
QuadResult gen_cs_identity_lhs(const Integrand& f, const SelfInverseMap& s, double tol,
                               const std::vector<double>& y_breaks = {});

/// (∫_0^∞ f(ax + b/x) x^{-1/2} dx,  a^{-1/2} ∫_0^∞ f{2(ab)^{1/2} + y} y^{-1/2} dy).
/// y_breaks are offsets past the shift 2(ab)^{1/2}.
std::pair<QuadResult, QuadResult> liouville_identity_pair(const Integrand& f, double a, double b,
                                                          double tol,
                                                          const std::vector<double>& y_breaks = {});

/// g(x) = a f(|ax - b/x|) on (0, ∞). Throws std::invalid_argument unless f
/// lives on (0, ∞), is flagged normalized and integrates to 1 within 1e-8.
ScalarDensity daughter_density(const ScalarDensity& f, double a, double b);

/// Same construction with an arbitrary normalizer; used to exhibit the
/// effect of the factor 2a.
ScalarDensity daughter_density_scaled(const ScalarDensity& f, double a, double b,
                                      double normalizer);

enum class PiKind { kT2, kLogistic };

/// Π_T(y) = {y + (4b + y²)^{1/2}}/2 and Π_L(y) = a^{-1} log(1 + e^{ay}).
double pi_map(PiKind kind, double param, double y);
/// t_T(x) = x - b/x and t_L(x) = a^{-1} log(e^{ax} - 1), x > 0.
double pi_map_inverse(PiKind kind, double param, double x);

}  // namespace glmix

#endif  // GLMIX_TRANSFORMS_HPP
