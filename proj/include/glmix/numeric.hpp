// Special functions, adaptive quadrature and alternating-series summation.
//
// Everything here is a pure function of its arguments and may be called
// concurrently.

#ifndef GLMIX_NUMERIC_HPP
#define GLMIX_NUMERIC_HPP

#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace glmix {

/// Raised when a computation cannot produce a trustworthy number
/// (NaN from an integrand, a series that never settles, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Open interval (lower, upper); either end may be infinite.
class Interval {
 public:
  Interval(double lower, double upper);

  static Interval positive_half_line() { return {0.0, kInf}; }
  static Interval real_line() { return {-kInf, kInf}; }

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  bool contains(double x) const { return x > lower_ && x < upper_; }
  bool finite() const;

 private:
  double lower_;
  double upper_;
};

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_depth = 60;
  std::size_t max_evaluations = 1'000'000;
  /// Interior points where the integrand changes character (peaks, kinks).
  /// Points outside the domain are ignored.
  std::vector<double> breakpoints;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (10/21) quadrature.
///
/// Infinite ends are mapped onto (0, 1) by x = a + t/(1-t); a doubly infinite
/// domain is split at zero (and at any breakpoints). The rule is open, so
/// integrable endpoint singularities are fine, though slow to converge.
/// A NaN or infinite integrand value throws NumericError; running out of
/// depth or evaluations returns converged == false.
QuadResult integrate(const Integrand& f, const Interval& domain,
                     const QuadOptions& options);
QuadResult integrate(const Integrand& f, const Interval& domain,
                     double abs_tol, double rel_tol);

/// ∫_0^∞ f(t) dt through t = e^u. Suits integrands with a characteristic
/// scale far from one or algebraic behaviour at zero.
QuadResult integrate_log_scale(const Integrand& f, double abs_tol,
                               double rel_tol, double scale_hint = 1.0);

// ---------------------------------------------------------------------------
// Special functions

/// Standard normal distribution function. Φ(-x) = 1 - Φ(x) holds by
/// construction: the positive half is evaluated as one minus the lower tail.
double std_normal_cdf(double x);

/// Upper tail 1 - Φ(x) without cancellation.
double std_normal_sf(double x);

/// log(1 - Φ(x)), finite far beyond the underflow point of the tail itself.
double log_std_normal_sf(double x);

/// log of the Mills ratio (1 - Φ(x))/φ(x), x ≥ 0.
double log_mills_ratio(double x);

struct LogGamma {
  double value;  ///< log|Γ(x)|; +∞ at the poles
  int sign;      ///< sign of Γ(x); 0 at the poles
};

/// sin(πx) with exact argument reduction, so integer x gives exactly 0.
double sin_pi(double x);

/// log|Γ(x)| and sign, with the reflection formula for x < 1/2.
LogGamma log_gamma(double x);

/// Modified Bessel function of the second kind K_ν(x), ν ≥ 0, x > 0.
///
/// Temme's series for x ≤ 2 and Steed's continued fraction above, for the
/// fractional order |μ| ≤ 1/2; integer steps by forward recurrence.
double bessel_k(double order, double x);
/// e^x K_ν(x), usable where K_ν itself underflows.
double bessel_k_scaled(double order, double x);
double log_bessel_k(double order, double x);

// ---------------------------------------------------------------------------
// Series

struct SeriesEvalResult {
  double value = 0.0;
  std::size_t terms_used = 0;
  double truncation_bound = 0.0;
};

struct SeriesOptions {
  double tol = 1e-15;
  /// Index from which |term(n)| is non-increasing.
  std::size_t monotone_from = 0;
  std::size_t max_terms = 1'000'000;
  /// Return the mean of two consecutive partial sums. The bound is then half
  /// the last drop in magnitude, which is valid when the magnitudes are also
  /// convex in n (true for 1/(n+1)-type tails).
  bool average_tail = false;
};

/// Sums an alternating series term(0) + term(1) + ... and stops at the first
/// omitted term whose magnitude is ≤ tol inside the monotone regime; that
/// magnitude is the reported truncation bound. Throws NumericError when the
/// magnitudes grow inside the monotone regime or the term budget runs out.
SeriesEvalResult alternating_series(const std::function<double(std::size_t)>& term,
                                    const SeriesOptions& options);
SeriesEvalResult alternating_series(const std::function<double(std::size_t)>& term,
                                    double tol);

/// Compensated (Neumaier) running sum.
class KahanSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace glmix

#endif  // GLMIX_NUMERIC_HPP
