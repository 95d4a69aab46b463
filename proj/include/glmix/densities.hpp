// Density families: generalized inverse Gaussian, Pólya-Gamma, inverse
// Gaussian, orthant-normal, the positive-stable mixing density, and the
// usual normal / Laplace / Cauchy / exponential / gamma.
//
// Log-densities are the primitive; the *_pdf functions exponentiate them.
// Invalid parameters throw std::domain_error.

#ifndef GLMIX_DENSITIES_HPP
#define GLMIX_DENSITIES_HPP

#include <cstddef>

#include "glmix/scalar_density.hpp"

namespace glmix {

// ---------------------------------------------------------------------------
// Standard families

double normal_log_pdf(double x, double mean, double variance);
double normal_pdf(double x, double mean, double variance);
double laplace_log_pdf(double x, double location, double scale);
double laplace_pdf(double x, double location, double scale);
double laplace_cdf(double x, double location, double scale);
double cauchy_log_pdf(double x, double location, double scale);
double cauchy_pdf(double x, double location, double scale);
double cauchy_cdf(double x, double location, double scale);
double exponential_log_pdf(double x, double rate);
double exponential_pdf(double x, double rate);
/// Shape/rate parameterization.
double gamma_log_pdf(double x, double shape, double rate);

ScalarDensity normal_density(double mean, double variance);
ScalarDensity laplace_density(double location, double scale);
ScalarDensity cauchy_density(double location, double scale);
ScalarDensity exponential_density(double rate);
ScalarDensity gamma_density(double shape, double rate);
/// (2/√π) e^{-y²} on (0, ∞).
ScalarDensity half_normal_density();

// ---------------------------------------------------------------------------
// Generalized inverse Gaussian
//
//   p(x | λ, δ, γ) = (γ/δ)^λ / (2 K_λ(δγ)) · x^{λ-1} exp{-(δ²/x + γ²x)/2}
//
// δ = 0 is the gamma density with shape λ and rate γ²/2; γ = 0 is the
// inverse gamma with shape -λ and scale δ²/2.

struct GigParams {
  double lambda = 1.0;
  double delta = 1.0;
  double gamma = 1.0;
};

void validate(const GigParams& p);
double gig_log_pdf(const GigParams& p, double x);
double gig_pdf(const GigParams& p, double x);
ScalarDensity gig_density(const GigParams& p);

// ---------------------------------------------------------------------------
// Pólya-Gamma PG(b, c)

struct PolyaGammaParams {
  double b = 1.0;
  double c = 0.0;
};

/// Below this ω the density is returned as 0 and flagged; the mass lost is
/// below 1e-14 for b ≥ 1/2.
inline constexpr double kPgOmegaFloor = 1e-3;

struct PgEval {
  double value = 0.0;
  double truncation_bound = 0.0;  ///< bound on the omitted tail of the series
  std::size_t terms_used = 0;
  bool floored = false;           ///< ω fell outside [floor, ceiling]
};

void validate(const PolyaGammaParams& p);
/// ω above which PG(b, 0) has tail mass below 1e-20; the density is
/// returned as 0 there.
double pg_omega_ceiling(double b);
PgEval pg_eval(const PolyaGammaParams& p, double omega);
double pg_pdf(const PolyaGammaParams& p, double omega);
ScalarDensity pg_density(const PolyaGammaParams& p);

// ---------------------------------------------------------------------------
// Inverse Gaussian in the (α, t) form
//
//   f(x) = t α^{1/2} e^t / ((2π)^{1/2} x^{3/2}) · exp(-αt²/(2x) - x/(2α))
//
// which is the inverse Gaussian with mean αt and shape αt².

double inverse_gaussian_log_pdf(double alpha, double t, double x);
double inverse_gaussian_pdf(double alpha, double t, double x);
/// Mean/shape form (λ/(2πx³))^{1/2} exp{-λ(x-μ)²/(2μ²x)}.
double inverse_gaussian_mean_shape_pdf(double mean, double shape, double x);
ScalarDensity inverse_gaussian_density(double alpha, double t);

// ---------------------------------------------------------------------------
// Orthant-normal
//
// Two Gaussian halves with means ±λ1/(2λ2) (plus below zero, minus above) and
// variance σ²/λ2, each divided by 2Φ(-λ1/(2σλ2^{1/2})).

struct OrthantNormalParams {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double sigma = 1.0;
};

void validate(const OrthantNormalParams& p);
double orthant_normal_log_pdf(const OrthantNormalParams& p, double beta);
double orthant_normal_pdf(const OrthantNormalParams& p, double beta);
ScalarDensity orthant_normal_density(const OrthantNormalParams& p);

// ---------------------------------------------------------------------------
// Positive-stable mixing density
//
//   g(η) = Σ_{j≥1} (-1)^{j+1} Γ(αj+1) sin(παj) η^{-αj-1} / (π j!)
//
// with ∫_0^∞ e^{-xη} g(η) dη = e^{-x^α}.

enum class StableMethod { kSeries, kIntegral };

struct StableEval {
  double value = 0.0;
  std::size_t terms_used = 0;
  /// kIntegral when the series would lose more than ~1e-12 relative accuracy
  /// to cancellation; Zolotarev's integral form is used instead.
  StableMethod method = StableMethod::kSeries;
};

StableEval stable_mixing_eval(double alpha, double eta);
double stable_mixing_series(double alpha, double eta);
ScalarDensity stable_mixing_density(double alpha);

}  // namespace glmix

#endif  // GLMIX_DENSITIES_HPP
