// Normal variance-mean mixtures, the identities built on them, and the
// penalties they induce.
//
// Each verify_* function evaluates both sides of one identity, at least one
// of them by quadrature, and packs the comparison into a VerificationRecord.
// `lhs` and `rhs` follow the written orientation of the identity. The
// quadrature runs three digits tighter than the record tolerance.
#ifndef GLMIX_MIXTURES_HPP
#define GLMIX_MIXTURES_HPP

#include <functional>
#include <string>

#include "glmix/record.hpp"
#include "glmix/scalar_density.hpp"

namespace glmix {

/// x | λ ~ N(cond_mean(λ), cond_var(λ)), λ ~ mixing, optionally reweighted.
struct MixtureSpec {
  std::function<double(double)> cond_mean;
  std::function<double(double)> cond_var;
  ScalarDensity mixing;
  std::function<double(double)> weight;  ///< empty means 1
  std::function<double(double)> claimed_marginal;
};

/// ∫_0^∞ φ(x | cond_mean(λ), cond_var(λ)) weight(λ) mixing(λ) dλ.
QuadResult marginalize(const MixtureSpec& spec, double x, double tol);

/// ∫_0^∞ a (2π)^{-1/2} t^{-3/2} e^{-a²/(2t)} e^{-λt} dt = e^{-a(2λ)^{1/2}}.
VerificationRecord verify_lasso_identity(double a, double lambda, double tol);
/// E exp{-θ²/(2G)} = e^{-θ}, G ~ Gamma(1/2, rate 1/2).
VerificationRecord verify_gamma_expectation(double theta, double tol);
/// ∫_0^∞ p (2πλ)^{-1/2} exp{-(p²λ + q²/λ)/2} dλ = e^{-|pq|}.
VerificationRecord verify_lasso_pq(double p, double q, double tol);
/// Asymmetric Laplace as an exponential variance-mean mixture; α > κ ≥ 0.
VerificationRecord verify_gig_laplace(double alpha, double kappa, double mu, double x,
                                      double tol);
/// e^{aψ}/(1+e^ψ)^b = 2^{-b} e^{κψ} E exp(-ωψ²/2), ω ~ PG(b, 0), κ = a - b/2.
VerificationRecord verify_pg_transform(double a, double b, double psi, double tol);
/// 1/(1+e^ψ) = e^{-ψ/2}/2 · E exp(-ωψ²/2), ω ~ PG(1, 0).
VerificationRecord verify_pg_logit(double psi, double tol);
/// B(α,κ)^{-1} e^{α(x-μ)}/(1+e^{x-μ})^{α+κ}, checked through the PG
/// representation with a = α, b = α + κ.
VerificationRecord verify_pg_marginal(double alpha, double kappa, double mu, double x,
                                      double tol);
/// ∫_0^∞ φ(b | -aλ, cλ) dλ = a^{-1} exp{-2 max(ab/c, 0)}. The integral is cut
/// where the integrand drops below 1e-16; the tail bound goes in the notes.
VerificationRecord verify_svm(double a, double b, double c, double tol);
/// ∫_0^∞ φ(b | (1-2τ)λ, cλ) e^{-2τ(1-τ)λ/c} dλ = exp{-2ρ_τ(b)/c}.
/// The notes carry the residual of the uncorrected printed form.
VerificationRecord verify_quantile(double tau, double c, double b, double tol);

struct PrintedQuantile {
  double lhs = 0.0;  ///< c^{-1} exp{2ρ_τ(b)/c}
  double rhs = 0.0;  ///< ∫_0^∞ φ(b | λ - 2τλ, cλ) e^{-2τ(1-τ)λ} dλ
  QuadResult quad;
  double residual() const;
};
PrintedQuantile printed_quantile(double tau, double c, double b, double tol);

/// ∫_{1/2}^∞ e^{-x²z} / (4πz(2z-1)^{1/2}) dz = {1 - Φ(x)}/2, x ≥ 0.
VerificationRecord verify_erdelyi(double x, double tol);
/// Uniform mixture over the correlation of a bivariate standard normal
/// density equals {1 - Φ(max(|x1|, |x2|))}/2.
VerificationRecord verify_uniform_correlation(double x1, double x2, double tol);
/// e^{-x^α} = ∫_0^∞ e^{-xη} g(η) dη with g the positive-stable mixing density.
VerificationRecord verify_exp_power(double alpha, double x, double tol);

/// ρ_τ(b) = |b|/2 + (τ - 1/2) b.
double check_loss(double tau, double b);

enum class PenaltyFamily { kLasso, kSvm, kCheckLoss, kElasticNet };

/// Throws std::invalid_argument for unknown names.
PenaltyFamily parse_penalty_family(const std::string& name);
std::string to_string(PenaltyFamily family);

struct PenaltyParams {
  double alpha = 1.0;    ///< lasso rate
  double a = 1.0;        ///< svm
  double c = 1.0;        ///< svm
  double tau = 0.5;      ///< check loss
  double lambda1 = 1.0;  ///< elastic net
  double lambda2 = 1.0;
  double sigma = 1.0;
};

/// -log of the family's (pseudo-)density at x:
///   lasso        α|x| - log(α/2)              (Laplace with rate α)
///   svm          log a + 2 max(ax/c, 0)       (x plays the role of b)
///   check_loss   ρ_τ(x)                       (pseudo-density e^{-ρ_τ})
///   elastic_net  -log orthant-normal density  (normalizer included)
/// Invalid parameters throw std::domain_error.
double penalty(PenaltyFamily family, const PenaltyParams& params, double x);

}  // namespace glmix

#endif  // GLMIX_MIXTURES_HPP
