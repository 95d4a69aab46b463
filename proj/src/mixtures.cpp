#include "glmix/mixtures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "glmix/densities.hpp"

namespace glmix {

namespace {

constexpr double kLog2Pi = 1.837877066409345483560659472811;
constexpr double kLn2 = 0.693147180559945309417232121458;

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

void append_note(VerificationRecord& r, const std::string& s) {
  if (!r.notes.empty()) r.notes += "; ";
  r.notes += s;
}

// ∫_0^∞ exp(log_f(x)) dx in the coordinate u = log x, split at the logs of
// `peaks`.
QuadResult integrate_positive(const std::function<double(double)>& log_f, double qtol,
                              const std::vector<double>& peaks) {
  QuadOptions o;
  o.abs_tol = qtol;
  o.rel_tol = qtol;
  for (double p : peaks) {
    if (p > 0.0 && std::isfinite(p)) o.breakpoints.push_back(std::log(p));
  }
  return integrate(
      [&](double u) {
        const double x = std::exp(u);
        if (x == 0.0 || x == kInf) return 0.0;
        const double lf = log_f(x);
        return lf == -kInf ? 0.0 : std::exp(lf + u);
      },
      Interval::real_line(), o);
}

// log(1 + e^y) without overflow.
double softplus(double y) { return y > 0.0 ? y + std::log1p(std::exp(-y)) : std::log1p(std::exp(y)); }

// E exp(-ωψ²/2) for ω ~ PG(b, 0).
QuadResult pg_laplace(double b, double psi, double qtol) {
  const double s = 0.5 * psi * psi;
  return integrate_density(pg_density({b, 0.0}), [s](double w) { return std::exp(-s * w); }, qtol,
                           qtol);
}

const char* kPgFloorNote = "PG density taken as 0 below omega = 1e-3";

}  // namespace

QuadResult marginalize(const MixtureSpec& spec, double x, double tol) {
  if (!spec.cond_mean || !spec.cond_var) {
    throw std::invalid_argument("marginalize: conditional mean and variance are required");
  }
  const Interval& s = spec.mixing.support();
  if (s.lower() != 0.0 || s.upper() != kInf) {
    throw std::invalid_argument("marginalize: mixing density must live on (0, inf)");
  }
  std::vector<double> peaks = spec.mixing.landmarks();
  const double m0 = spec.cond_mean(0.0);
  if (std::isfinite(m0) && x != m0) peaks.push_back((x - m0) * (x - m0));
  const double qtol = quadrature_tolerance(tol);
  return integrate_positive(
      [&](double lambda) {
        const double v = spec.cond_var(lambda);
        if (!(v > 0.0)) throw std::domain_error("marginalize: cond_var must be > 0");
        double lp = normal_log_pdf(x, spec.cond_mean(lambda), v) + spec.mixing.log_pdf(lambda);
        if (spec.weight) {
          const double w = spec.weight(lambda);
          if (w == 0.0) return -kInf;
          require(w > 0.0, "marginalize: weight must be non-negative");
          lp += std::log(w);
        }
        return lp;
      },
      qtol, peaks);
}

VerificationRecord verify_lasso_identity(double a, double lambda, double tol) {
  require(a > 0.0 && lambda > 0.0, "lasso identity: a and lambda must be > 0");
  const double la = std::log(a);
  const QuadResult q = integrate_positive(
      [&](double t) {
        return la - 0.5 * kLog2Pi - 1.5 * std::log(t) - a * a / (2.0 * t) - lambda * t;
      },
      quadrature_tolerance(tol), {a / std::sqrt(2.0 * lambda), a * a});
  auto r = make_record("lasso.levy", {{"a", a}, {"lambda", lambda}}, q.value,
                       std::exp(-a * std::sqrt(2.0 * lambda)), tol);
  note_quadrature(r, q, "lhs");
  return r;
}

VerificationRecord verify_gamma_expectation(double theta, double tol) {
  require(theta >= 0.0, "gamma expectation: theta must be >= 0");
  const double h = 0.5 * theta * theta;
  const QuadResult q = integrate_positive(
      [&](double g) { return gamma_log_pdf(g, 0.5, 0.5) - h / g; }, quadrature_tolerance(tol),
      {theta, 1.0});
  auto r = make_record("lasso.gamma_expectation", {{"theta", theta}}, q.value, std::exp(-theta),
                       tol);
  note_quadrature(r, q, "lhs");
  return r;
}

VerificationRecord verify_lasso_pq(double p, double q, double tol) {
  require(p > 0.0 && std::isfinite(q), "lasso pq: p must be > 0 and q finite");
  const double lp = std::log(p);
  const QuadResult res = integrate_positive(
      [&](double l) {
        return lp - 0.5 * (kLog2Pi + std::log(l)) - 0.5 * (p * p * l + q * q / l);
      },
      quadrature_tolerance(tol), {std::abs(q) / p, 1.0 / (p * p)});
  auto r = make_record("lasso.pq", {{"p", p}, {"q", q}}, res.value, std::exp(-std::abs(p * q)),
                       tol);
  note_quadrature(r, res, "lhs");
  return r;
}

VerificationRecord verify_gig_laplace(double alpha, double kappa, double mu, double x,
                                      double tol) {
  require(alpha > kappa && kappa >= 0.0, "gig laplace: need alpha > kappa >= 0");
  const double d = alpha * alpha - kappa * kappa;
  const double y = x - mu;
  const double lhs = d / (2.0 * alpha) * std::exp(-alpha * std::abs(y) + kappa * y);
  MixtureSpec spec{[=](double l) { return mu + kappa * l; },
                   [](double l) { return l; },
                   gig_density({1.0, 0.0, std::sqrt(d)}),
                   {},
                   {}};
  const QuadResult q = marginalize(spec, x, tol);
  auto r = make_record("gig.laplace_mixture",
                       {{"alpha", alpha}, {"kappa", kappa}, {"mu", mu}, {"x", x}}, lhs, q.value,
                       tol);
  note_quadrature(r, q, "rhs");
  return r;
}

VerificationRecord verify_pg_transform(double a, double b, double psi, double tol) {
  require(b > 0.0 && std::isfinite(a) && std::isfinite(psi), "pg transform: need b > 0");
  const double lhs = std::exp(a * psi - b * softplus(psi));
  const double kappa = a - 0.5 * b;
  const QuadResult q = pg_laplace(b, psi, quadrature_tolerance(tol));
  const double rhs = std::exp(-b * kLn2 + kappa * psi) * q.value;
  auto r = make_record("polya.transform", {{"a", a}, {"b", b}, {"psi", psi}}, lhs, rhs, tol,
                       kPgFloorNote);
  note_quadrature(r, q, "rhs");
  return r;
}

VerificationRecord verify_pg_logit(double psi, double tol) {
  require(std::isfinite(psi), "pg logit: psi must be finite");
  const QuadResult q = pg_laplace(1.0, psi, quadrature_tolerance(tol));
  const double lhs = std::exp(-softplus(psi));
  const double rhs = 0.5 * std::exp(-0.5 * psi) * q.value;
  auto r = make_record("polya.logit", {{"psi", psi}}, lhs, rhs, tol, kPgFloorNote);
  note_quadrature(r, q, "rhs");
  return r;
}

VerificationRecord verify_pg_marginal(double alpha, double kappa, double mu, double x,
                                      double tol) {
  require(alpha > 0.0 && kappa > 0.0, "pg marginal: alpha and kappa must be > 0");
  const double y = x - mu;
  const double b = alpha + kappa;
  const double log_beta =
      log_gamma(alpha).value + log_gamma(kappa).value - log_gamma(alpha + kappa).value;
  const double lhs = std::exp(alpha * y - b * softplus(y) - log_beta);
  const QuadResult q = pg_laplace(b, y, quadrature_tolerance(tol));
  const double tilt = alpha - 0.5 * b;
  const double rhs = std::exp(-log_beta - b * kLn2 + tilt * y) * q.value;
  auto r = make_record("polya.marginal",
                       {{"alpha", alpha}, {"kappa", kappa}, {"mu", mu}, {"x", x}}, lhs, rhs, tol,
                       "via the PG representation with a = alpha, b = alpha + kappa");
  append_note(r, kPgFloorNote);
  note_quadrature(r, q, "rhs");
  return r;
}

VerificationRecord verify_svm(double a, double b, double c, double tol) {
  require(a > 0.0 && c > 0.0 && std::isfinite(b), "svm: need a > 0, c > 0");
  const auto log_f = [=](double l) {
    const double m = b + a * l;
    return -0.5 * (kLog2Pi + std::log(c * l)) - m * m / (2.0 * c * l);
  };
  // Walk right from past the peak until the integrand is below 1e-16.
  const double peak = std::max(std::abs(b) / a, c / (a * a));
  double cut = 2.0 * peak;
  const double floor = std::log(1e-16);
  while (log_f(cut) > floor) cut *= 2.0;
  QuadOptions o;
  o.abs_tol = o.rel_tol = quadrature_tolerance(tol);
  if (b != 0.0) o.breakpoints.push_back(std::log(std::abs(b) / a));
  o.breakpoints.push_back(std::log(peak));
  const QuadResult q = integrate(
      [&](double u) {
        const double l = std::exp(u);
        return l == 0.0 ? 0.0 : std::exp(log_f(l) + u);
      },
      Interval(-kInf, std::log(cut)), o);
  // (b + aλ)² ≥ a²λ² + 2abλ, and λ^{-1/2} ≤ cut^{-1/2} beyond the cut.
  const double tail = std::exp(-0.5 * (kLog2Pi + std::log(c * cut)) - a * b / c -
                               a * a * cut / (2.0 * c)) *
                      2.0 * c / (a * a);
  const double rhs = std::exp(-2.0 * std::max(a * b / c, 0.0)) / a;
  auto r = make_record("svm.pseudo_likelihood", {{"a", a}, {"b", b}, {"c", c}}, q.value, rhs,
                       tol,
                       fmt::format("lhs truncated at lambda = {:.6g}; tail bound {:.3g}", cut,
                                   tail));
  note_quadrature(r, q, "lhs");
  return r;
}

double check_loss(double tau, double b) { return 0.5 * std::abs(b) + (tau - 0.5) * b; }

double PrintedQuantile::residual() const { return std::abs(lhs - rhs); }

PrintedQuantile printed_quantile(double tau, double c, double b, double tol) {
  require(tau > 0.0 && tau < 1.0 && c > 0.0 && std::isfinite(b),
          "quantile: need tau in (0,1), c > 0");
  PrintedQuantile out;
  out.lhs = std::exp(2.0 * check_loss(tau, b) / c) / c;
  const double w = 2.0 * tau * (1.0 - tau);
  out.quad = integrate_positive(
      [&](double l) { return normal_log_pdf(b, (1.0 - 2.0 * tau) * l, c * l) - w * l; },
      quadrature_tolerance(tol), {std::abs(b), 1.0});
  out.rhs = out.quad.value;
  return out;
}

VerificationRecord verify_quantile(double tau, double c, double b, double tol) {
  require(tau > 0.0 && tau < 1.0 && c > 0.0 && std::isfinite(b),
          "quantile: need tau in (0,1), c > 0");
  const double w = 2.0 * tau * (1.0 - tau) / c;
  const QuadResult q = integrate_positive(
      [&](double l) { return normal_log_pdf(b, (1.0 - 2.0 * tau) * l, c * l) - w * l; },
      quadrature_tolerance(tol), {std::abs(b), c});
  const double rhs = std::exp(-2.0 * check_loss(tau, b) / c);
  auto r = make_record("quantile.check_loss", {{"tau", tau}, {"c", c}, {"b", b}}, q.value, rhs,
                       tol);
  note_quadrature(r, q, "lhs");
  const PrintedQuantile printed = printed_quantile(tau, c, b, tol);
  append_note(r, fmt::format("printed form: lhs {:.17g}, rhs {:.17g}, residual {:.17g}",
                             printed.lhs, printed.rhs, printed.residual()));
  return r;
}

VerificationRecord verify_erdelyi(double x, double tol) {
  require(x >= 0.0 && std::isfinite(x), "erdelyi: x must be >= 0");
  // z = (1 + v²)/2 turns the integrand into e^{-x²(1+v²)/2} / {2π(1+v²)}.
  const double h = 0.5 * x * x;
  QuadOptions o;
  o.abs_tol = o.rel_tol = quadrature_tolerance(tol);
  if (x > 0.0) o.breakpoints.push_back(1.0 / x);
  const QuadResult q = integrate(
      [&](double v) {
        const double s = 1.0 + v * v;
        return std::exp(-h * s) / (2.0 * kPi * s);
      },
      Interval::positive_half_line(), o);
  auto r = make_record("erdelyi.normal_tail", {{"x", x}}, q.value, 0.5 * std_normal_sf(x), tol);
  note_quadrature(r, q, "lhs");
  return r;
}

VerificationRecord verify_uniform_correlation(double x1, double x2, double tol) {
  require(std::isfinite(x1) && std::isfinite(x2), "uniform correlation: x must be finite");
  const double diff2 = (x1 - x2) * (x1 - x2);
  const double sum2 = (x1 + x2) * (x1 + x2);
  const double prod = x1 * x2;
  // ρ = sin φ. Near ρ = ±1 the quadratic form is rewritten around (x1 ∓ x2)²
  // so 1 ∓ ρ is never formed by cancellation.
  const Integrand f = [&](double phi) {
    double e;
    if (phi >= 0.0) {
      const double s = std::sin(0.25 * kPi - 0.5 * phi);
      const double d = 2.0 * s * s;  // 1 - ρ
      e = -diff2 / (2.0 * d * (2.0 - d)) - prod / (2.0 - d);
    } else {
      const double s = std::sin(0.25 * kPi + 0.5 * phi);
      const double d = 2.0 * s * s;  // 1 + ρ
      e = -sum2 / (2.0 * d * (2.0 - d)) + prod / (2.0 - d);
    }
    return std::exp(e) / (4.0 * kPi);
  };
  QuadOptions o;
  o.abs_tol = o.rel_tol = quadrature_tolerance(tol);
  o.breakpoints = {0.0};
  const QuadResult q = integrate(f, Interval(-0.5 * kPi, 0.5 * kPi), o);
  const double norm = std::max(std::abs(x1), std::abs(x2));
  auto r = make_record("bivariate.uniform_correlation", {{"x1", x1}, {"x2", x2}}, q.value,
                       0.5 * std_normal_sf(norm), tol, "max norm taken as max(|x1|, |x2|)");
  note_quadrature(r, q, "lhs");
  return r;
}

VerificationRecord verify_exp_power(double alpha, double x, double tol) {
  require(alpha > 0.0 && alpha < 1.0, "exp power: alpha must lie in (0, 1)");
  require(x > 0.0 && std::isfinite(x), "exp power: x must be > 0");
  const double qtol = quadrature_tolerance(tol);
  const QuadResult q =
      integrate_density(stable_mixing_density(alpha), [x](double e) { return std::exp(-x * e); },
                        qtol, qtol);
  auto r = make_record("stable.exp_power", {{"alpha", alpha}, {"x", x}},
                       std::exp(-std::pow(x, alpha)), q.value, tol);
  note_quadrature(r, q, "rhs");
  return r;
}

PenaltyFamily parse_penalty_family(const std::string& name) {
  if (name == "lasso") return PenaltyFamily::kLasso;
  if (name == "svm") return PenaltyFamily::kSvm;
  if (name == "check_loss") return PenaltyFamily::kCheckLoss;
  if (name == "elastic_net") return PenaltyFamily::kElasticNet;
  throw std::invalid_argument("unknown penalty family '" + name + "'");
}

std::string to_string(PenaltyFamily family) {
  switch (family) {
    case PenaltyFamily::kLasso: return "lasso";
    case PenaltyFamily::kSvm: return "svm";
    case PenaltyFamily::kCheckLoss: return "check_loss";
    case PenaltyFamily::kElasticNet: return "elastic_net";
  }
  return "?";
}

double penalty(PenaltyFamily family, const PenaltyParams& p, double x) {
  require(std::isfinite(x), "penalty: x must be finite");
  switch (family) {
    case PenaltyFamily::kLasso:
      require(p.alpha > 0.0 && std::isfinite(p.alpha), "lasso penalty: alpha must be > 0");
      return p.alpha * std::abs(x) - std::log(0.5 * p.alpha);
    case PenaltyFamily::kSvm:
      require(p.a > 0.0 && p.c > 0.0, "svm penalty: a and c must be > 0");
      return std::log(p.a) + 2.0 * std::max(p.a * x / p.c, 0.0);
    case PenaltyFamily::kCheckLoss:
      require(p.tau > 0.0 && p.tau < 1.0, "check loss: tau must lie in (0, 1)");
      return check_loss(p.tau, x);
    case PenaltyFamily::kElasticNet:
      return -orthant_normal_log_pdf({p.lambda1, p.lambda2, p.sigma}, x);
  }
  throw std::domain_error("penalty: unknown family");
}

}  // namespace glmix
