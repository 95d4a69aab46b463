#include "glmix/densities.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace glmix {

namespace {

constexpr double kLog2 = 0.693147180559945309417232121458176568;
constexpr double kLogPi = 1.14472988584940017414342735135305871;
constexpr double kLog2Pi = 1.83787706640934548356065947281123527;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

double lgamma_value(double x) { return log_gamma(x).value; }

// log cosh(y) without overflow.
double log_cosh(double y) {
  const double a = std::abs(y);
  return a + std::log1p(std::exp(-2.0 * a)) - kLog2;
}

}  // namespace

// ---------------------------------------------------------------------------
// Standard families

double normal_log_pdf(double x, double mean, double variance) {
  require(variance > 0.0, "normal: variance must be > 0");
  const double d = x - mean;
  return -0.5 * (kLog2Pi + std::log(variance)) - d * d / (2.0 * variance);
}

double normal_pdf(double x, double mean, double variance) {
  return std::exp(normal_log_pdf(x, mean, variance));
}

double laplace_log_pdf(double x, double location, double scale) {
  require(scale > 0.0, "laplace: scale must be > 0");
  return -std::log(2.0 * scale) - std::abs(x - location) / scale;
}

double laplace_pdf(double x, double location, double scale) {
  return std::exp(laplace_log_pdf(x, location, scale));
}

double laplace_cdf(double x, double location, double scale) {
  require(scale > 0.0, "laplace: scale must be > 0");
  const double z = (x - location) / scale;
  return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
}

double cauchy_log_pdf(double x, double location, double scale) {
  require(scale > 0.0, "cauchy: scale must be > 0");
  const double z = (x - location) / scale;
  return -kLogPi - std::log(scale) - std::log1p(z * z);
}

double cauchy_pdf(double x, double location, double scale) {
  require(scale > 0.0, "cauchy: scale must be > 0");
  const double z = (x - location) / scale;
  return 1.0 / (kPi * scale * (1.0 + z * z));
}

double cauchy_cdf(double x, double location, double scale) {
  require(scale > 0.0, "cauchy: scale must be > 0");
  const double z = (x - location) / scale;
  // atan(1/z) form keeps relative accuracy in the far lower tail.
  if (z < -1.0) return std::atan(-1.0 / z) / kPi;
  return 0.5 + std::atan(z) / kPi;
}

double exponential_log_pdf(double x, double rate) {
  require(rate > 0.0, "exponential: rate must be > 0");
  if (x < 0.0) return -kInf;
  return std::log(rate) - rate * x;
}

double exponential_pdf(double x, double rate) { return std::exp(exponential_log_pdf(x, rate)); }

double gamma_log_pdf(double x, double shape, double rate) {
  require(shape > 0.0 && rate > 0.0, "gamma: shape and rate must be > 0");
  if (x <= 0.0) return -kInf;
  return shape * std::log(rate) - lgamma_value(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

ScalarDensity normal_density(double mean, double variance) {
  require(variance > 0.0, "normal: variance must be > 0");
  std::ostringstream d;
  d << "normal(" << mean << ", " << variance << ")";
  return ScalarDensity(Interval::real_line(),
                       [=](double x) { return normal_log_pdf(x, mean, variance); }, true,
                       d.str())
      .with_derivative([=](double x) { return -(x - mean) / variance; })
      .with_landmarks({mean});
}

ScalarDensity laplace_density(double location, double scale) {
  require(scale > 0.0, "laplace: scale must be > 0");
  std::ostringstream d;
  d << "laplace(" << location << ", " << scale << ")";
  return ScalarDensity(Interval::real_line(),
                       [=](double x) { return laplace_log_pdf(x, location, scale); }, true,
                       d.str())
      .with_derivative([=](double x) {
        if (x == location) return 0.0;
        return x > location ? -1.0 / scale : 1.0 / scale;
      })
      .with_landmarks({location});
}

ScalarDensity cauchy_density(double location, double scale) {
  require(scale > 0.0, "cauchy: scale must be > 0");
  std::ostringstream d;
  d << "cauchy(" << location << ", " << scale << ")";
  return ScalarDensity(Interval::real_line(),
                       [=](double x) { return cauchy_log_pdf(x, location, scale); }, true,
                       d.str())
      .with_derivative([=](double x) {
        const double z = (x - location) / scale;
        return -2.0 * z / (scale * (1.0 + z * z));
      })
      .with_landmarks({location - scale, location, location + scale});
}

ScalarDensity exponential_density(double rate) {
  require(rate > 0.0, "exponential: rate must be > 0");
  std::ostringstream d;
  d << "exponential(" << rate << ")";
  return ScalarDensity(Interval::positive_half_line(),
                       [=](double x) { return exponential_log_pdf(x, rate); }, true, d.str())
      .with_derivative([=](double) { return -rate; })
      .with_landmarks({1.0 / rate});
}

ScalarDensity gamma_density(double shape, double rate) {
  require(shape > 0.0 && rate > 0.0, "gamma: shape and rate must be > 0");
  std::ostringstream d;
  d << "gamma(" << shape << ", " << rate << ")";
  return ScalarDensity(Interval::positive_half_line(),
                       [=](double x) { return gamma_log_pdf(x, shape, rate); }, true, d.str())
      .with_derivative([=](double x) { return (shape - 1.0) / x - rate; })
      .with_landmarks({shape / rate});
}

ScalarDensity half_normal_density() {
  const double log_norm = kLog2 - 0.5 * kLogPi;
  return ScalarDensity(Interval::positive_half_line(),
                       [=](double y) { return log_norm - y * y; }, true, "half-normal")
      .with_derivative([](double y) { return -2.0 * y; })
      .with_landmarks({1.0});
}

// ---------------------------------------------------------------------------
// GIG

void validate(const GigParams& p) {
  require(std::isfinite(p.lambda) && std::isfinite(p.delta) && std::isfinite(p.gamma),
          "gig: parameters must be finite");
  require(p.delta >= 0.0 && p.gamma >= 0.0, "gig: delta and gamma must be >= 0");
  require(p.delta > 0.0 || p.gamma > 0.0, "gig: delta and gamma cannot both be 0");
  require(p.delta > 0.0 || p.lambda > 0.0, "gig: delta = 0 needs lambda > 0");
  require(p.gamma > 0.0 || p.lambda < 0.0, "gig: gamma = 0 needs lambda < 0");
}

namespace {

double gig_log_normalizer(const GigParams& p) {
  if (p.delta == 0.0) {
    return p.lambda * std::log(0.5 * p.gamma * p.gamma) - lgamma_value(p.lambda);
  }
  if (p.gamma == 0.0) {
    const double shape = -p.lambda;
    return shape * std::log(0.5 * p.delta * p.delta) - lgamma_value(shape);
  }
  return p.lambda * (std::log(p.gamma) - std::log(p.delta)) - kLog2 -
         log_bessel_k(p.lambda, p.delta * p.gamma);
}

double gig_kernel(const GigParams& p, double log_norm, double x) {
  return log_norm + (p.lambda - 1.0) * std::log(x) -
         0.5 * (p.delta * p.delta / x + p.gamma * p.gamma * x);
}

}  // namespace

double gig_log_pdf(const GigParams& p, double x) {
  validate(p);
  require(x > 0.0, "gig: x must be > 0");
  return gig_kernel(p, gig_log_normalizer(p), x);
}

double gig_pdf(const GigParams& p, double x) { return std::exp(gig_log_pdf(p, x)); }

ScalarDensity gig_density(const GigParams& p) {
  validate(p);
  const double log_norm = gig_log_normalizer(p);
  const double lm1 = p.lambda - 1.0;
  const double g2 = p.gamma * p.gamma;
  const double d2 = p.delta * p.delta;
  double mode;
  if (p.gamma == 0.0) {
    mode = d2 / (2.0 * (1.0 - p.lambda));
  } else {
    mode = (lm1 + std::sqrt(lm1 * lm1 + g2 * d2)) / g2;
  }
  if (!(mode > 0.0)) mode = 2.0 * p.lambda / g2;  // gamma limit with λ ≤ 1: use the mean
  std::ostringstream d;
  d << "gig(" << p.lambda << ", " << p.delta << ", " << p.gamma << ")";
  return ScalarDensity(Interval::positive_half_line(),
                       [=](double x) { return gig_kernel(p, log_norm, x); }, true, d.str())
      .with_derivative([=](double x) { return lm1 / x + 0.5 * d2 / (x * x) - 0.5 * g2; })
      .with_landmarks({mode});
}

// ---------------------------------------------------------------------------
// Pólya-Gamma

void validate(const PolyaGammaParams& p) {
  require(std::isfinite(p.b) && p.b > 0.0, "polya-gamma: b must be > 0");
  require(std::isfinite(p.c) && p.c >= 0.0, "polya-gamma: c must be >= 0");
}

double pg_omega_ceiling(double b) {
  // P(ω > w) ≤ E[e^{sω}] e^{-sw} with E[e^{sω}] = cos(√(s/2))^{-b}, s < π²/2.
  const double s = 0.8 * kPi * kPi / 2.0;
  const double log_mgf = -b * std::log(std::cos(std::sqrt(0.5 * s)));
  return (20.0 * std::log(10.0) + log_mgf) / s;
}

PgEval pg_eval(const PolyaGammaParams& p, double omega) {
  validate(p);
  require(omega > 0.0, "polya-gamma: omega must be > 0");
  const double b = p.b;
  PgEval out;
  if (omega < kPgOmegaFloor || omega > pg_omega_ceiling(b)) {
    out.floored = true;
    return out;
  }
  const double log_prefactor = (b - 1.0) * kLog2 - lgamma_value(b) - 0.5 * kLog2Pi -
                               1.5 * std::log(omega);
  const double lgb = lgamma_value(b);
  const auto log_mag = [&](std::size_t n) {
    const double dn = static_cast<double>(n);
    const double k = 2.0 * dn + b;
    const double lg_ratio = n == 0 ? lgb : lgamma_value(dn + b) - lgamma_value(dn + 1.0);
    return log_prefactor + lg_ratio + std::log(k) - k * k / (8.0 * omega);
  };

  // |a_{n+1}/a_n| = (n+b)/(n+1) · (2n+2+b)/(2n+b) · exp(-(2n+1+b)/(2ω)); each
  // factor is bounded by its value at n for all later indices.
  std::size_t monotone_from = 0;
  double peak = -kInf;
  for (std::size_t n = 0;; ++n) {
    peak = std::max(peak, log_mag(n));
    const double dn = static_cast<double>(n);
    const double poly = std::log(std::max(1.0, (dn + b) / (dn + 1.0))) +
                        std::log((2.0 * dn + 2.0 + b) / (2.0 * dn + b));
    if (poly - (2.0 * dn + 1.0 + b) / (2.0 * omega) <= 0.0) {
      monotone_from = n;
      break;
    }
  }

  SeriesOptions opts;
  opts.monotone_from = monotone_from;
  opts.tol = std::max(std::exp(peak) * 1e-18, 1e-300);
  const SeriesEvalResult s = alternating_series(
      [&](std::size_t n) {
        const double m = std::exp(log_mag(n));
        return n % 2 == 0 ? m : -m;
      },
      opts);

  const double tilt = p.c == 0.0 ? 1.0
                                 : std::exp(b * log_cosh(0.5 * p.c) - 0.5 * p.c * p.c * omega);
  out.value = std::max(s.value, 0.0) * tilt;
  out.truncation_bound = s.truncation_bound * tilt;
  out.terms_used = s.terms_used;
  return out;
}

double pg_pdf(const PolyaGammaParams& p, double omega) { return pg_eval(p, omega).value; }

ScalarDensity pg_density(const PolyaGammaParams& p) {
  validate(p);
  const double mean = p.c == 0.0 ? 0.25 * p.b : p.b / (2.0 * p.c) * std::tanh(0.5 * p.c);
  std::ostringstream d;
  d << "polya-gamma(" << p.b << ", " << p.c << ")";
  return ScalarDensity(Interval::positive_half_line(),
                       [=](double w) {
                         const double v = pg_eval(p, w).value;
                         return v > 0.0 ? std::log(v) : -kInf;
                       },
                       true, d.str())
      .with_landmarks({kPgOmegaFloor, mean, pg_omega_ceiling(p.b)});
}

// ---------------------------------------------------------------------------
// Inverse Gaussian

double inverse_gaussian_log_pdf(double alpha, double t, double x) {
  require(alpha > 0.0 && t > 0.0 && x > 0.0, "inverse gaussian: alpha, t, x must be > 0");
  return std::log(t) + 0.5 * std::log(alpha) + t - 0.5 * kLog2Pi - 1.5 * std::log(x) -
         alpha * t * t / (2.0 * x) - x / (2.0 * alpha);
}

double inverse_gaussian_pdf(double alpha, double t, double x) {
  return std::exp(inverse_gaussian_log_pdf(alpha, t, x));
}

double inverse_gaussian_mean_shape_pdf(double mean, double shape, double x) {
  require(mean > 0.0 && shape > 0.0 && x > 0.0,
          "inverse gaussian: mean, shape, x must be > 0");
  const double d = x - mean;
  return std::sqrt(shape / (2.0 * kPi * x * x * x)) *
         std::exp(-shape * d * d / (2.0 * mean * mean * x));
}

ScalarDensity inverse_gaussian_density(double alpha, double t) {
  require(alpha > 0.0 && t > 0.0, "inverse gaussian: alpha, t must be > 0");
  const double mean = alpha * t;
  const double mode = mean * (std::sqrt(1.0 + 2.25 / (t * t)) - 1.5 / t);
  std::ostringstream d;
  d << "inverse-gaussian(alpha=" << alpha << ", t=" << t << ")";
  return ScalarDensity(Interval::positive_half_line(),
                       [=](double x) { return inverse_gaussian_log_pdf(alpha, t, x); }, true,
                       d.str())
      .with_derivative([=](double x) {
        return -1.5 / x + alpha * t * t / (2.0 * x * x) - 0.5 / alpha;
      })
      .with_landmarks({mode, mean});
}

// ---------------------------------------------------------------------------
// Orthant-normal

void validate(const OrthantNormalParams& p) {
  require(std::isfinite(p.lambda1) && p.lambda1 >= 0.0, "orthant-normal: lambda1 must be >= 0");
  require(std::isfinite(p.lambda2) && p.lambda2 > 0.0, "orthant-normal: lambda2 must be > 0");
  require(std::isfinite(p.sigma) && p.sigma > 0.0, "orthant-normal: sigma must be > 0");
}

namespace {

// Expanding the square against the normalizer gives the symmetric form
//   p(β) = exp(-m|β|/v - β²/(2v)) / (2 (2πv)^{1/2} R(k) φ(0)·(2π)^{1/2})
// with m = λ1/(2λ2), v = σ²/λ2, k = m/v^{1/2} and R the Mills ratio; this
// avoids cancelling m²/(2v) against log Φ(-k) when k is large.
struct OrthantParts {
  double shift;     // m
  double variance;  // v
  double log_norm;
};

OrthantParts orthant_parts(const OrthantNormalParams& p) {
  validate(p);
  const double shift = p.lambda1 / (2.0 * p.lambda2);
  const double variance = p.sigma * p.sigma / p.lambda2;
  const double k = shift / std::sqrt(variance);
  return {shift, variance, kLog2 + 0.5 * std::log(variance) + log_mills_ratio(k)};
}

double orthant_log_pdf(const OrthantParts& q, double beta) {
  const double a = std::abs(beta);
  return -q.log_norm - q.shift * a / q.variance - a * a / (2.0 * q.variance);
}

}  // namespace

double orthant_normal_log_pdf(const OrthantNormalParams& p, double beta) {
  return orthant_log_pdf(orthant_parts(p), beta);
}

double orthant_normal_pdf(const OrthantNormalParams& p, double beta) {
  return std::exp(orthant_normal_log_pdf(p, beta));
}

ScalarDensity orthant_normal_density(const OrthantNormalParams& p) {
  const OrthantParts q = orthant_parts(p);
  std::ostringstream d;
  d << "orthant-normal(" << p.lambda1 << ", " << p.lambda2 << ", " << p.sigma << ")";
  // Decay scale of either half: the smaller of v/m and v^{1/2}.
  const double width = std::min(std::sqrt(q.variance), q.variance / std::max(q.shift, 1e-300));
  return ScalarDensity(Interval::real_line(),
                       [=](double beta) { return orthant_log_pdf(q, beta); }, true, d.str())
      .with_derivative([=](double beta) {
        const double mean = beta < 0.0 ? q.shift : -q.shift;
        return -(beta - mean) / q.variance;
      })
      .with_landmarks({-width, 0.0, width});
}

// ---------------------------------------------------------------------------
// Positive-stable mixing density

namespace {

void validate_stable(double alpha, double eta) {
  require(alpha > 0.0 && alpha < 1.0, "stable mixing: alpha must lie in (0, 1)");
  require(eta > 0.0 && std::isfinite(eta), "stable mixing: eta must be > 0");
}

// Zolotarev: g(η) = α/(1-α) η^{-1/(1-α)} / π ∫_0^π A(φ) exp(-η^{-α/(1-α)} A(φ)) dφ
// with A(φ) = sin(αφ)^{α/(1-α)} sin((1-α)φ) / sin(φ)^{1/(1-α)}, increasing
// from A(0+) = α^{α/(1-α)}(1-α).
double stable_integral(double alpha, double eta) {
  const double r = 1.0 / (1.0 - alpha);
  const double log_c = -alpha * r * std::log(eta);
  const double c = std::exp(log_c);
  const double a0 = std::exp(alpha * r * std::log(alpha)) * (1.0 - alpha);
  const double log_prefactor = std::log(alpha * r / kPi) - r * std::log(eta) - c * a0;
  // A e^{-c(A - a0)} ≤ a0 when c·a0 ≥ 1, else ≤ e^{c·a0 - 1}/c.
  const double log_bound = c * a0 >= 1.0 ? std::log(a0) : c * a0 - 1.0 - log_c;
  if (log_prefactor + std::log(kPi) + log_bound < -750.0) return 0.0;
  const Integrand f = [&](double phi) {
    const double log_a = alpha * r * std::log(std::sin(alpha * phi)) +
                         std::log(std::sin((1.0 - alpha) * phi)) - r * std::log(std::sin(phi));
    const double excess = std::exp(log_a) - a0;
    return std::exp(log_a - c * std::max(excess, 0.0));
  };
  QuadOptions opts;
  opts.abs_tol = 1e-300;
  opts.rel_tol = 1e-13;
  opts.breakpoints = {std::min(1.0, 4.0 / std::sqrt(1.0 + c)), 0.5 * kPi};
  const QuadResult q = integrate(f, Interval(0.0, kPi), opts);
  if (!(q.value > 0.0)) return 0.0;
  return std::exp(log_prefactor + std::log(q.value));
}

}  // namespace

StableEval stable_mixing_eval(double alpha, double eta) {
  validate_stable(alpha, eta);
  const double log_eta = std::log(eta);
  KahanSum sum;
  double abs_sum = 0.0;
  double max_log = -kInf;
  double prev_log = -kInf;
  bool past_peak = false;
  std::size_t j = 1;
  bool fallback = false;
  for (; j < 100000; ++j) {
    const double dj = static_cast<double>(j);
    const double log_env = lgamma_value(alpha * dj + 1.0) - lgamma_value(dj + 1.0) -
                           (alpha * dj + 1.0) * log_eta - kLogPi;
    if (log_env > 700.0) {
      fallback = true;
      break;
    }
    max_log = std::max(max_log, log_env);
    if (log_env < prev_log) past_peak = true;
    prev_log = log_env;
    const double env = std::exp(log_env);
    const double t = (j % 2 == 1 ? 1.0 : -1.0) * sin_pi(alpha * dj) * env;
    sum.add(t);
    abs_sum += std::abs(t);
    // Past the peak the envelope ratios keep shrinking, so the tail is
    // dominated by a geometric series with the current ratio.
    if (past_peak && env <= 1e-18 * std::abs(sum.value())) break;
    if (past_peak && env == 0.0) break;
  }
  const double value = sum.value();
  if (!fallback && max_log < -745.0) return {0.0, j, StableMethod::kSeries};  // underflows
  const double rounding = kEps * abs_sum * (1.0 + std::abs(max_log));
  if (fallback || !(value > 0.0) || rounding > 1e-12 * value) {
    return {stable_integral(alpha, eta), 0, StableMethod::kIntegral};
  }
  return {value, j, StableMethod::kSeries};
}

double stable_mixing_series(double alpha, double eta) {
  return stable_mixing_eval(alpha, eta).value;
}

ScalarDensity stable_mixing_density(double alpha) {
  validate_stable(alpha, 1.0);
  std::ostringstream d;
  d << "positive-stable mixing(" << alpha << ")";
  return ScalarDensity(Interval::positive_half_line(),
                       [=](double eta) {
                         const double v = stable_mixing_series(alpha, eta);
                         return v > 0.0 ? std::log(v) : -kInf;
                       },
                       true, d.str())
      .with_landmarks({1.0});
}

}  // namespace glmix
