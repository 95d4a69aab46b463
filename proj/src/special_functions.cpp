#include "glmix/numeric.hpp"

#include <cmath>
#include <sstream>

namespace glmix {

namespace {

constexpr double kSqrt1_2 = 0.707106781186547524400844362104849039;
constexpr double kHalfLog2Pi = 0.918938533204672741780329736405617639;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Stirling series, accurate to ~1e-17 for x >= 10.
double log_gamma_stirling(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv * (1.0 / 12.0 +
             inv2 * (-1.0 / 360.0 +
                     inv2 * (1.0 / 1260.0 +
                             inv2 * (-1.0 / 1680.0 +
                                     inv2 * (1.0 / 1188.0 +
                                             inv2 * (-691.0 / 360360.0 +
                                                     inv2 * (1.0 / 156.0 +
                                                             inv2 * (-3617.0 / 122400.0))))))));
  return (x - 0.5) * std::log(x) - x + kHalfLog2Pi + series;
}

double log_gamma_positive(double x) {
  if (x >= 10.0) return log_gamma_stirling(x);
  int sign = 0;
  return ::lgamma_r(x, &sign);  // reentrant; x > 0 so sign is +1
}

// Taylor coefficients of 1/Γ(z) = Σ_{k≥1} c_k z^k.
constexpr double kRecipGamma[] = {
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
    -1.1812593016974587695e-16,
    1.1866922547516003326e-18,
};

// Temme's auxiliary functions for |mu| <= 1/2:
//   gam1 = (1/Γ(1-μ) - 1/Γ(1+μ)) / (2μ),  gam2 = (1/Γ(1-μ) + 1/Γ(1+μ)) / 2.
struct TemmeGammas {
  double gam1;
  double gam2;
  double gampl;  // 1/Γ(1+μ)
  double gammi;  // 1/Γ(1-μ)
};

TemmeGammas temme_gammas(double mu) {
  // 1/Γ(1+z) = Σ_{k≥1} c_k z^{k-1}; split into even and odd powers of μ.
  constexpr int n = sizeof(kRecipGamma) / sizeof(kRecipGamma[0]);
  double even = 0.0;  // Σ c_k μ^{k-1}, k odd
  double odd = 0.0;   // Σ c_k μ^{k-2}, k even
  const double mu2 = mu * mu;
  for (int k = n; k >= 1; --k) {
    if (k % 2 == 1) {
      even = even * mu2 + kRecipGamma[k - 1];
    } else {
      odd = odd * mu2 + kRecipGamma[k - 1];
    }
  }
  TemmeGammas g;
  g.gam2 = even;
  g.gam1 = -odd;
  g.gampl = even + mu * odd;
  g.gammi = even - mu * odd;
  return g;
}

struct KPair {
  double k_mu;
  double k_mu1;
};

// e^x K_μ(x) and e^x K_{μ+1}(x) for |μ| <= 1/2, x <= 2.
KPair temme_series_scaled(double mu, double x) {
  const double x2 = 0.5 * x;
  const double pimu = kPi * mu;
  const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
  double d = -std::log(x2);
  double e = mu * d;
  const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
  const TemmeGammas g = temme_gammas(mu);
  double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
  double sum = ff;
  e = std::exp(e);
  double p = 0.5 * e / g.gampl;
  double q = 0.5 / (e * g.gammi);
  double c = 1.0;
  d = x2 * x2;
  double sum1 = p;
  for (int i = 1; i < 100000; ++i) {
    const double di = i;
    ff = (di * ff + p + q) / (di * di - mu * mu);
    c *= d / di;
    p /= di - mu;
    q /= di + mu;
    const double del = c * ff;
    sum += del;
    sum1 += c * (p - di * ff);
    if (std::abs(del) < std::abs(sum) * kEps) {
      const double scale = std::exp(x);
      return {sum * scale, sum1 * (2.0 / x) * scale};
    }
  }
  throw NumericError("bessel_k: Temme series failed to converge");
}

// e^x K_μ(x) and e^x K_{μ+1}(x) for |μ| <= 1/2, x > 2 (Steed's CF2).
KPair steed_cf2_scaled(double mu, double x) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double delh = d;
  double h = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25 - mu * mu;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 100000; ++i) {
    const double di = i;
    a -= 2.0 * di;
    c = -a * c / (di + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) {
      h *= a1;
      const double k_mu = std::sqrt(kPi / (2.0 * x)) / s;
      const double k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
      return {k_mu, k_mu1};
    }
  }
  throw NumericError("bessel_k: continued fraction failed to converge");
}

}  // namespace

double sin_pi(double x) {
  double r = std::fmod(x, 2.0);  // exact
  if (r < 0.0) r += 2.0;
  if (r > 1.0) return -sin_pi(r - 1.0);
  if (r > 0.5) r = 1.0 - r;
  return std::sin(kPi * r);
}

double std_normal_sf(double x) { return 0.5 * std::erfc(x * kSqrt1_2); }

double log_mills_ratio(double x) {
  if (x < 30.0) return std::log(std_normal_sf(x)) + 0.5 * x * x + kHalfLog2Pi;
  // x^{-1}(1 - x^{-2} + 3x^{-4} - 15x^{-6} + ...)
  const double r = 1.0 / (x * x);
  const double series =
      1.0 + r * (-1.0 + r * (3.0 + r * (-15.0 + r * (105.0 + r * (-945.0 + r * 10395.0)))));
  return std::log(series) - std::log(x);
}

double log_std_normal_sf(double x) {
  if (x < 30.0) return std::log(std_normal_sf(x));
  return log_mills_ratio(x) - 0.5 * x * x - kHalfLog2Pi;
}

double std_normal_cdf(double x) {
  if (x < 0.0) return std_normal_sf(-x);
  return 1.0 - std_normal_sf(x);
}

LogGamma log_gamma(double x) {
  if (std::isnan(x)) return {x, 0};
  if (x <= 0.0 && x == std::floor(x)) return {kInf, 0};
  if (x >= 0.5) return {log_gamma_positive(x), 1};
  // Γ(x)Γ(1-x) = π / sin(πx); Γ(1-x) > 0 here.
  const double s = sin_pi(x);
  const double value = std::log(kPi) - std::log(std::abs(s)) - log_gamma_positive(1.0 - x);
  return {value, s > 0.0 ? 1 : -1};
}

double bessel_k_scaled(double order, double x) {
  if (!(x > 0.0)) {
    std::ostringstream msg;
    msg << "bessel_k: argument must be > 0, got " << x;
    throw std::domain_error(msg.str());
  }
  const double nu = std::abs(order);
  if (!std::isfinite(nu)) throw std::domain_error("bessel_k: order must be finite");
  const int steps = static_cast<int>(std::floor(nu + 0.5));
  const double mu = nu - steps;  // |mu| <= 1/2
  KPair k = x <= 2.0 ? temme_series_scaled(mu, x) : steed_cf2_scaled(mu, x);
  const double two_over_x = 2.0 / x;
  for (int i = 1; i <= steps; ++i) {
    const double next = (mu + i) * two_over_x * k.k_mu1 + k.k_mu;
    k.k_mu = k.k_mu1;
    k.k_mu1 = next;
  }
  return k.k_mu;
}

double bessel_k(double order, double x) {
  return bessel_k_scaled(order, x) * std::exp(-x);
}

double log_bessel_k(double order, double x) {
  return std::log(bessel_k_scaled(order, x)) - x;
}

}  // namespace glmix
