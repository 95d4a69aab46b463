#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "glmix/numeric.hpp"

using namespace glmix;

namespace {

const double kSqrtPi = std::sqrt(kPi);

// erf by its Maclaurin series in long double; independent of std::erfc.
long double erf_series(long double x) {
  long double term = x;
  long double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= -x * x / n;
    sum += term / (2 * n + 1);
  }
  return 2.0L / std::sqrt(3.14159265358979323846264338327950288L) * sum;
}

// K_ν(x) = ∫_0^∞ exp(-x cosh t) cosh(νt) dt, integrated as e^x K_ν(x).
double bessel_k_integral(double nu, double x) {
  const auto f = [&](double t) {
    const double sh = std::sinh(0.5 * t);
    const double e = -2.0 * x * sh * sh;
    return 0.5 * (std::exp(e + nu * t) + std::exp(e - nu * t));
  };
  const auto r = integrate(f, Interval(0.0, kInf), 1e-300, 1e-13);
  EXPECT_TRUE(r.converged) << nu << " " << x;
  return r.value * std::exp(-x);
}

}  // namespace

TEST(Interval, RejectsEmpty) {
  EXPECT_THROW(Interval(1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Interval(2.0, 1.0), std::invalid_argument);
  EXPECT_NO_THROW(Interval(-kInf, kInf));
}

TEST(Integrate, GaussianHalfLine) {
  const auto r = integrate([](double y) { return std::exp(-y * y); },
                           Interval::positive_half_line(), 1e-12, 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, kSqrtPi / 2.0, 1e-12);
  EXPECT_GE(r.evaluations, 1u);
}

TEST(Integrate, UnitConstant) {
  const auto r = integrate([](double) { return 1.0; }, Interval(0.0, 1.0), 1e-12, 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 1.0, 1e-15);
}

TEST(Integrate, LassoKernel) {
  // ∫_0^∞ exp(-(x - 1/x)^2) dx = √π / 2
  const auto r = integrate([](double x) { return std::exp(-std::pow(x - 1.0 / x, 2)); },
                           Interval::positive_half_line(), 1e-12, 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, kSqrtPi / 2.0, 1e-11);
}

TEST(Integrate, PolynomialExactness) {
  // The 21-point Kronrod rule integrates degree-31 polynomials exactly; a
  // single panel already meets the tolerance.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int degree : {0, 1, 5, 12, 20, 31}) {
    std::vector<double> c(degree + 1);
    for (auto& v : c) v = coef(rng);
    const auto p = [&](double x) {
      double acc = 0.0;
      for (int k = degree; k >= 0; --k) acc = acc * x + c[k];
      return acc;
    };
    double exact = 0.0;
    for (int k = 0; k <= degree; ++k) {
      exact += c[k] * (std::pow(2.0, k + 1) - std::pow(-1.0, k + 1)) / (k + 1);
    }
    const auto r = integrate(p, Interval(-1.0, 2.0), 1e-13, 1e-13);
    EXPECT_NEAR(r.value, exact, 1e-13 * std::max(1.0, std::abs(exact))) << "degree " << degree;
  }
}

struct KnownIntegral {
  const char* name;
  Integrand f;
  Interval domain;
  double truth;
};

TEST(Integrate, OracleSoundness) {
  const std::vector<KnownIntegral> cases = {
      {"exp", [](double x) { return std::exp(-x); }, Interval(0, kInf), 1.0},
      {"gauss_line", [](double x) { return std::exp(-0.5 * x * x); }, Interval(-kInf, kInf),
       std::sqrt(2 * kPi)},
      {"cauchy", [](double x) { return 1.0 / (1 + x * x); }, Interval(-kInf, kInf), kPi},
      {"inv_sqrt", [](double x) { return 1.0 / std::sqrt(x); }, Interval(0, 1), 2.0},
      {"arcsine", [](double x) { return 1.0 / std::sqrt(1 - x * x); }, Interval(-1, 1), kPi},
      {"log", [](double x) { return std::log(x); }, Interval(0, 1), -1.0},
      {"sin", [](double x) { return std::sin(x); }, Interval(0, kPi), 2.0},
      {"cos2", [](double x) { return std::cos(x) * std::cos(x); }, Interval(0, 2 * kPi), kPi},
      {"x2exp", [](double x) { return x * x * std::exp(-x); }, Interval(0, kInf), 2.0},
      {"gamma_half", [](double x) { return std::exp(-x) / std::sqrt(x); }, Interval(0, kInf),
       kSqrtPi},
      {"sech2", [](double x) { return 1.0 / std::pow(std::cosh(x), 2); }, Interval(-kInf, kInf),
       2.0},
      {"rational", [](double x) { return 1.0 / ((1 + x) * (1 + x)); }, Interval(0, kInf), 1.0},
      {"lorentz_narrow", [](double x) { return 0.01 / (x * x + 1e-4); }, Interval(-1, 1),
       2 * std::atan(100.0)},
      {"abs", [](double x) { return std::abs(x - 0.3); }, Interval(0, 1), 0.29},
      {"sqrt", [](double x) { return std::sqrt(x); }, Interval(0, 4), 16.0 / 3.0},
      {"exp_left", [](double x) { return std::exp(x); }, Interval(-kInf, 0), 1.0},
      {"logistic_pdf", [](double x) { return 0.25 / std::pow(std::cosh(0.5 * x), 2); },
       Interval(-kInf, kInf), 1.0},
      {"beta22", [](double x) { return 6 * x * (1 - x); }, Interval(0, 1), 1.0},
      {"x_inv_sq", [](double x) { return 1.0 / (x * x); }, Interval(1, kInf), 1.0},
      {"step", [](double x) { return x < 0.5 ? 1.0 : 0.0; }, Interval(0, 1), 0.5},
  };
  ASSERT_EQ(cases.size(), 20u);
  const double abs_tol = 1e-10;
  const double rel_tol = 1e-10;
  for (const auto& c : cases) {
    const auto r = integrate(c.f, c.domain, abs_tol, rel_tol);
    if (r.converged) {
      EXPECT_LE(std::abs(r.value - c.truth), std::max(abs_tol, rel_tol * std::abs(c.truth)))
          << c.name;
      EXPECT_LE(r.abs_error_estimate, std::max(abs_tol, rel_tol * std::abs(r.value))) << c.name;
    }
    EXPECT_TRUE(r.converged) << c.name;
  }
}

TEST(Integrate, NaNIsHardError) {
  EXPECT_THROW(integrate([](double x) { return x > 0.5 ? std::nan("") : 1.0; },
                         Interval(0, 1), 1e-10, 1e-10),
               NumericError);
}

TEST(Integrate, BudgetExhaustionIsReported) {
  QuadOptions opts;
  opts.abs_tol = 1e-14;
  opts.rel_tol = 1e-14;
  opts.max_evaluations = 200;
  const auto r = integrate([](double x) { return std::sin(1.0 / x); }, Interval(0, 1), opts);
  EXPECT_FALSE(r.converged);
  EXPECT_LE(r.evaluations, 200u);
}

TEST(Integrate, DepthLimitIsReported) {
  QuadOptions opts;
  opts.abs_tol = 1e-15;
  opts.rel_tol = 1e-15;
  opts.max_depth = 3;
  const auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, Interval(0, 1), opts);
  EXPECT_FALSE(r.converged);
}

TEST(Integrate, LogScaleHandlesTinyScales) {
  // ∫ a/(√(2π) t^{3/2}) e^{-a²/(2t)} dt = 1 for any a > 0.
  for (double a : {1e-3, 1.0, 30.0}) {
    const auto r = integrate_log_scale(
        [a](double t) {
          return a / std::sqrt(2 * kPi) *
                 std::exp(-1.5 * std::log(t) - a * a / (2 * t) - t * 1e-8);
        },
        1e-13, 1e-12, a * a);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, std::exp(-a * std::sqrt(2e-8)), 1e-10) << a;
  }
}

TEST(StdNormalCdf, KnownValues) {
  EXPECT_EQ(std_normal_cdf(0.0), 0.5);
  EXPECT_EQ(std_normal_cdf(40.0), 1.0);
  const double oracle = 0.5 + 0.5 * static_cast<double>(erf_series(1.0L / std::sqrt(2.0L)));
  EXPECT_NEAR(std_normal_cdf(1.0), oracle, 1e-14);
  EXPECT_NEAR(std_normal_cdf(1.0), 0.841344746068542949, 1e-15);
}

TEST(StdNormalCdf, SymmetryAndMonotonicity) {
  double prev = 0.0;
  for (int i = 0; i <= 1600; ++i) {
    const double x = -8.0 + i * 0.01;
    const double p = std_normal_cdf(x);
    EXPECT_NEAR(p + std_normal_cdf(-x), 1.0, 1e-15) << x;
    EXPECT_GE(p, prev);
    prev = p;
    if (std::abs(x) <= 3.0) {
      EXPECT_NEAR(p, 0.5 + 0.5 * static_cast<double>(erf_series(x / std::sqrt(2.0L))), 1e-14);
    }
  }
}

TEST(LogGamma, KnownValues) {
  EXPECT_EQ(log_gamma(1.0).value, 0.0);
  EXPECT_EQ(log_gamma(1.0).sign, 1);
  EXPECT_NEAR(log_gamma(0.5).value, std::log(kSqrtPi), 1e-15);
  // Γ(7.25) = 6.25·5.25·4.25·3.25·2.25·1.25·Γ(1.25) with Γ(1.25) from Euler's integral.
  const double gamma_125 =
      integrate([](double t) { return std::pow(t, 0.25) * std::exp(-t); },
                Interval(0, kInf), 1e-300, 1e-14)
          .value;
  const double oracle = std::log(6.25 * 5.25 * 4.25 * 3.25 * 2.25 * 1.25 * gamma_125);
  EXPECT_NEAR(log_gamma(7.25).value, oracle, 1e-13);
  EXPECT_NEAR(log_gamma(7.25).value, 7.0521854507385394449, 1e-13);
}

TEST(LogGamma, ReflectionAndPoles) {
  const auto p = log_gamma(-2.0);
  EXPECT_EQ(p.sign, 0);
  EXPECT_TRUE(std::isinf(p.value));
  EXPECT_EQ(log_gamma(0.0).sign, 0);
  // Γ(-0.3) < 0, Γ(-2.5) < 0, Γ(-1.5) > 0
  EXPECT_EQ(log_gamma(-0.3).sign, -1);
  EXPECT_NEAR(log_gamma(-0.3).value, 1.4648400508576025305, 1e-13);
  EXPECT_EQ(log_gamma(-2.5).sign, -1);
  EXPECT_NEAR(log_gamma(-2.5).value, -0.056243716497674050673, 1e-13);
  EXPECT_EQ(log_gamma(-1.5).sign, 1);
  // Recurrence Γ(x+1) = xΓ(x) across the reflection boundary.
  for (double x : {-7.3, -3.9, -0.7, 0.2, 0.45, 3.3, 25.5}) {
    const auto lhs = log_gamma(x + 1.0);
    const auto rhs = log_gamma(x);
    EXPECT_NEAR(lhs.value, rhs.value + std::log(std::abs(x)), 1e-12) << x;
    EXPECT_EQ(lhs.sign, rhs.sign * (x > 0 ? 1 : -1)) << x;
  }
}

TEST(BesselK, HalfIntegerClosedForm) {
  EXPECT_NEAR(bessel_k(0.5, 1.0) / (std::sqrt(kPi / 2) * std::exp(-1.0)), 1.0, 1e-14);
  EXPECT_NEAR(bessel_k(0.5, 2.0) / (std::sqrt(kPi / 4) * std::exp(-2.0)), 1.0, 1e-14);
  for (double x = 0.01; x <= 30.0; x *= 1.1) {
    const double closed = std::sqrt(kPi / (2 * x)) * std::exp(-x);
    EXPECT_NEAR(bessel_k(0.5, x) / closed, 1.0, 1e-12) << x;
  }
}

TEST(BesselK, MatchesIntegralRepresentation) {
  EXPECT_NEAR(bessel_k(1.0, 1.0), bessel_k_integral(1.0, 1.0), 1e-13);
  EXPECT_NEAR(bessel_k(1.0, 1.0), 0.60190723019723457474, 1e-14);
  for (double nu : {0.0, 0.3, 1.0, 2.7, 4.5, 10.0}) {
    for (double x : {1e-3, 0.05, 0.7, 1.99, 2.0, 2.01, 5.0, 13.0, 50.0}) {
      if (nu == 10.0 && x < 0.05) continue;  // cosh(νt) overflows the oracle's range
      const double oracle = bessel_k_integral(nu, x);
      EXPECT_NEAR(bessel_k(nu, x) / oracle, 1.0, 1e-10) << nu << " " << x;
    }
  }
  // Against 40-digit reference values.
  EXPECT_NEAR(bessel_k(10.0, 0.001) / 1.8579455483904004196e38, 1.0, 1e-12);
  EXPECT_NEAR(bessel_k(10.0, 50.0) / 9.150988209987996111e-23, 1.0, 1e-12);
  EXPECT_NEAR(bessel_k(0.3, 0.01) / 6.8901026382927695432, 1.0, 1e-12);
}

TEST(BesselK, AgreesWithLibstdcxx) {
  for (double nu : {0.0, 0.3, 1.0, 2.5, 7.2, 10.0}) {
    for (double x : {1e-3, 0.1, 1.0, 2.0, 3.3, 10.0, 50.0}) {
      EXPECT_NEAR(bessel_k(nu, x) / std::cyl_bessel_k(nu, x), 1.0, 1e-10) << nu << " " << x;
    }
  }
}

TEST(BesselK, ContinuousAcrossCrossover) {
  for (double nu : {0.0, 0.25, 1.0, 3.5}) {
    const double below = bessel_k(nu, 2.0);
    const double above = bessel_k(nu, std::nextafter(2.0, 3.0));
    EXPECT_NEAR(below / above, 1.0, 1e-13) << nu;
  }
  EXPECT_NEAR(log_bessel_k(2.0, 800.0), std::log(bessel_k_scaled(2.0, 800.0)) - 800.0, 1e-12);
  EXPECT_THROW(bessel_k(1.0, 0.0), std::domain_error);
  EXPECT_EQ(bessel_k(-1.5, 3.0), bessel_k(1.5, 3.0));
}

TEST(AlternatingSeries, Examples) {
  SeriesOptions opts;
  opts.tol = 1e-5;
  const auto harmonic = alternating_series(
      [](std::size_t n) { return (n % 2 ? -1.0 : 1.0) / (n + 1.0); }, opts);
  EXPECT_NEAR(harmonic.value, std::log(2.0), harmonic.truncation_bound);
  EXPECT_LE(harmonic.truncation_bound, 1e-5);

  const auto sine = alternating_series(
      [](std::size_t n) {
        double t = 1.0;
        for (std::size_t k = 1; k <= 2 * n + 1; ++k) t /= static_cast<double>(k);
        return (n % 2 ? -1.0 : 1.0) * t;
      },
      1e-16);
  EXPECT_NEAR(sine.value, std::sin(1.0), 1e-16);
  EXPECT_GE(sine.terms_used, 1u);
}

TEST(AlternatingSeries, AveragedTailReachesTightTolerance) {
  SeriesOptions opts;
  opts.tol = 1e-10;
  opts.average_tail = true;
  const auto r = alternating_series(
      [](std::size_t n) { return (n % 2 ? -1.0 : 1.0) / (n + 1.0); }, opts);
  EXPECT_LE(r.truncation_bound, 1e-10);
  EXPECT_NEAR(r.value, std::log(2.0), 1e-10);
  EXPECT_LT(r.terms_used, 200000u);
}

TEST(AlternatingSeries, TruncationBoundIsAnUpperBound) {
  const auto term = [](std::size_t n) { return (n % 2 ? -1.0 : 1.0) / std::pow(n + 1.0, 1.5); };
  double tol = 1e-2;
  auto prev = alternating_series(term, tol);
  for (int k = 0; k < 4; ++k) {
    tol /= 10;
    const auto next = alternating_series(term, tol);
    EXPECT_LT(std::abs(next.value - prev.value), prev.truncation_bound);
    prev = next;
  }
}

TEST(AlternatingSeries, ErrorPaths) {
  SeriesOptions opts;
  opts.tol = 1e-12;
  opts.max_terms = 1000;
  EXPECT_THROW(alternating_series([](std::size_t n) { return (n % 2 ? -1.0 : 1.0) / (n + 1.0); },
                                  opts),
               NumericError);
  opts.max_terms = 100000;
  EXPECT_THROW(alternating_series([](std::size_t n) { return (n % 2 ? -1.0 : 1.0) * (n + 1.0); },
                                  opts),
               NumericError);
}
