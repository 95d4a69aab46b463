#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "glmix/densities.hpp"
#include "glmix/rng.hpp"
#include "glmix/samplers.hpp"
#include "glmix/transforms.hpp"

using namespace glmix;

namespace {

// CDF by direct quadrature from the lower end of the support.
std::function<double(double)> quadrature_cdf(const ScalarDensity& f) {
  return [f](double x) {
    if (x <= f.support().lower()) return 0.0;
    return integrate([&](double t) { return f.pdf(t); }, Interval(f.support().lower(), x), 1e-14,
                     1e-12)
        .value;
  };
}

ScalarDensity triangular() {
  return ScalarDensity(Interval(-1.0, 1.0), [](double x) { return std::log1p(-std::abs(x)); },
                       true, "triangular")
      .with_landmarks({0.0});
}

double triangular_cdf(double x) {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x < 0.0 ? 0.5 * (1.0 + x) * (1.0 + x) : 1.0 - 0.5 * (1.0 - x) * (1.0 - x);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Rng, DeterministicOpenUniforms) {
  Rng a(7);
  Rng b(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    EXPECT_EQ(u, b.uniform());
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  Rng c(7);
  Rng s0 = c.split(0);
  Rng s1 = c.split(1);
  c();  // position of the parent does not affect children
  EXPECT_NE(s0(), s1());
  EXPECT_EQ(Rng(7).split(0)(), Rng(7).split(0)());
  EXPECT_NE(Rng(7)(), Rng(8)());
}

TEST(Ks, Examples) {
  EXPECT_DOUBLE_EQ(ks_statistic(std::vector<double>{0.0}, std_normal_cdf), 0.5);
  EXPECT_THROW(ks_statistic(std::vector<double>{}, std_normal_cdf), std::invalid_argument);
  const auto normals = inverse_cdf_sample(normal_density(0, 1), 20000, 3);
  EXPECT_GT(ks_statistic(normals, [](double x) { return cauchy_cdf(x, 0, 1); }), 0.05);
}

TEST(Ks, NullDistributionAtOnePercent) {
  const auto table = QuantileTable::build(normal_density(0, 1));
  int below = 0;
  const std::size_t n = 20000;
  for (std::uint64_t r = 0; r < 100; ++r) {
    below += ks_statistic(inverse_cdf_sample(table, n, 1000 + r), std_normal_cdf) <
             ks_critical_value_1pct(n);
  }
  EXPECT_GE(below, 97);
}

TEST(QuantileTable, RoundTripAndCoverage) {
  for (const auto& f : {normal_density(0, 1), cauchy_density(0, 1), exponential_density(1.0),
                        gig_density({1, 1, 1})}) {
    const auto t = QuantileTable::build(f);
    ASSERT_EQ(t.grid().size(), 4096u);
    EXPECT_LE(t.grid().front(), 1e-6);
    EXPECT_GE(t.grid().back(), 1.0 - 1e-6);
    for (std::size_t k = 0; k < t.grid().size(); k += 37) {
      EXPECT_NEAR(t.cdf(t.quantiles()[k]), t.grid()[k], 1e-10) << f.description();
      if (k + 1 < t.grid().size()) {
        const double p = 0.5 * (t.grid()[k] + t.grid()[k + 1]);
        EXPECT_NEAR(t.cdf(t.quantile(p)), p, 1e-6) << f.description();
      }
    }
    // Outside the table.
    EXPECT_NEAR(t.cdf(t.quantile(1e-9)), 1e-9, 1e-12) << f.description();
    EXPECT_NEAR(t.cdf(t.quantile(1.0 - 1e-9)), 1.0 - 1e-9, 1e-12) << f.description();
  }
  EXPECT_NEAR(QuantileTable::build(normal_density(0, 1)).quantile(0.975), 1.959963984540054,
              1e-9);
  EXPECT_NEAR(QuantileTable::build(cauchy_density(0, 1)).quantile(0.75), 1.0, 1e-9);
}

TEST(InverseCdf, ExponentialMean) {
  const std::size_t n = 100000;
  const auto b = inverse_cdf_sample(exponential_density(1.0), n, 11);
  double mean = 0.0;
  for (double v : b.values) mean += v;
  mean /= static_cast<double>(n);
  EXPECT_LT(std::abs(mean - 1.0), 3.0 / std::sqrt(static_cast<double>(n)));
  EXPECT_EQ(b.method, "inverse_cdf");
}

TEST(InverseCdf, DaughterAndGigPassKs) {
  const std::size_t n = 100000;
  const auto daughter = daughter_density(half_normal_density(), 1.0, 1.0);
  EXPECT_LT(ks_statistic(inverse_cdf_sample(daughter, n, 5), quadrature_cdf(daughter)),
            ks_critical_value_1pct(n));
  const auto gig = gig_density({1, 1, 1});
  EXPECT_LT(ks_statistic(inverse_cdf_sample(gig, n, 6), quadrature_cdf(gig)),
            ks_critical_value_1pct(n));
  EXPECT_THROW(inverse_cdf_sample(daughter_density_scaled(half_normal_density(), 1, 1, 2), 10, 1),
               std::invalid_argument);
}

TEST(Khintchine, ZDensities) {
  const auto zl = khintchine_z_density(laplace_density(0, 1));
  for (double z : {-3.0, -0.4, 0.7, 5.0}) {
    EXPECT_NEAR(zl.pdf(z), 0.5 * std::abs(z) * std::exp(-std::abs(z)), 1e-15);
  }
  const auto zn = khintchine_z_density(normal_density(0, 1));
  EXPECT_NEAR(zn.pdf(1.3), 1.3 * 1.3 * normal_pdf(1.3, 0, 1), 1e-15);
  // −z f'(z) = |z| for the triangular density.
  const auto zt = khintchine_z_density(triangular());
  for (double z : {-0.8, -0.25, 0.5, 0.9}) EXPECT_NEAR(zt.pdf(z), std::abs(z), 1e-8);
  EXPECT_THROW(khintchine_z_density(normal_density(2, 1)), std::invalid_argument);
}

TEST(Khintchine, LaplaceAndNormalPassKs) {
  const std::size_t n = 100000;
  for (std::uint64_t seed : {1u, 2u}) {
    const auto bl = khintchine_sample(laplace_density(0, 1), n, seed);
    EXPECT_LT(ks_statistic(bl, [](double x) { return laplace_cdf(x, 0, 1); }),
              ks_critical_value_1pct(n));
    const auto bn = khintchine_sample(normal_density(0, 1), n, seed);
    EXPECT_LT(ks_statistic(bn, std_normal_cdf), ks_critical_value_1pct(n));
  }
  const auto bt = khintchine_sample(triangular(), n, 9);
  EXPECT_LT(ks_statistic(bt, triangular_cdf), ks_critical_value_1pct(n));
}

TEST(Samplers, DeterministicAndCsv) {
  const auto a = khintchine_sample(laplace_density(0, 1), 10000, 42);
  const auto b = khintchine_sample(laplace_density(0, 1), 10000, 42);
  EXPECT_EQ(a.values, b.values);
  const auto c = khintchine_sample(laplace_density(0, 1), 10000, 43);
  EXPECT_NE(a.values, c.values);
  const std::string p1 = testing::TempDir() + "glmix_a.csv";
  const std::string p2 = testing::TempDir() + "glmix_b.csv";
  write_csv(a, p1);
  write_csv(b, p2);
  const std::string s1 = slurp(p1);
  EXPECT_EQ(s1, slurp(p2));
  EXPECT_EQ(s1.rfind("value\n", 0), 0u);
  EXPECT_EQ(std::count(s1.begin(), s1.end(), '\n'), 10001);
  EXPECT_THROW(write_csv(a, "/nonexistent/dir/x.csv"), std::runtime_error);
}
