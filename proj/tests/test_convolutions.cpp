#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "glmix/convolutions.hpp"
#include "glmix/densities.hpp"

using namespace glmix;

namespace {

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> z;
  for (int i = 0; i < n; ++i) z.push_back(lo + (hi - lo) * i / (n - 1));
  return z;
}

}  // namespace

TEST(ConvolvePdf, Examples) {
  const auto n = normal_density(0, 1);
  EXPECT_NEAR(convolve_pdf(n, n, 0.0, 1e-12).value, 1.0 / std::sqrt(4.0 * kPi), 1e-12);
  const auto c = cauchy_density(0, 1);
  EXPECT_NEAR(convolve_pdf(c, c, 0.0, 1e-12).value, 1.0 / (2.0 * kPi), 1e-12);
  const auto e = exponential_density(1.0);
  EXPECT_NEAR(convolve_pdf(e, e, 1.0, 1e-12).value, std::exp(-1.0), 1e-12);
  EXPECT_EQ(convolve_pdf(e, e, -1.0, 1e-12).value, 0.0);
  const auto unnormalized =
      ScalarDensity(Interval::real_line(), [](double x) { return -x * x; }, false, "g");
  EXPECT_THROW(convolve_pdf(n, unnormalized, 0.0, 1e-10), std::invalid_argument);
}

TEST(Cauchy, Closure) {
  const auto z = grid(-20, 20, 41);
  EXPECT_TRUE(verify_cauchy_sum(1, 1, {0.0}, 1e-12).pass);
  const auto far = verify_cauchy_sum(1, 1, {100.0}, 1e-10);
  EXPECT_TRUE(far.pass) << far.abs_err;
  EXPECT_NEAR(far.rhs, 2.0 / (kPi * 10004.0), 1e-18);
  const auto r = verify_cauchy_sum(0.3, 0.7, grid(-5, 5, 11), 1e-10);
  EXPECT_TRUE(r.pass) << r.abs_err;
  EXPECT_EQ(r.identity_id, "convolution.cauchy_sum");
  for (auto [w1, w2] : {std::pair{0.05, 3.0}, std::pair{2.5, 0.4}}) {
    EXPECT_TRUE(verify_cauchy_sum(w1, w2, z, 1e-7).pass);
  }
  const auto r3 = verify_cauchy_sum3(0.2, 0.5, 1.3, z, 1e-7);
  EXPECT_TRUE(r3.pass) << r3.abs_err;
  EXPECT_THROW(verify_cauchy_sum(0, 1, z, 1e-7), std::invalid_argument);
}

TEST(Cauchy, CharacteristicFunction) {
  for (double t : {0.5, 1.0, 2.0}) {
    const auto r = verify_cauchy_characteristic(0.4, 0.9, t, 1e-5);
    EXPECT_TRUE(r.pass) << t << " " << r.abs_err;
  }
}

TEST(Wynn, AcceleratesAlternatingSeries) {
  std::vector<double> s;
  double acc = 0.0;
  for (int k = 0; k < 20; ++k) {
    acc += (k % 2 == 0 ? 1.0 : -1.0) / (2 * k + 1);
    s.push_back(acc);
  }
  EXPECT_NEAR(wynn_epsilon(s), kPi / 4, 1e-12);
  EXPECT_EQ(wynn_epsilon({3.0}), 3.0);
}

TEST(InverseGaussian, Closure) {
  // mpmath convolution oracle.
  const auto f = inverse_gaussian_density(1, 1);
  EXPECT_NEAR(convolve_pdf(f, f, 2.0, 1e-13).value, 0.28209479177387814347, 1e-12);
  EXPECT_NEAR(inverse_gaussian_mean_shape_pdf(2, 4, 2), 0.28209479177387814347, 1e-15);
  const auto g = inverse_gaussian_density(0.5, 2);
  EXPECT_NEAR(convolve_pdf(inverse_gaussian_density(0.5, 1), g, 3.0, 1e-13).value,
              0.076933161402727629786, 1e-12);

  const auto r = verify_invgauss_sum(0.5, 1, 2, grid(0.5, 8, 16), 1e-7);
  EXPECT_TRUE(r.pass) << r.abs_err;
  EXPECT_GT(invgauss_printed_shape_residual(0.5, 1, 2, grid(0.5, 8, 16), 1e-7), 1e-3);
  EXPECT_NE(r.notes.find("residual"), std::string::npos);

  // Degenerate second summand.
  const double t2 = 1e-8;
  for (double z : {0.5, 1.0, 2.0}) {
    const double v = convolve_pdf(inverse_gaussian_density(1, 1), inverse_gaussian_density(1, t2),
                                  z, 1e-12)
                         .value;
    EXPECT_NEAR(v, inverse_gaussian_pdf(1, 1, z), 1e-6);
  }
}

TEST(PillaiMeng, ThreeConfigurations) {
  const auto start = std::chrono::steady_clock::now();
  Eigen::MatrixXd s1(1, 1);
  s1 << 1;
  Eigen::MatrixXd s2(2, 2);
  s2 << 1, 0.9, 0.9, 1;
  Eigen::MatrixXd s3 = Eigen::MatrixXd::Constant(3, 3, 0.5);
  s3.diagonal().setOnes();
  const std::size_t n = 100000;
  const auto r1 = simulate_pillai_meng(s1, {{1.0}}, n, 1);
  const auto r2 = simulate_pillai_meng(s2, {{0.5, 0.5}}, n, 2);
  const auto r3 = simulate_pillai_meng(s3, {{1.0 / 3, 1.0 / 3, 1.0 / 3}}, n, 3);
  for (const auto& r : {r1, r2, r3}) {
    EXPECT_TRUE(r.pass) << r.statistic;
    EXPECT_NEAR(r.critical, 1.628 / std::sqrt(1e5), 1e-15);
  }
  EXPECT_EQ(simulate_pillai_meng(s2, {{0.5, 0.5}}, 5000, 9).statistic,
            simulate_pillai_meng(s2, {{0.5, 0.5}}, 5000, 9).statistic);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 20);

  Eigen::MatrixXd bad(2, 2);
  bad << 1, 2, 2, 1;
  EXPECT_THROW(simulate_pillai_meng(bad, {{0.5, 0.5}}, 10, 1), std::invalid_argument);
  EXPECT_THROW(simulate_pillai_meng(s2, {{0.5, 0.6}}, 10, 1), std::invalid_argument);
  EXPECT_THROW(simulate_pillai_meng(s2, {{1.0}}, 10, 1), std::invalid_argument);
}
