#include "glmix/convolutions.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "glmix/densities.hpp"
#include "glmix/rng.hpp"
#include "glmix/samplers.hpp"

namespace glmix {

namespace {

void require_normalized(const ScalarDensity& f) {
  if (!f.normalized()) {
    throw std::invalid_argument("convolve_pdf: '" + f.description() + "' is not normalized");
  }
}

struct GridResidual {
  double worst_z = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double max_err = -1.0;
  bool converged = true;
};

template <class Conv, class Closed>
GridResidual scan(const std::vector<double>& z_grid, Conv conv, Closed closed) {
  if (z_grid.empty()) throw std::invalid_argument("z_grid is empty");
  GridResidual out;
  for (double z : z_grid) {
    const QuadResult q = conv(z);
    out.converged = out.converged && q.converged;
    const double c = closed(z);
    const double e = std::abs(q.value - c);
    if (e > out.max_err) out = {z, q.value, c, e, out.converged};
  }
  return out;
}

VerificationRecord grid_record(std::string id, ParamList params, const GridResidual& g,
                               std::size_t points, double tol) {
  auto r = make_record(std::move(id), std::move(params), g.lhs, g.rhs, tol,
                       fmt::format("worst of {} grid points at z = {:.6g}", points, g.worst_z));
  if (!g.converged) r.notes += "; some convolution quadratures did not converge";
  return r;
}

}  // namespace

void validate(const WeightVector& w, bool unit_sum) {
  if (w.weights.empty()) throw std::invalid_argument("weights: empty");
  double sum = 0.0;
  bool any = false;
  for (double v : w.weights) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("weights must be >= 0");
    any = any || v > 0.0;
    sum += v;
  }
  if (!any) throw std::invalid_argument("weights: at least one must be > 0");
  if (unit_sum && std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument(fmt::format("weights sum to {:.17g}, not 1", sum));
  }
}

QuadResult convolve_pdf(const ScalarDensity& f, const ScalarDensity& g, double z, double tol) {
  require_normalized(f);
  require_normalized(g);
  if (!(tol > 0.0)) throw std::invalid_argument("convolve_pdf: tol must be > 0");
  const double fl = f.support().lower();
  const double fu = f.support().upper();
  const double gl = g.support().lower();
  const double gu = g.support().upper();
  const double lo = std::max(fl, z - gu);
  const double hi = std::min(fu, z - gl);
  QuadResult empty;
  empty.converged = true;
  empty.evaluations = 1;
  if (!(hi > lo)) return empty;

  QuadOptions o;
  o.abs_tol = tol;
  o.rel_tol = tol;
  const auto product = [&](double x, double y) {
    const double a = f.log_pdf(x);
    if (a == -kInf) return 0.0;
    const double b = g.log_pdf(y);
    return b == -kInf ? 0.0 : std::exp(a + b);
  };

  if (std::isfinite(lo) && std::isfinite(hi)) {
    // x = lo + e^u on the left half and y = z - x = (z - hi) + e^u on the
    // right half, so neither argument is formed by cancellation.
    const double half = 0.5 * (hi - lo);
    const double top = std::log(half);
    QuadOptions left = o;
    QuadOptions right = o;
    for (double m : f.landmarks()) {
      if (m > lo && m - lo < half) left.breakpoints.push_back(std::log(m - lo));
    }
    const double ylo = z - hi;
    for (double m : g.landmarks()) {
      if (m > ylo && m - ylo < half) right.breakpoints.push_back(std::log(m - ylo));
    }
    const QuadResult a = integrate(
        [&](double u) {
          const double e = std::exp(u);
          return e == 0.0 ? 0.0 : product(lo + e, z - lo - e) * e;
        },
        Interval(-kInf, top), left);
    const QuadResult b = integrate(
        [&](double u) {
          const double e = std::exp(u);
          return e == 0.0 ? 0.0 : product(hi - e, ylo + e) * e;
        },
        Interval(-kInf, top), right);
    return {a.value + b.value, a.abs_error_estimate + b.abs_error_estimate,
            a.evaluations + b.evaluations, a.converged && b.converged};
  }
  for (double m : f.landmarks()) o.breakpoints.push_back(m);
  for (double m : g.landmarks()) o.breakpoints.push_back(z - m);
  return integrate([&](double x) { return product(x, z - x); }, Interval(lo, hi), o);
}

ScalarDensity convolution_density(const ScalarDensity& f, const ScalarDensity& g, double tol) {
  require_normalized(f);
  require_normalized(g);
  const Interval support(f.support().lower() + g.support().lower(),
                         f.support().upper() + g.support().upper());
  std::vector<double> marks;
  for (double a : f.landmarks()) {
    for (double b : g.landmarks()) marks.push_back(a + b);
  }
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  return ScalarDensity(
             support,
             [f, g, tol](double z) {
               const double v = convolve_pdf(f, g, z, tol).value;
               return v > 0.0 ? std::log(v) : -kInf;
             },
             true, "(" + f.description() + ") * (" + g.description() + ")")
      .with_landmarks(std::move(marks));
}

VerificationRecord verify_cauchy_sum(double w1, double w2, const std::vector<double>& z_grid,
                                     double tol) {
  validate(WeightVector{{w1, w2}}, false);
  if (!(w1 > 0.0 && w2 > 0.0)) throw std::invalid_argument("cauchy sum: weights must be > 0");
  const auto c1 = cauchy_density(0.0, w1);
  const auto c2 = cauchy_density(0.0, w2);
  const double qtol = quadrature_tolerance(tol);
  const auto g = scan(
      z_grid, [&](double z) { return convolve_pdf(c1, c2, z, qtol); },
      [&](double z) { return cauchy_pdf(z, 0.0, w1 + w2); });
  return grid_record("convolution.cauchy_sum", {{"w1", w1}, {"w2", w2}}, g, z_grid.size(), tol);
}

VerificationRecord verify_cauchy_sum3(double w1, double w2, double w3,
                                      const std::vector<double>& z_grid, double tol) {
  if (!(w1 > 0.0 && w2 > 0.0 && w3 > 0.0)) {
    throw std::invalid_argument("cauchy sum: weights must be > 0");
  }
  const double qtol = quadrature_tolerance(tol);
  // The inner convolution feeds the outer one, so it runs tighter.
  const auto inner = convolution_density(cauchy_density(0.0, w1), cauchy_density(0.0, w2),
                                         std::max(qtol * 1e-2, 1e-13));
  const auto c3 = cauchy_density(0.0, w3);
  const auto g = scan(
      z_grid, [&](double z) { return convolve_pdf(inner, c3, z, qtol); },
      [&](double z) { return cauchy_pdf(z, 0.0, w1 + w2 + w3); });
  return grid_record("convolution.cauchy_sum3", {{"w1", w1}, {"w2", w2}, {"w3", w3}}, g,
                     z_grid.size(), tol);
}

double wynn_epsilon(const std::vector<double>& s) {
  if (s.empty()) throw std::invalid_argument("wynn_epsilon: no partial sums");
  std::vector<double> prev(s.size() + 1, 0.0);
  std::vector<double> cur = s;
  double best = s.back();
  for (std::size_t k = 1; cur.size() > 1; ++k) {
    std::vector<double> next(cur.size() - 1);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const double d = cur[i + 1] - cur[i];
      if (d == 0.0) return k % 2 == 1 ? cur[i + 1] : best;
      next[i] = prev[i + 1] + 1.0 / d;
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (k % 2 == 0) best = cur.back();
  }
  return best;
}

VerificationRecord verify_cauchy_characteristic(double w1, double w2, double t, double tol) {
  if (!(w1 > 0.0 && w2 > 0.0)) throw std::invalid_argument("cauchy sum: weights must be > 0");
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be > 0");
  const auto h = convolution_density(cauchy_density(0.0, w1), cauchy_density(0.0, w2), 1e-13);
  const Integrand even = [&](double z) { return std::cos(t * z) * (h.pdf(z) + h.pdf(-z)); };
  QuadOptions o;
  o.abs_tol = 1e-14;
  o.rel_tol = 1e-12;
  constexpr int kHalfPeriods = 40;
  std::vector<double> sums;
  KahanSum acc;
  double a = 0.0;
  bool converged = true;
  for (int k = 0; k < kHalfPeriods; ++k) {
    const double b = (k + 0.5) * kPi / t;
    const QuadResult q = integrate(even, Interval(a, b), o);
    converged = converged && q.converged;
    acc.add(q.value);
    sums.push_back(acc.value());
    a = b;
  }
  const double value = wynn_epsilon(sums);
  auto r = make_record("convolution.cauchy_characteristic", {{"w1", w1}, {"w2", w2}, {"t", t}},
                       value, std::exp(-(w1 + w2) * t), tol,
                       fmt::format("Wynn epsilon over {} half periods; last partial sum {:.17g}",
                                   kHalfPeriods, sums.back()));
  if (!converged) r.notes += "; some half-period quadratures did not converge";
  return r;
}

namespace {

GridResidual invgauss_scan(double alpha, double t1, double t2, const std::vector<double>& z_grid,
                           double tol, double shape) {
  if (!(alpha > 0.0 && t1 > 0.0 && t2 > 0.0)) {
    throw std::invalid_argument("inverse gaussian sum: alpha, t1, t2 must be > 0");
  }
  const auto f1 = inverse_gaussian_density(alpha, t1);
  const auto f2 = inverse_gaussian_density(alpha, t2);
  const double mean = alpha * (t1 + t2);
  const double qtol = quadrature_tolerance(tol);
  return scan(
      z_grid, [&](double z) { return convolve_pdf(f1, f2, z, qtol); },
      [&](double z) { return inverse_gaussian_mean_shape_pdf(mean, shape, z); });
}

}  // namespace

VerificationRecord verify_invgauss_sum(double alpha, double t1, double t2,
                                       const std::vector<double>& z_grid, double tol) {
  const double s = t1 + t2;
  const auto g = invgauss_scan(alpha, t1, t2, z_grid, tol, alpha * s * s);
  auto r = grid_record("convolution.invgauss_sum", {{"alpha", alpha}, {"t1", t1}, {"t2", t2}}, g,
                       z_grid.size(), tol);
  r.notes += fmt::format("; shape alpha(t1^2 + t2^2) residual {:.17g}",
                         invgauss_printed_shape_residual(alpha, t1, t2, z_grid, tol));
  return r;
}

double invgauss_printed_shape_residual(double alpha, double t1, double t2,
                                       const std::vector<double>& z_grid, double tol) {
  return invgauss_scan(alpha, t1, t2, z_grid, tol, alpha * (t1 * t1 + t2 * t2)).max_err;
}

KsRecord simulate_pillai_meng(const Eigen::MatrixXd& covariance, const WeightVector& weights,
                              std::size_t n, std::uint64_t seed) {
  const auto m = static_cast<std::size_t>(covariance.rows());
  if (m == 0 || covariance.cols() != covariance.rows()) {
    throw std::invalid_argument("pillai-meng: covariance must be square and non-empty");
  }
  if (weights.weights.size() != m) {
    throw std::invalid_argument("pillai-meng: one weight per coordinate is required");
  }
  validate(weights, true);
  if (!covariance.isApprox(covariance.transpose())) {
    throw std::invalid_argument("pillai-meng: covariance is not symmetric");
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("pillai-meng: covariance is not positive definite");
  }
  if (n == 0) throw std::invalid_argument("pillai-meng: n must be >= 1");
  const Eigen::MatrixXd L = llt.matrixL();
  const Eigen::Map<const Eigen::VectorXd> w(weights.weights.data(),
                                            static_cast<Eigen::Index>(m));

  // Fixed blocks on split streams: the draws do not depend on how blocks are
  // scheduled.
  constexpr std::size_t kBlock = 4096;
  std::vector<double> z(n);
  Eigen::VectorXd xi(m);
  Eigen::VectorXd zeta(m);
  const Rng root(seed);
  for (std::size_t start = 0, block = 0; start < n; start += kBlock, ++block) {
    Rng rng = root.split(block);
    std::normal_distribution<double> normal;
    const std::size_t end = std::min(n, start + kBlock);
    for (std::size_t i = start; i < end; ++i) {
      for (std::size_t j = 0; j < m; ++j) xi[static_cast<Eigen::Index>(j)] = normal(rng);
      for (std::size_t j = 0; j < m; ++j) zeta[static_cast<Eigen::Index>(j)] = normal(rng);
      const Eigen::VectorXd x = L * xi;
      const Eigen::VectorXd y = L * zeta;
      z[i] = w.dot(x.cwiseQuotient(y));
    }
  }
  KsRecord r;
  r.n = n;
  r.seed = seed;
  r.statistic = ks_statistic(z, [](double v) { return cauchy_cdf(v, 0.0, 1.0); });
  r.critical = ks_critical_value_1pct(n);
  r.pass = r.statistic < r.critical;
  return r;
}

}  // namespace glmix
