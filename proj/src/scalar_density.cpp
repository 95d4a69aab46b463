#include "glmix/scalar_density.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace glmix {

ScalarDensity::ScalarDensity(Interval support, Fn log_pdf, bool normalized,
                             std::string description)
    : support_(support),
      log_pdf_(std::move(log_pdf)),
      normalized_(normalized),
      description_(std::move(description)) {
  if (!log_pdf_) throw std::invalid_argument("ScalarDensity: log_pdf is empty");
}

double ScalarDensity::log_pdf(double x) const {
  if (!support_.contains(x)) return -kInf;
  return log_pdf_(x);
}

double ScalarDensity::pdf(double x) const { return std::exp(log_pdf(x)); }

double ScalarDensity::dlog_pdf(double x) const {
  if (dlog_pdf_) return dlog_pdf_(x);
  const double h = std::max(1e-6, 1e-6 * std::abs(x));
  const double up = log_pdf(x + h);
  const double down = log_pdf(x - h);
  const bool up_ok = std::isfinite(up);
  const bool down_ok = std::isfinite(down);
  if (up_ok && down_ok) return (up - down) / (2.0 * h);
  // One-sided next to the edge of the support.
  const double mid = log_pdf(x);
  if (!std::isfinite(mid)) return 0.0;
  if (up_ok) return (up - mid) / h;
  if (down_ok) return (mid - down) / h;
  return 0.0;
}

ScalarDensity ScalarDensity::with_derivative(Fn dlog_pdf) const {
  ScalarDensity copy = *this;
  copy.dlog_pdf_ = std::move(dlog_pdf);
  return copy;
}

ScalarDensity ScalarDensity::with_landmarks(std::vector<double> points) const {
  ScalarDensity copy = *this;
  copy.landmarks_ = std::move(points);
  return copy;
}

QuadResult integrate_density(const ScalarDensity& f, const Integrand& weight,
                             double abs_tol, double rel_tol) {
  const Integrand g = [&](double x) {
    const double lp = f.log_pdf(x);
    if (lp == -kInf) return 0.0;
    const double p = std::exp(lp);
    return weight ? weight(x) * p : p;
  };
  QuadOptions opts;
  opts.abs_tol = abs_tol;
  opts.rel_tol = rel_tol;
  const Interval& s = f.support();
  if (s.lower() == 0.0 && s.upper() == kInf) {
    // x = e^u reaches tails far past the range of an algebraic map.
    for (double x : f.landmarks()) {
      if (x > 0.0) opts.breakpoints.push_back(std::log(x));
    }
    const Integrand h = [&](double u) {
      const double x = std::exp(u);
      if (x == 0.0 || x == kInf) return 0.0;
      return g(x) * x;
    };
    return integrate(h, Interval::real_line(), opts);
  }
  opts.breakpoints = f.landmarks();
  return integrate(g, s, opts);
}

QuadResult total_mass(const ScalarDensity& f, double abs_tol, double rel_tol) {
  return integrate_density(f, nullptr, abs_tol, rel_tol);
}

}  // namespace glmix
