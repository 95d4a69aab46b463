#include "glmix/transforms.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace glmix {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << what << " must be a positive finite number, got " << v;
    throw std::domain_error(msg.str());
  }
}

QuadOptions options_for(double tol, std::vector<double> breaks) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  QuadOptions o;
  o.abs_tol = tol;
  o.rel_tol = tol;
  o.breakpoints = std::move(breaks);
  return o;
}

// Solution x > 0 of a x - b/x = y.
double solve_reciprocal(double a, double b, double y) {
  const double root = std::hypot(y, 2.0 * std::sqrt(a * b));
  return y >= 0.0 ? (y + root) / (2.0 * a) : 2.0 * b / (root - y);
}

}  // namespace

SelfInverseMap::SelfInverseMap(SelfInverseKind kind, double parameter)
    : kind_(kind), parameter_(parameter) {
  require_positive(parameter, "self-inverse map parameter");
}

double SelfInverseMap::operator()(double x) const {
  if (kind_ == SelfInverseKind::kReciprocal) return parameter_ / x;
  const double ax = parameter_ * x;
  if (ax <= 0.693147180559945309) return -std::log(-std::expm1(-ax)) / parameter_;
  return -std::log1p(-std::exp(-ax)) / parameter_;
}

double SelfInverseMap::difference(double x) const {
  return kind_ == SelfInverseKind::kReciprocal
             ? pi_map_inverse(PiKind::kT2, parameter_, x)
             : pi_map_inverse(PiKind::kLogistic, parameter_, x);
}

double SelfInverseMap::difference_inverse(double y) const {
  return kind_ == SelfInverseKind::kReciprocal ? pi_map(PiKind::kT2, parameter_, y)
                                               : pi_map(PiKind::kLogistic, parameter_, y);
}

double pi_map(PiKind kind, double param, double y) {
  require_positive(param, "pi_map parameter");
  if (std::isnan(y)) throw std::domain_error("pi_map: y is NaN");
  if (kind == PiKind::kT2) {
    const double root = std::hypot(y, 2.0 * std::sqrt(param));
    return y >= 0.0 ? 0.5 * (y + root) : 2.0 * param / (root - y);
  }
  const double ay = param * y;
  if (ay > 0.0) return y + std::log1p(std::exp(-ay)) / param;
  return std::log1p(std::exp(ay)) / param;
}

double pi_map_inverse(PiKind kind, double param, double x) {
  require_positive(param, "pi_map parameter");
  if (!(x > 0.0)) throw std::domain_error("pi_map_inverse: x must be > 0");
  if (kind == PiKind::kT2) return x - param / x;
  const double ax = param * x;
  if (ax < 1.0) return std::log(std::expm1(ax)) / param;
  return x + std::log1p(-std::exp(-ax)) / param;
}

QuadResult cs_identity_lhs(const Integrand& f, double a, double b, double tol,
                           const std::vector<double>& y_breaks) {
  require_positive(a, "a");
  require_positive(b, "b");
  // x = x0 e^v with x0 = (b/a)^{1/2}, where ax - b/x vanishes.
  const double x0 = std::sqrt(b / a);
  const double r = std::sqrt(a * b);
  std::vector<double> breaks = {0.0};
  for (double y : y_breaks) {
    if (y > 0.0) {
      breaks.push_back(std::asinh(y / (2.0 * r)));
      breaks.push_back(-std::asinh(y / (2.0 * r)));
    }
  }
  const Integrand g = [&](double v) {
    const double x = x0 * std::exp(v);
    if (x == 0.0 || !std::isfinite(x)) return 0.0;
    const double d = a * x - b / x;
    return f(d * d) * x;
  };
  return integrate(g, Interval::real_line(), options_for(tol, std::move(breaks)));
}

QuadResult square_argument_integral(const Integrand& f, double tol,
                                    const std::vector<double>& y_breaks) {
  return integrate([&](double y) { return f(y * y); }, Interval::positive_half_line(),
                   options_for(tol, y_breaks));
}

QuadResult gen_cs_identity_lhs(const Integrand& f, const SelfInverseMap& s, double tol,
                               const std::vector<double>& y_breaks) {
  // x = e^u, split where x - s(x) crosses 0 and ±y_breaks.
  std::vector<double> breaks = {std::log(s.difference_inverse(0.0))};
  for (double y : y_breaks) {
    if (y > 0.0) {
      breaks.push_back(std::log(s.difference_inverse(y)));
      const double lo = s.difference_inverse(-y);
      if (lo > 0.0) breaks.push_back(std::log(lo));
    }
  }
  const Integrand g = [&](double u) {
    const double x = std::exp(u);
    if (x == 0.0 || !std::isfinite(x)) return 0.0;
    const double d = x - s(x);
    if (!std::isfinite(d)) return 0.0;
    return f(d * d) * x;
  };
  return integrate(g, Interval::real_line(), options_for(tol, std::move(breaks)));
}

std::pair<QuadResult, QuadResult> liouville_identity_pair(const Integrand& f, double a, double b,
                                                          double tol,
                                                          const std::vector<double>& y_breaks) {
  require_positive(a, "a");
  require_positive(b, "b");
  const double x0 = std::sqrt(b / a);
  const double shift = 2.0 * std::sqrt(a * b);

  // Left: x = x0 e^{2v}, so x^{-1/2} dx = 2 x0^{1/2} e^v dv.
  std::vector<double> left_breaks = {0.0};
  std::vector<double> right_breaks;
  for (double y : y_breaks) {
    if (y > 0.0) {
      const double v = 0.5 * std::acosh(1.0 + y / shift);
      left_breaks.push_back(v);
      left_breaks.push_back(-v);
      right_breaks.push_back(std::sqrt(y));
    }
  }
  const double scale = 2.0 * std::sqrt(x0);
  const Integrand left = [&](double v) {
    const double x = x0 * std::exp(2.0 * v);
    if (x == 0.0 || !std::isfinite(x)) return 0.0;
    const double arg = a * x + b / x;
    if (!std::isfinite(arg)) return 0.0;
    return scale * std::exp(v) * f(arg);
  };
  // Right: y = w², so y^{-1/2} dy = 2 dw.
  const double right_scale = 2.0 / std::sqrt(a);
  const Integrand right = [&](double w) { return right_scale * f(shift + w * w); };

  return {integrate(left, Interval::real_line(), options_for(tol, std::move(left_breaks))),
          integrate(right, Interval::positive_half_line(),
                    options_for(tol, std::move(right_breaks)))};
}

namespace {

ScalarDensity make_daughter(const ScalarDensity& f, double a, double b, double normalizer,
                            bool normalized) {
  require_positive(a, "a");
  require_positive(b, "b");
  require_positive(normalizer, "normalizer");
  if (f.support().lower() != 0.0 || f.support().upper() != kInf) {
    throw std::invalid_argument("daughter_density: mother must live on (0, inf)");
  }
  std::vector<double> marks = {std::sqrt(b / a)};
  for (double y : f.landmarks()) {
    if (y > 0.0) {
      marks.push_back(solve_reciprocal(a, b, y));
      marks.push_back(solve_reciprocal(a, b, -y));
    }
  }
  const double log_norm = std::log(normalizer);
  const ScalarDensity mother = f;
  std::ostringstream d;
  d << "daughter[a=" << a << ", b=" << b << "](" << f.description() << ")";
  return ScalarDensity(Interval::positive_half_line(),
                       [=](double x) {
                         const double y = std::abs(a * x - b / x);
                         return log_norm +
                                mother.log_pdf(std::max(y, std::numeric_limits<double>::denorm_min()));
                       },
                       normalized, d.str())
      .with_landmarks(std::move(marks));
}

}  // namespace

ScalarDensity daughter_density_scaled(const ScalarDensity& f, double a, double b,
                                      double normalizer) {
  return make_daughter(f, a, b, normalizer, false);
}

ScalarDensity daughter_density(const ScalarDensity& f, double a, double b) {
  if (!f.normalized()) throw std::invalid_argument("daughter_density: mother is not normalized");
  if (f.support().lower() != 0.0 || f.support().upper() != kInf) {
    throw std::invalid_argument("daughter_density: mother must live on (0, inf)");
  }
  const QuadResult m = total_mass(f);
  if (!m.converged || std::abs(m.value - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg << "daughter_density: mother integrates to " << m.value << ", not 1";
    throw std::invalid_argument(msg.str());
  }
  return make_daughter(f, a, b, a, true);
}

}  // namespace glmix
