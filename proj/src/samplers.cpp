#include "glmix/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

// Boost 1.74's pchip.hpp calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <fmt/format.h>

#include "glmix/rng.hpp"

namespace glmix {

namespace {

// Maps the support onto y ∈ ℝ: asinh on the real line, log on a half line,
// logit on a finite interval.
struct Coord {
  enum Kind { kReal, kLower, kUpper, kFinite } kind = kReal;
  double lo = 0.0;
  double hi = 0.0;
  double center = 0.0;
  double scale = 1.0;

  double x(double y) const {
    switch (kind) {
      case kReal: return center + scale * std::sinh(y);
      case kLower: return lo + std::exp(y);
      case kUpper: return hi - std::exp(-y);
      case kFinite: return lo + (hi - lo) / (1.0 + std::exp(-y));
    }
    return 0.0;
  }
  double dx(double y) const {
    switch (kind) {
      case kReal: return scale * std::cosh(y);
      case kLower: return std::exp(y);
      case kUpper: return std::exp(-y);
      case kFinite: {
        const double s = 1.0 / (1.0 + std::exp(-y));
        return (hi - lo) * s * (1.0 - s);
      }
    }
    return 0.0;
  }
  double y(double x) const {
    switch (kind) {
      case kReal: return std::asinh((x - center) / scale);
      case kLower: return std::log(x - lo);
      case kUpper: return -std::log(hi - x);
      case kFinite: return std::log((x - lo) / (hi - x));
    }
    return 0.0;
  }
};

Coord coordinate_for(const ScalarDensity& f) {
  Coord c;
  const Interval& s = f.support();
  c.lo = s.lower();
  c.hi = s.upper();
  std::vector<double> marks;
  for (double m : f.landmarks()) {
    if (s.contains(m)) marks.push_back(m);
  }
  std::sort(marks.begin(), marks.end());
  if (std::isinf(c.lo) && std::isinf(c.hi)) {
    c.kind = Coord::kReal;
    c.center = marks.empty() ? 0.0 : marks[marks.size() / 2];
    if (marks.size() >= 2) c.scale = 0.5 * (marks.back() - marks.front());
    if (!(c.scale > 0.0)) c.scale = 1.0;
  } else if (std::isinf(c.hi)) {
    c.kind = Coord::kLower;
    c.center = marks.empty() ? c.lo + 1.0 : marks[marks.size() / 2];
  } else if (std::isinf(c.lo)) {
    c.kind = Coord::kUpper;
    c.center = marks.empty() ? c.hi - 1.0 : marks[marks.size() / 2];
  } else {
    c.kind = Coord::kFinite;
    c.center = marks.empty() ? 0.5 * (c.lo + c.hi) : marks[marks.size() / 2];
  }
  return c;
}

double logit(double p) { return std::log(p / (1.0 - p)); }

constexpr double kTableTail = 1e-7;
constexpr double kMarchStep = 1.0 / 64.0;
constexpr double kMarchTail = 1e-11;
constexpr std::size_t kMaxMarch = 40000;
// Cell integrals are O(1/64) of the mass; numerically differentiated
// densities carry ~1e-10 relative noise, so tighter requests only burn
// evaluations.
constexpr double kCellAbsTol = 1e-14;
constexpr double kCellRelTol = 1e-11;
constexpr double kSolveTol = 1e-13;

}  // namespace

struct QuantileTable::Impl {
  ScalarDensity f;
  Coord coord;
  std::vector<double> ys;  // dense march nodes
  std::vector<double> cum;  // CDF at ys
  double total = 1.0;
  double logit_lo = 0.0;
  double logit_hi = 0.0;
  std::unique_ptr<boost::math::interpolators::pchip<std::vector<double>>> spline;

  explicit Impl(ScalarDensity density) : f(std::move(density)) {}

  double g(double y) const {
    const double x = coord.x(y);
    if (!f.support().contains(x)) return 0.0;
    const double lp = f.log_pdf(x);
    if (lp == -kInf) return 0.0;
    return std::exp(lp) * coord.dx(y);
  }

  double piece(double a, double b) const {
    if (a == b) return 0.0;
    QuadOptions o;
    o.abs_tol = kCellAbsTol * total;
    o.rel_tol = kCellRelTol;
    const QuadResult q = integrate([this](double y) { return g(y); }, Interval(a, b), o);
    return q.value / total;
  }

  double cdf_y(double y) const {
    if (y <= ys.front()) return std::max(0.0, cum.front() - piece(y, ys.front()));
    if (y >= ys.back()) return std::min(1.0, cum.back() + piece(ys.back(), y));
    const auto it = std::upper_bound(ys.begin(), ys.end(), y);
    const std::size_t i = static_cast<std::size_t>(it - ys.begin()) - 1;
    return cum[i] + piece(ys[i], y);
  }

  // Safeguarded Newton inside a dense cell, bisection outside the march.
  double solve_y(double p) const {
    double a;
    double b;
    if (p <= cum.front()) {
      b = ys.front();
      a = b - 1.0;
      for (int k = 0; k < 400 && cdf_y(a) > p; ++k) a -= 1.0;
    } else if (p >= cum.back()) {
      a = ys.back();
      b = a + 1.0;
      for (int k = 0; k < 400 && cdf_y(b) < p; ++k) b += 1.0;
    } else {
      const auto it = std::upper_bound(cum.begin(), cum.end(), p);
      const std::size_t i = static_cast<std::size_t>(it - cum.begin()) - 1;
      a = ys[i];
      b = ys[i + 1];
      const double w = cum[i + 1] > cum[i] ? (p - cum[i]) / (cum[i + 1] - cum[i]) : 0.5;
      double y = a + w * (b - a);
      for (int k = 0; k < 20; ++k) {
        const double r = cdf_y(y) - p;
        if (std::abs(r) <= kSolveTol) return y;
        if (r > 0.0) b = y; else a = y;
        const double d = g(y) / total;
        double next = d > 0.0 ? y - r / d : 0.5 * (a + b);
        if (!(next > a && next < b)) next = 0.5 * (a + b);
        y = next;
      }
      return y;
    }
    for (int k = 0; k < 80 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++k) {
      const double m = 0.5 * (a + b);
      if (cdf_y(m) < p) a = m; else b = m;
    }
    return 0.5 * (a + b);
  }
};

QuantileTable QuantileTable::build(const ScalarDensity& f, std::size_t nodes) {
  if (!f.normalized()) throw std::invalid_argument("QuantileTable: density is not normalized");
  if (nodes < 4) throw std::invalid_argument("QuantileTable: need at least 4 nodes");
  auto impl = std::make_shared<Impl>(f);
  impl->coord = coordinate_for(f);
  const double yc = impl->coord.y(impl->coord.center);
  const auto g = [&](double y) { return impl->g(y); };

  QuadOptions o;
  o.abs_tol = 1e-15;
  o.rel_tol = 1e-13;
  const double mass_left = integrate(g, Interval(-kInf, yc), o).value;
  const double mass_right = integrate(g, Interval(yc, kInf), o).value;
  const double total = mass_left + mass_right;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw NumericError("QuantileTable: density has no finite positive mass");
  }

  // March outwards from the centre until the remaining tail mass is tiny.
  std::vector<double> left_y{yc};
  std::vector<double> left_c{0.0};
  std::vector<double> right_y{yc};
  std::vector<double> right_c{0.0};
  for (int side = 0; side < 2; ++side) {
    auto& ys = side == 0 ? left_y : right_y;
    auto& cs = side == 0 ? left_c : right_c;
    const double mass = side == 0 ? mass_left : mass_right;
    KahanSum acc;
    double y = yc;
    QuadOptions cell;
    cell.abs_tol = kCellAbsTol * total;
    cell.rel_tol = kCellRelTol;
    for (std::size_t k = 0; k < kMaxMarch && mass - acc.value() > kMarchTail * total; ++k) {
      const double next = side == 0 ? y - kMarchStep : y + kMarchStep;
      const QuadResult q =
          integrate(g, side == 0 ? Interval(next, y) : Interval(y, next), cell);
      acc.add(q.value);
      y = next;
      ys.push_back(y);
      cs.push_back(acc.value());
    }
  }
  impl->total = total;
  for (std::size_t i = left_y.size(); i-- > 1;) {
    impl->ys.push_back(left_y[i]);
    impl->cum.push_back((mass_left - left_c[i]) / total);
  }
  for (std::size_t i = 0; i < right_y.size(); ++i) {
    impl->ys.push_back(right_y[i]);
    impl->cum.push_back((mass_left + right_c[i]) / total);
  }

  QuantileTable t;
  impl->logit_lo = logit(kTableTail);
  impl->logit_hi = -impl->logit_lo;
  std::vector<double> ls(nodes);
  std::vector<double> ys(nodes);
  const double step = (impl->logit_hi - impl->logit_lo) / static_cast<double>(nodes - 1);
  t.grid_.resize(nodes);
  t.quantiles_.resize(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    ls[k] = impl->logit_lo + step * static_cast<double>(k);
    t.grid_[k] = 1.0 / (1.0 + std::exp(-ls[k]));
    ys[k] = impl->solve_y(t.grid_[k]);
    t.quantiles_[k] = impl->coord.x(ys[k]);
    if (k > 0 && !(ys[k] > ys[k - 1] && t.quantiles_[k] > t.quantiles_[k - 1])) {
      throw NumericError(fmt::format("QuantileTable: quantiles not increasing at p = {}",
                                     t.grid_[k]));
    }
  }
  impl->spline = std::make_unique<boost::math::interpolators::pchip<std::vector<double>>>(
      std::move(ls), std::move(ys));
  t.impl_ = std::move(impl);
  return t;
}

double QuantileTable::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile: p must lie in (0, 1)");
  const double l = logit(p);
  if (l >= impl_->logit_lo && l <= impl_->logit_hi) return impl_->coord.x((*impl_->spline)(l));
  return impl_->coord.x(impl_->solve_y(p));
}

double QuantileTable::cdf(double x) const {
  const Interval& s = impl_->f.support();
  if (x <= s.lower()) return 0.0;
  if (x >= s.upper()) return 1.0;
  return impl_->cdf_y(impl_->coord.y(x));
}

SampleBatch inverse_cdf_sample(const QuantileTable& table, std::size_t n, std::uint64_t seed) {
  SampleBatch b;
  b.seed = seed;
  b.method = "inverse_cdf";
  b.values.resize(n);
  Rng rng = Rng(seed).split(0);
  for (auto& v : b.values) v = table.quantile(rng.uniform());
  return b;
}

SampleBatch inverse_cdf_sample(const ScalarDensity& f, std::size_t n, std::uint64_t seed) {
  return inverse_cdf_sample(QuantileTable::build(f), n, seed);
}

ScalarDensity khintchine_z_density(const ScalarDensity& fx) {
  const ScalarDensity f = fx;
  ScalarDensity fz(
      fx.support(),
      [f](double z) {
        const double lp = f.log_pdf(z);
        if (lp == -kInf) return -kInf;
        const double d = f.dlog_pdf(z);
        if (!(-z * d > 0.0)) return -kInf;
        return std::log(std::abs(z)) + std::log(std::abs(d)) + lp;
      },
      true, "khintchine Z of " + fx.description());
  fz = fz.with_landmarks(fx.landmarks());
  const QuadResult m = total_mass(fz, 1e-12, 1e-10);
  if (!(std::abs(m.value - 1.0) <= 1e-6)) {
    throw std::invalid_argument(fmt::format(
        "khintchine: -z f'(z) integrates to {:.10g}; the density is not unimodal about 0",
        m.value));
  }
  return fz;
}

SampleBatch khintchine_sample(const ScalarDensity& fx, std::size_t n, std::uint64_t seed) {
  const QuantileTable table = QuantileTable::build(khintchine_z_density(fx));
  SampleBatch b;
  b.seed = seed;
  b.method = "khintchine";
  b.values.resize(n);
  Rng zs = Rng(seed).split(1);
  Rng us = Rng(seed).split(2);
  for (auto& v : b.values) v = table.quantile(zs.uniform()) * us.uniform();
  return b;
}

double ks_statistic(const std::vector<double>& values,
                    const std::function<double(double)>& cdf) {
  if (values.empty()) throw std::invalid_argument("ks_statistic: empty batch");
  std::vector<double> v = values;
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double F = cdf(v[i]);
    d = std::max({d, F - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - F});
  }
  return d;
}

double ks_statistic(const SampleBatch& batch, const std::function<double(double)>& cdf) {
  return ks_statistic(batch.values, cdf);
}

double ks_critical_value_1pct(std::size_t n) {
  return 1.628 / std::sqrt(static_cast<double>(n));
}

void write_csv(const SampleBatch& batch, const std::string& path) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  std::string text = "value\n";
  for (double v : batch.values) text += fmt::format("{:.17g}\n", v);
  const bool ok = std::fwrite(text.data(), 1, text.size(), out) == text.size();
  if (std::fclose(out) != 0 || !ok) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace glmix
