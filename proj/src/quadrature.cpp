#include "glmix/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace glmix {

Interval::Interval(double lower, double upper) : lower_(lower), upper_(upper) {
  if (std::isnan(lower) || std::isnan(upper) || !(lower < upper)) {
    std::ostringstream msg;
    msg << "Interval: need lower < upper, got (" << lower << ", " << upper << ")";
    throw std::invalid_argument(msg.str());
  }
}

bool Interval::finite() const {
  return std::isfinite(lower_) && std::isfinite(upper_);
}

namespace {

// Kronrod 21-point abscissae and weights with the embedded 10-point Gauss
// rule (Gauss nodes are the odd entries of kNodes).
constexpr double kNodes[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr double kKronrodWeights[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980584690, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr double kGaussWeights[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

enum class MapKind { kFinite, kUpperInfinite, kLowerInfinite };

// One piece of the domain; each is integrated over its own t in (0, 1).
struct Piece {
  MapKind kind;
  double anchor;  // finite endpoint for the mapped kinds
  double a;       // x-range for kFinite
  double b;
};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  int depth;
  std::size_t piece;
  bool operator<(const Segment& other) const { return error < other.error; }
};

struct RuleResult {
  double value;
  double error;
  bool roundoff_limited;
};

class Evaluator {
 public:
  Evaluator(const Integrand& f, std::vector<Piece> pieces)
      : f_(f), pieces_(std::move(pieces)) {}

  const std::vector<Piece>& pieces() const { return pieces_; }
  std::size_t evaluations() const { return evaluations_; }

  RuleResult rule(std::size_t piece, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = eval(piece, center);
    double kronrod = fc * kKronrodWeights[10];
    double gauss = 0.0;
    double abs_sum = std::abs(kronrod);
    double fv1[10];
    double fv2[10];
    for (int j = 0; j < 10; ++j) {
      const double dx = half * kNodes[j];
      const double f1 = eval(piece, center - dx);
      const double f2 = eval(piece, center + dx);
      fv1[j] = f1;
      fv2[j] = f2;
      kronrod += kKronrodWeights[j] * (f1 + f2);
      abs_sum += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
      if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
    }
    const double mean = 0.5 * kronrod;
    double asc = kKronrodWeights[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j) {
      asc += kKronrodWeights[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    }
    const double result = kronrod * half;
    const double resabs = abs_sum * std::abs(half);
    const double resasc = asc * std::abs(half);
    double err = std::abs((kronrod - gauss) * half);
    if (resasc != 0.0 && err != 0.0) {
      err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    const double floor = 50.0 * kEps * resabs;
    bool limited = false;
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps) && floor >= err) {
      err = floor;
      limited = true;
    }
    return {result, err, limited};
  }

 private:
  double eval(std::size_t index, double t) {
    ++evaluations_;
    const Piece& p = pieces_[index];
    // Cubic smoothing s = t²(3 - 2t) on (0, 1): endpoint singularities of
    // type |x - a|^{-1/2} become bounded and nodes cluster at the ends.
    const double s = t * t * (3.0 - 2.0 * t);
    const double ds = 6.0 * t * (1.0 - t);
    double x;
    double jacobian;
    if (p.kind == MapKind::kFinite) {
      x = p.a + (p.b - p.a) * s;
      jacobian = (p.b - p.a) * ds;
    } else {
      const double r = 1.0 - s;
      if (r <= 0.0) return 0.0;
      const double u = s / r;
      jacobian = ds / (r * r);
      x = p.kind == MapKind::kUpperInfinite ? p.anchor + u : p.anchor - u;
      if (!std::isfinite(x) || !std::isfinite(jacobian)) return 0.0;
    }
    if (jacobian == 0.0) return 0.0;
    const double fx = f_(x);
    if (!std::isfinite(fx)) {
      std::ostringstream msg;
      msg << "integrate: integrand is not finite at x = " << x;
      throw NumericError(msg.str());
    }
    return fx * jacobian;
  }

  const Integrand& f_;
  std::vector<Piece> pieces_;
  std::size_t evaluations_ = 0;
};

std::vector<Piece> make_pieces(const Interval& domain, std::vector<double> cuts) {
  const double lo = domain.lower();
  const double hi = domain.upper();
  std::erase_if(cuts, [&](double c) { return !(c > lo && c < hi) || !std::isfinite(c); });
  if (cuts.empty() && !std::isfinite(lo) && !std::isfinite(hi)) cuts.push_back(0.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<double> edges;
  edges.push_back(lo);
  edges.insert(edges.end(), cuts.begin(), cuts.end());
  edges.push_back(hi);

  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i];
    const double b = edges[i + 1];
    if (std::isfinite(a) && std::isfinite(b)) {
      pieces.push_back({MapKind::kFinite, 0.0, a, b});
    } else if (std::isfinite(a)) {
      pieces.push_back({MapKind::kUpperInfinite, a, 0.0, 1.0});
    } else {
      pieces.push_back({MapKind::kLowerInfinite, b, 0.0, 1.0});
    }
  }
  return pieces;
}

bool too_narrow(const Segment& s) {
  const double scale = std::max(std::abs(s.a), std::abs(s.b));
  return (s.b - s.a) <= 1000.0 * kEps * scale ||
         (s.b - s.a) < 1000.0 * std::numeric_limits<double>::min();
}

}  // namespace

QuadResult integrate(const Integrand& f, const Interval& domain,
                     const QuadOptions& options) {
  if (!(options.abs_tol > 0.0) || !(options.rel_tol > 0.0)) {
    throw std::invalid_argument("integrate: tolerances must be positive");
  }
  Evaluator ev(f, make_pieces(domain, options.breakpoints));

  std::priority_queue<Segment> active;
  std::vector<Segment> settled;
  double total = 0.0;
  double total_err = 0.0;

  for (std::size_t i = 0; i < ev.pieces().size(); ++i) {
    const RuleResult r = ev.rule(i, 0.0, 1.0);
    Segment seg{0.0, 1.0, r.value, r.error, 0, i};
    total += r.value;
    total_err += r.error;
    if (r.roundoff_limited) {
      settled.push_back(seg);
    } else {
      active.push(seg);
    }
  }

  bool converged = false;
  std::size_t iterations = 0;
  while (true) {
    if (total_err <= std::max(options.abs_tol, options.rel_tol * std::abs(total))) {
      converged = true;
      break;
    }
    if (active.empty() || ev.evaluations() + 42 > options.max_evaluations) break;

    Segment worst = active.top();
    active.pop();
    if (worst.depth >= options.max_depth || too_narrow(worst)) {
      settled.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    const RuleResult left = ev.rule(worst.piece, worst.a, mid);
    const RuleResult right = ev.rule(worst.piece, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;

    const Segment ls{worst.a, mid, left.value, left.error, worst.depth + 1, worst.piece};
    const Segment rs{mid, worst.b, right.value, right.error, worst.depth + 1, worst.piece};
    // Splitting that neither moves the value nor shrinks the error is noise.
    const double joined = left.value + right.value;
    const bool stalled = left.error + right.error >= 0.99 * worst.error &&
                         std::abs(joined - worst.value) <= 1e3 * kEps * std::abs(joined);
    for (const auto& [seg, limited] : {std::pair{ls, left.roundoff_limited || stalled},
                                       std::pair{rs, right.roundoff_limited || stalled}}) {
      if (limited) {
        settled.push_back(seg);
      } else {
        active.push(seg);
      }
    }

    // Re-sum periodically so incremental updates cannot drift.
    if (++iterations % 64 == 0) {
      KahanSum v;
      KahanSum e;
      for (const auto& s : settled) {
        v.add(s.value);
        e.add(s.error);
      }
      auto copy = active;
      while (!copy.empty()) {
        v.add(copy.top().value);
        e.add(copy.top().error);
        copy.pop();
      }
      total = v.value();
      total_err = e.value();
    }
  }

  KahanSum v;
  KahanSum e;
  for (const auto& s : settled) {
    v.add(s.value);
    e.add(s.error);
  }
  while (!active.empty()) {
    v.add(active.top().value);
    e.add(active.top().error);
    active.pop();
  }
  QuadResult out;
  out.value = v.value();
  out.abs_error_estimate = e.value();
  out.evaluations = ev.evaluations();
  out.converged =
      converged &&
      out.abs_error_estimate <= std::max(options.abs_tol, options.rel_tol * std::abs(out.value));
  return out;
}

QuadResult integrate(const Integrand& f, const Interval& domain, double abs_tol,
                     double rel_tol) {
  QuadOptions opts;
  opts.abs_tol = abs_tol;
  opts.rel_tol = rel_tol;
  return integrate(f, domain, opts);
}

QuadResult integrate_log_scale(const Integrand& f, double abs_tol, double rel_tol,
                               double scale_hint) {
  if (!(scale_hint > 0.0)) throw std::invalid_argument("integrate_log_scale: scale_hint must be > 0");
  const Integrand g = [&f](double u) {
    const double t = std::exp(u);
    if (t == 0.0 || !std::isfinite(t)) return 0.0;
    return f(t) * t;
  };
  QuadOptions opts;
  opts.abs_tol = abs_tol;
  opts.rel_tol = rel_tol;
  opts.breakpoints = {std::log(scale_hint)};
  return integrate(g, Interval::real_line(), opts);
}

void KahanSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

}  // namespace glmix
