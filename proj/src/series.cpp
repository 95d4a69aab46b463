#include "glmix/numeric.hpp"

#include <cmath>
#include <sstream>

namespace glmix {

SeriesEvalResult alternating_series(const std::function<double(std::size_t)>& term,
                                    const SeriesOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("alternating_series: tol must be > 0");
  KahanSum sum;
  double previous = kInf;
  double previous_term = 0.0;
  for (std::size_t n = 0; n < options.max_terms; ++n) {
    const double t = term(n);
    if (!std::isfinite(t)) {
      std::ostringstream msg;
      msg << "alternating_series: term " << n << " is not finite";
      throw NumericError(msg.str());
    }
    const double mag = std::abs(t);
    if (n > options.monotone_from && mag > previous) {
      std::ostringstream msg;
      msg << "alternating_series: |term| increased at n = " << n
          << " inside the declared monotone regime";
      throw NumericError(msg.str());
    }
    if (n >= 1 && n >= options.monotone_from && mag <= options.tol) {
      return {sum.value(), n, mag};
    }
    if (options.average_tail && n >= 2 && n > options.monotone_from) {
      const double bound = 0.5 * (previous - mag);
      if (bound <= options.tol) {
        // sum holds t_0..t_{n-1}; step back half of t_{n-1}.
        return {sum.value() - 0.5 * previous_term, n, bound};
      }
    }
    sum.add(t);
    previous = mag;
    previous_term = t;
  }
  std::ostringstream msg;
  msg << "alternating_series: no convergence within " << options.max_terms << " terms";
  throw NumericError(msg.str());
}

SeriesEvalResult alternating_series(const std::function<double(std::size_t)>& term,
                                    double tol) {
  SeriesOptions opts;
  opts.tol = tol;
  return alternating_series(term, opts);
}

}  // namespace glmix
