#include "glmix/record.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace glmix {

VerificationRecord make_record(std::string identity_id, ParamList params, double lhs,
                               double rhs, double tol, std::string notes) {
  VerificationRecord r;
  r.identity_id = std::move(identity_id);
  r.params = std::move(params);
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_err = std::abs(lhs - rhs);
  if (r.abs_err == 0.0) {
    r.rel_err = 0.0;
  } else {
    r.rel_err = rhs != 0.0 ? r.abs_err / std::abs(rhs) : kInf;
  }
  if (std::isnan(r.abs_err)) {
    r.abs_err = kInf;
    r.rel_err = kInf;
  }
  r.tol = tol;
  r.pass = r.abs_err <= tol || r.rel_err <= tol;
  r.notes = std::move(notes);
  return r;
}

void note_quadrature(VerificationRecord& r, const QuadResult& q, const char* label) {
  if (q.converged) return;
  if (!r.notes.empty()) r.notes += "; ";
  r.notes += fmt::format("{}: quadrature did not converge (err {:.3g}, {} evaluations)", label,
                         q.abs_error_estimate, q.evaluations);
}

double quadrature_tolerance(double tol) { return std::clamp(tol * 1e-3, 1e-13, 1e-9); }

}  // namespace glmix
