// Outcome of checking one identity at one parameter point.
#ifndef GLMIX_RECORD_HPP
#define GLMIX_RECORD_HPP

#include <string>
#include <utility>
#include <vector>

#include "glmix/numeric.hpp"

namespace glmix {

/// Parameter name/value pairs, kept in declaration order.
using ParamList = std::vector<std::pair<std::string, double>>;

struct VerificationRecord {
  std::string identity_id;
  ParamList params;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string notes;
};

/// Fills the error fields; pass ⇔ abs_err ≤ tol or rel_err ≤ tol.
/// rel_err is abs_err/|rhs|, or +inf when rhs = 0 and the sides differ.
VerificationRecord make_record(std::string identity_id, ParamList params, double lhs,
                               double rhs, double tol, std::string notes = {});

/// Appends "label: quadrature did not converge (err ...)" to notes when needed.
void note_quadrature(VerificationRecord& r, const QuadResult& q, const char* label);

/// Quadrature tolerance used by the verifiers for a record tolerance `tol`:
/// three digits tighter, clamped to [1e-13, 1e-9].
double quadrature_tolerance(double tol);

}  // namespace glmix

#endif  // GLMIX_RECORD_HPP
