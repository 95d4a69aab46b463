// Named verification suites over fixed parameter grids, shared by the
// command-line tool and the acceptance runner.
#ifndef GLMIX_SUITES_HPP
#define GLMIX_SUITES_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glmix/record.hpp"

namespace glmix {

/// Suite names accepted by run_suites, in report order; "all" expands to
/// every one of them.
const std::vector<std::string>& suite_names();

struct SuiteConfig {
  std::vector<std::string> suites{"all"};
  /// Overrides the per-record default tolerance of every identity record.
  /// Monte Carlo records keep their own critical values.
  std::optional<double> abs_tol;
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 20160301;
  std::string output_path;
  std::string format = "json";
  std::size_t workers = 1;
};

/// Throws std::invalid_argument for unknown suites, tol ≤ 0, mc_samples
/// below 1000, workers == 0 or a format other than json.
void validate(const SuiteConfig& config);

/// Expanded, de-duplicated suite list in canonical order.
std::vector<std::string> resolve_suites(const std::vector<std::string>& names);

/// Runs the selected suites on up to config.workers threads. The result is
/// sorted by identity_id, then by parameter tuple, whatever the scheduling.
std::vector<VerificationRecord> run_suites(const SuiteConfig& config);

/// Tag placed in the notes of errata records before the printed-form
/// residual, e.g. "printed-form residual 0.5".
inline constexpr const char* kPrintedResidualTag = "printed-form residual ";

}  // namespace glmix

#endif  // GLMIX_SUITES_HPP
