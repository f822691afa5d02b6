#pragma once

// Sandwich studies: for each epsilon of a grid, a certified Blaschke lower
// estimate of g(E, eps, R) next to the exact D_2(E, eps, R) of the sample,
// plus the log-log scaling fit of D_2 against g.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hardy/blaschke_search.hpp"
#include "hardy/extremal_solver.hpp"
#include "hardy/json_io.hpp"
#include "hardy/point_sets.hpp"

namespace hardy {

inline constexpr double kSandwichTolerance = 1e-8;
inline constexpr std::size_t kOracleSampleLimit = 10;

struct StudyRow {
  double epsilon = 0.0;
  CertifiedBound g;                // search_g result, re-validated as a D_p lower bound
  std::optional<double> g_oracle;  // brute_force_g value when the sample is small enough
  double d2_value = 0.0;
  KernelCertificate d2_certificate;
  std::optional<double> ratio_log;  // log d2 / log g when 0 < g < 1 and d2 > 0
};

struct StudyOptions {
  int budget = 200;
  std::uint64_t seed = 0;
  int angular_nodes = kDefaultAngularNodes;
  ConstraintMode mode = ConstraintMode::weighted;
  bool run_oracle = true;  // brute force cross-check when |sample| <= kOracleSampleLimit
};

struct StudyReport {
  PointSample sample;
  double R = 0.5;
  StudyOptions options;
  std::vector<StudyRow> rows;
};

/// start * factor^k, k = 0..count-1.
std::vector<double> geometric_grid(double start, double factor, int count);
/// "start:factor:count".
std::vector<double> parse_epsilon_grid(const std::string& spec);
/// 0.5 * 2^-k, k = 0..11.
std::vector<double> default_epsilon_grid();

/// Rows follow the (descending) grid order. Epsilons are processed in
/// ascending order so every search starts from the previous certificate,
/// which stays feasible as epsilon grows. Throws SandwichViolation when a row
/// breaks g <= d2 + kSandwichTolerance, ValidationError when a certificate
/// fails re-validation.
StudyReport run_sandwich_study(const PointSample& sample, double R, std::span<const double> epsilon_grid,
                               const StudyOptions& options = {});

struct ScalingPoint {
  double g;
  double d2;
};

struct ScalingFit {
  double alpha_hat;
  double intercept;
  double r_squared;
  int rows_used;
};

std::vector<ScalingPoint> scaling_points(std::span<const StudyRow> rows);

/// Least squares log d2 = alpha_hat * log g + intercept over rows with
/// 0 < g < 1 and d2 > 0.
ScalingFit fit_scaling(std::span<const ScalingPoint> points);

/// Zeros, argmax point and residuals of a Blaschke bound.
Json certificate_to_json(const CertifiedBound& g);
Json kernel_certificate_to_json(const KernelCertificate& c);
Json study_to_json(const StudyReport& report);
Json row_to_json(const StudyRow& row);
std::string study_to_csv(const StudyReport& report);

struct ReportVerification {
  bool ok = true;
  std::vector<std::string> failures;
  std::string forensic;
};

/// Re-checks a serialized study from scratch: every row's sandwich
/// inequality and both certificates.
ReportVerification verify_study_json(const Json& report);

/// Closed-form and oracle checks; one line per check on `out`.
bool run_selftest(std::ostream& out);

}  // namespace hardy
