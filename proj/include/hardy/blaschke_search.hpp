#pragma once

// Lower estimates of
//   g(E, eps, R, q) = sup { sup_{|z|<=R} |B(Z_n; z)| : Z_n in E^n, |B_q(Z_n; zeta)| <= eps on E }
// over a finite sample of E, with q(z) = 1 - |z|. The objective uses the
// unweighted product; the constraint uses the weighted one (or the
// unweighted one in plain mode).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hardy/disk.hpp"
#include "hardy/hardy_space.hpp"
#include "hardy/point_sets.hpp"

namespace hardy {

enum class ConstraintMode {
  weighted,  // (1 - |zeta|) |f(zeta)| <= eps
  plain,     // |f(zeta)| <= eps
};

std::string to_string(ConstraintMode mode);
ConstraintMode constraint_mode_from_string(const std::string& name);

struct ExtremalProblem {
  PointSample sample;
  double epsilon = 0.1;
  double R = 0.5;
  HardyExponent p{2.0};
  ConstraintMode mode = ConstraintMode::weighted;

  /// epsilon >= 0 and 0 < R < 1.
  void validate() const;
  bool weighted() const noexcept { return mode == ConstraintMode::weighted; }
};

enum class BoundKind { lower_certified, heuristic, oracle_exact };

std::string to_string(BoundKind kind);
BoundKind bound_kind_from_string(const std::string& name);

struct BoundResiduals {
  double max_constraint_violation = 0.0;
  double norm_excess = 0.0;
};

struct CertifiedBound {
  double value = 0.0;
  BoundKind kind = BoundKind::heuristic;
  std::optional<ZeroConfiguration> certificate;  // empty: no feasible configuration found
  BoundResiduals residuals;
  Complex argmax_point{};

  bool infeasible() const noexcept { return !certificate.has_value(); }
};

inline constexpr int kSupGridNodes = 512;
inline constexpr double kAngularTolerance = 1e-10;
inline constexpr double kFeasibilitySlack = 1e-12;
inline constexpr double kImprovementThreshold = 1e-12;
inline constexpr int kMaxMultiplicity = 4;
inline constexpr std::size_t kBruteForceMaxSample = 12;
/// Configurations have degree <= |sample| + kDegreeAllowance, in search and brute force alike.
inline constexpr int kDegreeAllowance = 4;

struct DiskMax {
  double value;
  Complex argmax;
};

/// max |B| over |z| <= R, attained on |z| = R: uniform grid, then golden-section
/// refinement of log|B| around the best node.
DiskMax sup_on_disk(const ZeroConfiguration& cfg, double R, int nodes = kSupGridNodes);

struct FeasibilityReport {
  bool feasible;
  int worst_index;  // -1 for an empty sample
  Complex worst_point;
  double worst_value;
};

FeasibilityReport feasibility_margin(const ZeroConfiguration& cfg, const ExtremalProblem& prob);

/// Exhaustive search over multisets of sample points of size 1..max_degree
/// (multiplicity <= kMaxMultiplicity), pruned only by the monotonicity of both
/// objective and constraints under adding zeros. Kind oracle_exact.
CertifiedBound brute_force_g(const ExtremalProblem& prob, int max_degree);

struct SearchOptions {
  int budget = 200;
  std::uint64_t seed = 0;
  /// Feasible configuration (points of the sample) to start from, e.g. the
  /// certificate of a smaller epsilon or radius.
  std::optional<ZeroConfiguration> warm_start;
};

/// Greedy construction plus add/remove/swap local search and seeded
/// perturbation restarts. Kind lower_certified.
CertifiedBound search_g(const ExtremalProblem& prob, const SearchOptions& options = {});

inline CertifiedBound search_g(const ExtremalProblem& prob, int budget, std::uint64_t seed) {
  return search_g(prob, SearchOptions{budget, seed, std::nullopt});
}

/// Re-evaluates a Blaschke certificate from scratch: feasibility and objective.
/// Throws ValidationError on failure.
void revalidate_blaschke_certificate(const CertifiedBound& bound, const ExtremalProblem& prob,
                                     double value_tolerance = 1e-9);

}  // namespace hardy
