#pragma once

// The H^2 extremal problem
//   sup { |g(z0)| : ||g||_2 <= 1, c(zeta) |g(zeta)| <= eps for zeta in E }
// with c(zeta) = 1 - |zeta| (weighted) or 1 (plain), solved exactly over a
// finite sample E.
//
// An optimizer lies in span{k_z0, k_zeta_1, ..., k_zeta_n} (Szegő kernels):
// the orthogonal complement changes neither g(z0) nor any g(zeta_j). With the
// unit-normalized Gram matrix N = L L^H and g = sum a_i k̂_i, y = L^H a gives
// ||g|| = |y| and the normalized point values L y, so the problem becomes
//   maximize Re (L y)_0  s.t.  |y| <= 1,  |(L y)_j| <= beta_j,
// a convex program with a linear objective, a ball, and modulus constraints on
// complex linear forms. It is solved by a log-barrier method; the barrier's
// dual point yields an explicit upper bound, so the reported duality gap is a
// rigorous optimality residual.

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "hardy/blaschke_search.hpp"
#include "hardy/hardy_space.hpp"

namespace hardy {

struct KernelResiduals {
  double norm_excess = 0.0;               // max(0, ||g||_2 - 1)
  double max_constraint_violation = 0.0;  // max(0, c(zeta)|g(zeta)| - eps)
  double kkt_residual = 0.0;              // dual upper bound minus achieved value
};

struct KernelCertificate {
  std::vector<Complex> base_points;  // constraint points, then z0 unless it coincides with one
  Eigen::VectorXcd coefficients;     // g = sum_i coefficients[i] * k_{base_points[i]}
  Complex z0{};
  double achieved_value = 0.0;  // Re g(z0) = |g(z0)| at the optimum
  double upper_bound = 0.0;     // dual bound on the kernel program
  KernelResiduals residuals;
};

inline constexpr double kMergeDistance = 1e-8;  // pseudo-hyperbolic
inline constexpr double kGramRidge = 1e-12;
inline constexpr double kPivotFloor = 1e-14;
/// Distinct constraint points closer than this (pseudo-hyperbolic) have a
/// Gram pivot below the ridge; the pair is reported rather than solved.
inline constexpr double kSeparationFloor = 1e-6;
inline constexpr double kGapTolerance = 1e-10;
inline constexpr double kScreeningGapTolerance = 1e-6;  // angular grid pass of solve_dp_over_disk
inline constexpr double kKktContract = 1e-8;
inline constexpr double kCertificateTolerance = 1e-8;
inline constexpr int kDefaultAngularNodes = 256;

/// Problem data independent of the evaluation point: merged constraint points,
/// their bounds in normalized-kernel units, and the Cholesky factor of their Gram matrix.
class KernelProgram {
 public:
  explicit KernelProgram(const ExtremalProblem& prob);

  /// Duality gap target `gap_tol` in normalized units; looser values are for screening.
  KernelCertificate solve_at(const Complex& z0, double gap_tol = kGapTolerance) const;

  std::span<const Complex> constraint_points() const noexcept { return points_; }
  /// Bound on |g(zeta_j)| (1 - |zeta_j|^2)^{1/2}.
  const Eigen::VectorXd& normalized_bounds() const noexcept { return bounds_; }

 private:
  std::vector<Complex> points_;
  Eigen::VectorXd bounds_;
  Eigen::VectorXd weights_;  // 1 - |zeta| (weighted) or 1 (plain)
  double epsilon_ = 0.0;
  Eigen::MatrixXcd chol_;  // lower factor of the constraint Gram matrix (+ ridge)
};

/// Maximizes |g(z0)|; z0 may coincide with a constraint point.
/// Throws ConditioningError when two base points are numerically indistinguishable.
KernelCertificate solve_extremal_at_point(const ExtremalProblem& prob, const Complex& z0);

struct DpSolution {
  double value;
  Complex argmax_z0;
  KernelCertificate certificate;
};

/// sup over |z0| <= R, searched on |z0| = R (maximum modulus): uniform grid,
/// then golden-section refinement around the best grid local maxima and any
/// hint angles.
DpSolution solve_dp_over_disk(const ExtremalProblem& prob, int angular_nodes = kDefaultAngularNodes,
                              std::span<const double> hint_angles = {});

struct InteriorCheck {
  double max_value;  // largest inner-problem value over the sampled points
  Complex argmax;
  bool ok;           // max_value <= circle value + 1e-8
};

/// Debug check of the maximum-modulus reduction: solves the inner problem at
/// `samples` seeded points area-uniform in |z0| < R.
InteriorCheck check_interior_max(const ExtremalProblem& prob, const DpSolution& circle, int samples,
                                 std::uint64_t seed);

struct CertificateCheck {
  double norm;              // ||g||_2 by boundary quadrature
  double value_at_z0;       // |g(z0)|
  double max_constraint;    // max_j c(zeta_j) |g(zeta_j)|
  bool ok;
  std::string message;
};

/// Independent re-validation from the coefficients alone (Szegő kernel sums
/// and boundary quadrature): norm <= 1 + tol, constraints within tol,
/// |g(z0)| = achieved_value within tol.
CertificateCheck validate_kernel_certificate(const KernelCertificate& cert, const ExtremalProblem& prob,
                                             double tol = kCertificateTolerance);

/// A feasible finite Blaschke product is inner, so its objective value is a
/// lower bound for D_p for every p in [1, inf]. Re-validates the certificate
/// (constraints, objective, ||B||_p = 1 within 1e-6) before emitting it.
CertifiedBound lower_bound_dp_from_blaschke(const CertifiedBound& bound, const ExtremalProblem& prob);

}  // namespace hardy
