#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "hardy/disk.hpp"

namespace hardy {

/// Exponent p of H^p, 1 <= p <= inf.
class HardyExponent {
 public:
  explicit HardyExponent(double p = 2.0) : p_(p) {
    if (!(p >= 1.0)) throw DomainError("HardyExponent: p must be >= 1, got " + std::to_string(p));
  }
  static HardyExponent infinity() { return HardyExponent(std::numeric_limits<double>::infinity()); }

  double value() const noexcept { return p_; }
  bool is_infinite() const noexcept { return std::isinf(p_); }

 private:
  double p_;
};

/// g(r e^{i theta}) for r in (0, 1]. `continuous_to_boundary` must be true
/// before the evaluator may be sampled on the unit circle itself.
struct BoundaryEvaluator {
  std::function<Complex(double radius, double theta)> eval;
  bool continuous_to_boundary = false;

  Complex operator()(double radius, double theta) const { return eval(radius, theta); }
  Complex at(const Complex& z) const { return eval(std::abs(z), std::arg(z)); }

  static BoundaryEvaluator constant(Complex c);
  /// sum_k coeffs[k] z^k (Horner).
  static BoundaryEvaluator polynomial(Eigen::VectorXcd coeffs);
  static BoundaryEvaluator blaschke(const ZeroConfiguration& cfg);
  /// sum_i coeffs[i] k_{points[i]}(z); all points strictly inside the disk.
  static BoundaryEvaluator kernel_combination(std::vector<Complex> points, Eigen::VectorXcd coeffs);
  /// Any function analytic on a neighbourhood of the closed disk.
  static BoundaryEvaluator analytic(std::function<Complex(Complex)> f, bool continuous_to_boundary);
};

inline constexpr int kDefaultQuadratureNodes = 4096;
inline constexpr double kInteriorNormRadius = 1.0 - 1e-6;

/// Trapezoidal p-mean of |g| on the circle of the given radius; max over nodes for p = inf.
double hp_norm(const BoundaryEvaluator& g, HardyExponent p, int nodes = kDefaultQuadratureNodes,
               double radius = 1.0);

struct HardyNorm {
  double value;
  double radius;
  bool biased;  // evaluated at kInteriorNormRadius: underestimates the r -> 1 limit
};

/// ||g||_p at radius 1 when g is continuous up to the boundary, otherwise at
/// kInteriorNormRadius with `biased` set.
HardyNorm hardy_norm(const BoundaryEvaluator& g, HardyExponent p, int nodes = kDefaultQuadratureNodes);

/// Parseval: sqrt(sum |c_k|^2).
inline double h2_norm_from_coefficients(const Eigen::Ref<const Eigen::VectorXcd>& coeffs) {
  return coeffs.norm();
}

/// 1 / (1 - conj(w) z).
inline Complex szego_kernel(const DiskPoint& w, const Complex& z) {
  detail::require_closed_disk(z, "szego_kernel");
  return 1.0 / (1.0 - std::conj(w.value()) * z);
}

/// (1 - |z|^2)^{-1/p}; 1 for p = inf.
double pointwise_growth_bound(HardyExponent p, const Complex& z);

struct PointwiseReport {
  double value;
  double bound;
  bool ok;
};

/// |g(z)| against (1 - |z|^2)^{-1/p} + 1e-9 for a caller-certified unit-norm g.
PointwiseReport check_pointwise_bound(const BoundaryEvaluator& g, HardyExponent p, const DiskPoint& z);

/// Smallest power-of-two node count >= floor such that a kernel or rational
/// integrand with singularities at 1/conj(w), |w| <= max_modulus, is resolved
/// to ~1e-18 by the trapezoid rule.
int quadrature_nodes_for(double max_modulus, int floor = kDefaultQuadratureNodes);

struct UnitNormFunction {
  std::string name;
  BoundaryEvaluator g;
};

/// Constants, H^p-normalized Szegő kernels and Blaschke products, each with
/// ||g||_p = 1. Deterministic in `seed`.
std::vector<UnitNormFunction> builtin_unit_norm_family(HardyExponent p, unsigned long long seed,
                                                       int per_kind = 4);

}  // namespace hardy
