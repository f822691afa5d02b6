#pragma once

// Möbius factors, the weight q(z) = 1 - |z|, and (weighted) finite Blaschke
// products on the unit disk. Moduli of products are accumulated in log-space.

#include <cmath>
#include <complex>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hardy/errors.hpp"

namespace hardy {

template <typename Real>
struct DiskTraits {
  // Zeros and constraint points must satisfy |z| <= 1 - interior_margin.
  static constexpr Real interior_margin = Real(1e-15);
  // Evaluation points may sit on the unit circle up to a few ulps.
  static constexpr Real boundary_slack = 8 * std::numeric_limits<Real>::epsilon();
};

/// A point strictly inside the unit disk.
template <typename Real>
class BasicDiskPoint {
 public:
  using Complex = std::complex<Real>;

  BasicDiskPoint() = default;
  BasicDiskPoint(Real re, Real im) : BasicDiskPoint(Complex(re, im)) {}
  explicit BasicDiskPoint(Complex z) : z_(z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
        !(std::abs(z) <= Real(1) - DiskTraits<Real>::interior_margin))
      throw DomainError("DiskPoint: modulus must be < 1, got |z| = " +
                        std::to_string(static_cast<double>(std::abs(z))));
  }

  const Complex& value() const noexcept { return z_; }
  Real re() const noexcept { return z_.real(); }
  Real im() const noexcept { return z_.imag(); }
  Real modulus() const noexcept { return std::abs(z_); }

  operator Complex() const noexcept { return z_; }
  friend bool operator==(const BasicDiskPoint&, const BasicDiskPoint&) = default;

 private:
  Complex z_{};
};

/// Multiset Z_n of zeros (n >= 1, repeats allowed and counted).
template <typename Real>
class BasicZeroConfiguration {
 public:
  using Point = BasicDiskPoint<Real>;

  explicit BasicZeroConfiguration(std::vector<Point> zeros) : zeros_(std::move(zeros)) {
    if (zeros_.empty()) throw DomainError("ZeroConfiguration: at least one zero is required");
  }
  BasicZeroConfiguration(std::initializer_list<Point> zeros)
      : BasicZeroConfiguration(std::vector<Point>(zeros)) {}

  std::size_t degree() const noexcept { return zeros_.size(); }
  std::span<const Point> zeros() const noexcept { return zeros_; }
  const Point& operator[](std::size_t i) const { return zeros_[i]; }

  friend bool operator==(const BasicZeroConfiguration&, const BasicZeroConfiguration&) = default;

 private:
  std::vector<Point> zeros_;
};

using DiskPoint = BasicDiskPoint<double>;
using ZeroConfiguration = BasicZeroConfiguration<double>;
using Complex = std::complex<double>;

namespace detail {

template <typename Real>
void require_closed_disk(const std::complex<Real>& z, const char* who) {
  if (!(std::abs(z) <= Real(1) + DiskTraits<Real>::boundary_slack))
    throw DomainError(std::string(who) + ": evaluation point outside the closed disk, |z| = " +
                      std::to_string(static_cast<double>(std::abs(z))));
}

// 1 - |z|^2 without cancellation for |z| close to 1.
template <typename Real>
Real one_minus_abs2(const std::complex<Real>& z) {
  const Real r = std::abs(z);
  return std::max(Real(0), (Real(1) - r) * (Real(1) + r));
}

}  // namespace detail

/// (z - a) / (1 - conj(a) z).
template <typename Real>
std::complex<Real> blaschke_factor(const BasicDiskPoint<Real>& a, const std::complex<Real>& z) {
  detail::require_closed_disk(z, "blaschke_factor");
  const std::complex<Real> av = a.value();
  return (z - av) / (Real(1) - std::conj(av) * z);
}

/// log |(z - a) / (1 - conj(a) z)|; -inf at z = a.
///
/// Uses 1 - |b|^2 = (1 - |a|^2)(1 - |z|^2) / |1 - conj(a) z|^2 when |b| is close
/// to one, so factors whose zero and argument are both near the circle keep
/// full relative accuracy in log|b|.
template <typename Real>
Real blaschke_factor_log_modulus(const BasicDiskPoint<Real>& a, const std::complex<Real>& z) {
  const std::complex<Real> av = a.value();
  const Real num = std::abs(z - av);
  if (num == Real(0)) return -std::numeric_limits<Real>::infinity();
  const Real den = std::abs(Real(1) - std::conj(av) * z);
  const Real ratio = num / den;
  if (ratio < Real(0.7)) return std::log(ratio);
  const Real defect = detail::one_minus_abs2(av) * detail::one_minus_abs2(z) / (den * den);
  return Real(0.5) * std::log1p(-defect);
}

/// q(z) = 1 - |z|.
template <typename Real>
Real weight_q(const std::complex<Real>& z) {
  detail::require_closed_disk(z, "weight_q");
  return std::max(Real(0), Real(1) - std::abs(z));
}

/// log |B(Z_n; z)|, plus log q(z) when weighted. -inf iff the product vanishes.
template <typename Real>
Real product_log_modulus(const BasicZeroConfiguration<Real>& cfg, const std::complex<Real>& z,
                         bool weighted) {
  detail::require_closed_disk(z, "product_log_modulus");
  Real acc = 0;
  if (weighted) {
    const Real q = weight_q(z);
    if (q == Real(0)) return -std::numeric_limits<Real>::infinity();
    acc = std::log(q);
  }
  for (const auto& a : cfg.zeros()) {
    const Real l = blaschke_factor_log_modulus(a, z);
    if (l == -std::numeric_limits<Real>::infinity()) return l;
    acc += l;
  }
  return acc;
}

template <typename Real>
Real product_modulus(const BasicZeroConfiguration<Real>& cfg, const std::complex<Real>& z,
                     bool weighted) {
  return std::exp(product_log_modulus(cfg, z, weighted));
}

/// Complex value of the unweighted product B(Z_n; z).
template <typename Real>
std::complex<Real> blaschke_product(const BasicZeroConfiguration<Real>& cfg,
                                    const std::complex<Real>& z) {
  std::complex<Real> acc(1);
  for (const auto& a : cfg.zeros()) acc *= blaschke_factor(a, z);
  return acc;
}

/// |a - b| / |1 - conj(b) a|.
template <typename Real>
Real pseudo_hyperbolic_distance(const std::complex<Real>& a, const std::complex<Real>& b) {
  const Real den = std::abs(Real(1) - std::conj(b) * a);
  return den == Real(0) ? Real(1) : std::abs(a - b) / den;
}

}  // namespace hardy
