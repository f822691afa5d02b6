#include <doctest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "hardy/errors.hpp"
#include "hardy/hardy_space.hpp"

using namespace hardy;
using hardy::testing::random_configuration;
using hardy::testing::random_in_disk;

namespace {

// Composite Simpson on [0, 2pi], independent of the library's trapezoid rule.
template <typename F>
double simpson_mean(F f, int intervals) {
  const double h = 2.0 * std::numbers::pi / intervals;
  double s = f(0.0) + f(2.0 * std::numbers::pi);
  for (int k = 1; k < intervals; ++k) s += (k % 2 ? 4.0 : 2.0) * f(k * h);
  return s * h / 3.0 / (2.0 * std::numbers::pi);
}

}  // namespace

TEST_CASE("HardyExponent") {
  CHECK_THROWS_AS(HardyExponent(0.5), DomainError);
  CHECK(HardyExponent::infinity().is_infinite());
  CHECK(HardyExponent(3.0).value() == 3.0);
}

TEST_CASE("hp_norm closed forms") {
  const auto one = BoundaryEvaluator::constant(1.0);
  for (double p : {1.0, 2.0, 3.5, 4.0})
    for (double r : {0.3, 1.0}) CHECK(hp_norm(one, HardyExponent(p), 64, r) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hp_norm(one, HardyExponent::infinity(), 64) == 1.0);

  const auto lin = BoundaryEvaluator::polynomial(Eigen::Vector2cd(1.0, 1.0));
  CHECK(std::abs(hp_norm(lin, HardyExponent(2.0), 256) - std::sqrt(2.0)) < 1e-14);
  CHECK(hp_norm(lin, HardyExponent::infinity(), 256) == doctest::Approx(2.0));

  // (1/2pi) int |1 + e^{it}|^4 dt, by Simpson.
  const double oracle = simpson_mean([](double t) { return std::pow(2.0 + 2.0 * std::cos(t), 2); }, 1 << 14);
  CHECK(std::abs(oracle - 6.0) < 1e-12);
  CHECK(std::abs(hp_norm(lin, HardyExponent(4.0), 256) - std::pow(oracle, 0.25)) < 1e-12);
  CHECK(std::abs(std::pow(oracle, 0.25) - 1.56508) < 1e-5);
}

TEST_CASE("hp_norm preconditions") {
  const auto one = BoundaryEvaluator::constant(1.0);
  CHECK_THROWS_AS(hp_norm(one, HardyExponent(2.0), 100), DomainError);
  CHECK_THROWS_AS(hp_norm(one, HardyExponent(2.0), 8), DomainError);
  CHECK_THROWS_AS(hp_norm(one, HardyExponent(2.0), 64, 0.0), DomainError);
  CHECK_THROWS_AS(hp_norm(one, HardyExponent(2.0), 64, 1.5), DomainError);
  const auto interior = BoundaryEvaluator::analytic([](Complex z) { return 1.0 / (1.0 - z); }, false);
  CHECK_THROWS_AS(hp_norm(interior, HardyExponent(2.0), 64, 1.0), DomainError);
  CHECK_NOTHROW(hp_norm(interior, HardyExponent(2.0), 64, 0.5));
}

TEST_CASE("hardy_norm falls back to an interior radius") {
  // 1/(1 - z/2) has coefficients 2^-k, so ||.||_2^2 = 4/3.
  const auto f = BoundaryEvaluator::analytic([](Complex z) { return 1.0 / (1.0 - 0.5 * z); }, false);
  const HardyNorm n = hardy_norm(f, HardyExponent(2.0));
  CHECK(n.biased);
  CHECK(n.radius < 1.0);
  CHECK(n.value == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-5));
  const HardyNorm m = hardy_norm(BoundaryEvaluator::constant(2.0), HardyExponent(2.0));
  CHECK_FALSE(m.biased);
  CHECK(m.value == doctest::Approx(2.0));
}

TEST_CASE("h2_norm_from_coefficients") {
  CHECK(h2_norm_from_coefficients(Eigen::VectorXcd::Constant(1, 1.0)) == 1.0);
  CHECK(h2_norm_from_coefficients(Eigen::Vector2cd(1.0, 1.0)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(h2_norm_from_coefficients(Eigen::Vector2cd(0.6, Complex(0.0, 0.8))) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("Parseval agrees with quadrature on random polynomials") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXcd c(1 + rng.below(12));
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    CHECK(hp_norm(BoundaryEvaluator::polynomial(c), HardyExponent(2.0), 64) ==
          doctest::Approx(h2_norm_from_coefficients(c)).epsilon(1e-13));
  }
}

TEST_CASE("szego_kernel") {
  CHECK(szego_kernel(DiskPoint(0.0, 0.0), Complex(0.7, 0.1)) == Complex(1.0));
  CHECK(std::abs(szego_kernel(DiskPoint(0.5, 0.0), Complex(0.5)) - 4.0 / 3.0) < 1e-15);

  // <z^2, k_w> by boundary quadrature against the coefficient pairing sum_k f_k w^k.
  const Complex w(0.3, 0.1);
  const int n = 256;
  Complex pairing = 0.0;
  for (int k = 0; k < n; ++k) {
    const Complex zeta = std::polar(1.0, 2.0 * std::numbers::pi * k / n);
    pairing += zeta * zeta * std::conj(szego_kernel(DiskPoint(w), zeta));
  }
  pairing /= double(n);
  const Complex coefficient_pairing = w * w;  // only f_2 = 1 survives
  CHECK(std::abs(pairing - coefficient_pairing) < 1e-15);
}

TEST_CASE("check_pointwise_bound") {
  const auto r1 = check_pointwise_bound(BoundaryEvaluator::constant(1.0), HardyExponent(2.0), DiskPoint(0.5, 0.0));
  CHECK(r1.ok);
  CHECK(r1.value == 1.0);
  CHECK(r1.bound == doctest::Approx(1.0 / std::sqrt(0.75)).epsilon(1e-15));

  // normalized kernel at w = 0.5: ||k_w||^2 = k_w(w) = 1/(1-|w|^2), equality at z = w.
  const DiskPoint w(0.5, 0.0);
  Eigen::VectorXcd c(1);
  c(0) = std::sqrt(1.0 - 0.25);
  const auto g = BoundaryEvaluator::kernel_combination({w.value()}, c);
  CHECK(hp_norm(g, HardyExponent(2.0), 256) == doctest::Approx(1.0).epsilon(1e-14));
  const auto r2 = check_pointwise_bound(g, HardyExponent(2.0), w);
  CHECK(r2.ok);
  CHECK(std::abs(r2.value - r2.bound) < 1e-12);

  Rng rng(22);
  for (int i = 0; i < 50; ++i) {
    const auto b = BoundaryEvaluator::blaschke(random_configuration(rng, 3, 0.9));
    const auto r = check_pointwise_bound(b, HardyExponent(1.0), DiskPoint(random_in_disk(rng, 0.99)));
    CHECK(r.ok);
    CHECK(r.value <= 1.0 + 1e-12);
  }
}

TEST_CASE("built-in unit-norm family has unit norm") {
  for (double p : {1.0, 2.0, 4.0}) {
    const auto family = builtin_unit_norm_family(HardyExponent(p), 5);
    CHECK(family.size() >= 12);
    for (const auto& f : family) {
      const double n = hp_norm(f.g, HardyExponent(p), 1 << 14);
      INFO(f.name << " p=" << p);
      CHECK(std::abs(n - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("quadrature_nodes_for") {
  CHECK(quadrature_nodes_for(0.5) == 4096);
  const int n = quadrature_nodes_for(0.999);
  CHECK(std::pow(0.999, n) < 1e-18);
  CHECK((n & (n - 1)) == 0);
}
