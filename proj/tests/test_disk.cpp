#include <doctest.h>

#include <cmath>
#include <limits>

#include "generators.hpp"
#include "hardy/disk.hpp"
#include "hardy/errors.hpp"

using namespace hardy;
using hardy::testing::random_configuration;
using hardy::testing::random_in_disk;
using hardy::testing::random_on_circle;

TEST_CASE("DiskPoint rejects the boundary and beyond") {
  CHECK_NOTHROW(DiskPoint(0.3, 0.4));
  CHECK_NOTHROW(DiskPoint(1.0 - 1e-15, 0.0));
  CHECK_THROWS_AS(DiskPoint(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(DiskPoint(0.8, 0.8), DomainError);
  CHECK_THROWS_AS(DiskPoint(std::nan(""), 0.0), DomainError);
  CHECK_THROWS_AS(ZeroConfiguration(std::vector<DiskPoint>{}), DomainError);
}

TEST_CASE("blaschke_factor") {
  CHECK(blaschke_factor(DiskPoint(0.0, 0.0), Complex(0.3, 0.4)) == Complex(0.3, 0.4));
  CHECK(blaschke_factor(DiskPoint(0.5, 0.0), Complex(0.5)) == Complex(0.0));
  CHECK(std::abs(blaschke_factor(DiskPoint(0.5, 0.0), Complex(1.0)) - 1.0) < 1e-15);
  CHECK_THROWS_AS(blaschke_factor(DiskPoint(0.5, 0.0), Complex(1.01)), DomainError);

  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const DiskPoint a(random_in_disk(rng, 0.999));
    CHECK(std::abs(std::abs(blaschke_factor(a, random_on_circle(rng))) - 1.0) < 1e-12);
    CHECK(std::abs(blaschke_factor(a, random_in_disk(rng, 1.0))) <= 1.0 + 1e-12);
  }
}

TEST_CASE("weight_q") {
  CHECK(weight_q(Complex(0.0)) == 1.0);
  CHECK(weight_q(std::polar(0.9, 2.1)) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(weight_q(Complex(0.0, 1.0)) == 0.0);
  CHECK_THROWS_AS(weight_q(Complex(1.1)), DomainError);
}

TEST_CASE("product_log_modulus examples") {
  const ZeroConfiguration origin{DiskPoint(0.0, 0.0)};
  CHECK(product_log_modulus(origin, Complex(0.5), true) == doctest::Approx(std::log(0.25)).epsilon(1e-15));
  CHECK(product_modulus(origin, Complex(0.5), true) == doctest::Approx(0.25).epsilon(1e-15));

  const ZeroConfiguration pair{DiskPoint(0.5, 0.0), DiskPoint(-0.5, 0.0)};
  CHECK(product_modulus(pair, Complex(0.0), true) == doctest::Approx(0.25).epsilon(1e-15));

  const ZeroConfiguration half{DiskPoint(0.5, 0.0)};
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(product_log_modulus(half, Complex(0.5), true) == -inf);
  CHECK(product_log_modulus(half, Complex(0.5), false) == -inf);
  CHECK(product_log_modulus(half, Complex(0.0, 1.0), true) == -inf);
}

TEST_CASE("product moduli are bounded and unimodular on the circle") {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const auto cfg = random_configuration(rng, 1 + static_cast<int>(rng.below(12)), 0.999);
    const Complex z = random_in_disk(rng, 1.0);
    CHECK(product_modulus(cfg, z, false) <= 1.0 + 1e-12);
    CHECK(product_modulus(cfg, z, true) <= weight_q(z) + 1e-12);
    CHECK(std::abs(product_modulus(cfg, random_on_circle(rng), false) - 1.0) < 1e-12);
  }
}

TEST_CASE("log-space product agrees with the naive product") {
  Rng rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const auto cfg = random_configuration(rng, 1 + static_cast<int>(rng.below(20)), 0.9999);
    const Complex z = random_in_disk(rng, 0.9999);
    double naive = 1.0;
    for (const auto& a : cfg.zeros()) naive *= std::abs((z - a.value()) / (1.0 - std::conj(a.value()) * z));
    if (naive < 1e-300) continue;
    CHECK(std::abs(product_modulus(cfg, z, false) - naive) <= 1e-12 * naive);
    CHECK(std::abs(product_modulus(cfg, z, true) - naive * (1.0 - std::abs(z))) <= 1e-12 * naive);
  }
}

TEST_CASE("log-space product does not underflow near the boundary") {
  std::vector<DiskPoint> zeros(400, DiskPoint(0.0, 0.0));
  const ZeroConfiguration cfg(zeros);
  CHECK(product_log_modulus(cfg, Complex(0.1), false) == doctest::Approx(400 * std::log(0.1)));
  CHECK(product_modulus(cfg, Complex(0.1), false) == 0.0);
}

TEST_CASE("pseudo-hyperbolic distance is Moebius invariant") {
  Rng rng(14);
  for (int i = 0; i < 100; ++i) {
    const Complex a = random_in_disk(rng, 0.95), b = random_in_disk(rng, 0.95);
    const DiskPoint c(random_in_disk(rng, 0.9));
    const double d = pseudo_hyperbolic_distance(a, b);
    CHECK(d == doctest::Approx(pseudo_hyperbolic_distance(blaschke_factor(c, a), blaschke_factor(c, b))).epsilon(1e-9));
  }
}
