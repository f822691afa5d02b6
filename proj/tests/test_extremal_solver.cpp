#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "hardy/errors.hpp"
#include "hardy/extremal_solver.hpp"

using namespace hardy;
using hardy::testing::random_sample;

namespace {

ExtremalProblem problem(PointSample s, double eps, double R, ConstraintMode mode = ConstraintMode::weighted) {
  return ExtremalProblem{std::move(s), eps, R, HardyExponent(2.0), mode};
}

// Taylor coefficients of g(z) = (z - a) h(z) for h with coefficients c.
Eigen::VectorXcd times_linear(const Eigen::VectorXcd& c, Complex a) {
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(c.size() + 1);
  g.head(c.size()) -= a * c;
  g.tail(c.size()) += c;
  return g;
}

Complex horner(const Eigen::VectorXcd& c, Complex z) {
  Complex v = 0.0;
  for (Eigen::Index k = c.size(); k-- > 0;) v = v * z + c(k);
  return v;
}

// sup |g(z0)| over polynomials of degree <= D with ||g||_2 = 1 and g(a) = 0,
// by projecting the truncated kernel at z0 off the truncated kernel at a.
double truncated_pinned_sup(Complex a, Complex z0, int D) {
  Eigen::VectorXcd kz(D + 1), ka(D + 1);
  for (int k = 0; k <= D; ++k) {
    kz(k) = std::pow(std::conj(z0), k);
    ka(k) = std::pow(std::conj(a), k);
  }
  const Eigen::VectorXcd proj = kz - (ka.dot(kz) / ka.squaredNorm()) * ka;
  return proj.norm();
}

}  // namespace

TEST_CASE("slack regime: normalized kernel value") {
  const auto prob = problem(generate_sample(Family::radial_harmonic, 8, {}, 0), 1.0, 0.6);
  const auto at = solve_extremal_at_point(prob, Complex(0.6));
  CHECK(std::abs(at.achieved_value - 1.25) < 1e-6);
  CHECK(at.residuals.kkt_residual <= kKktContract);

  const auto origin = solve_extremal_at_point(prob, Complex(0.0));
  CHECK(std::abs(origin.achieved_value - 1.0) < 1e-6);

  const auto dp = solve_dp_over_disk(prob);
  CHECK(std::abs(dp.value - 1.25) < 1e-6);
  CHECK(std::abs(std::abs(dp.argmax_z0) - 0.6) < 1e-12);

  Rng rng(41);
  for (int t = 0; t < 10; ++t) {
    const Complex z0 = hardy::testing::random_in_disk(rng, 0.9);
    const auto c = solve_extremal_at_point(prob, z0);
    CHECK(std::abs(c.achieved_value - 1.0 / std::sqrt(1.0 - std::norm(z0))) < 1e-6);
  }
}

TEST_CASE("pinned zero: (11/13)(5/4) against a truncated projection and a random sampler") {
  const auto prob = problem(PointSample::from_points({0.5}), 0.0, 0.6);
  const Complex z0(-0.6);
  const double closed = 11.0 / 13.0 * 1.25;  // 1.0576923...
  const auto c = solve_extremal_at_point(prob, z0);
  CHECK(std::abs(c.achieved_value - closed) < 1e-6);

  // The truncations increase to the closed form.
  CHECK(truncated_pinned_sup(0.5, z0, 20) < closed);
  CHECK(std::abs(truncated_pinned_sup(0.5, z0, 120) - closed) < 1e-12);

  // Random feasible polynomials never beat it; the best of many comes close.
  Rng rng(42);
  double best = 0.0;
  const Eigen::VectorXcd kernel_like = [&] {
    Eigen::VectorXcd v(30);
    for (int k = 0; k < 30; ++k) v(k) = std::pow(std::conj(z0), k);
    return v;
  }();
  for (int t = 0; t < 2000; ++t) {
    Eigen::VectorXcd h(30);
    for (int k = 0; k < 30; ++k) h(k) = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    if (t % 2 == 0) h += rng.uniform(0.0, 40.0) * kernel_like;  // bias toward the maximizer's direction
    Eigen::VectorXcd g = times_linear(h, 0.5);
    g /= g.norm();
    CHECK(std::abs(horner(g, 0.5)) < 1e-12);
    best = std::max(best, std::abs(horner(g, z0)));
  }
  CHECK(best <= closed + 1e-12);
  CHECK(best > 0.95 * closed);

  const auto dp = solve_dp_over_disk(prob);
  CHECK(std::abs(dp.value - closed) < 1e-6);
  CHECK(std::abs(dp.argmax_z0 - z0) < 1e-5);
}

TEST_CASE("z0 at a constraint point") {
  const auto prob = problem(PointSample::from_points({0.5, Complex(0.0, 0.7)}), 0.05, 0.5);
  const auto c = solve_extremal_at_point(prob, Complex(0.5));
  // (1 - 0.5)|g(0.5)| <= 0.05
  CHECK(c.achieved_value <= 0.1 + 1e-8);
  CHECK(validate_kernel_certificate(c, prob).ok);
}

TEST_CASE("conjugation symmetry of the angular profile") {
  const auto prob = problem(PointSample::from_points({0.5, Complex(0.3, 0.6), Complex(0.3, -0.6), -0.8}), 0.05, 0.6);
  for (double theta : {0.3, 1.1, 2.0, 2.9}) {
    const double a = solve_extremal_at_point(prob, std::polar(0.6, theta)).achieved_value;
    const double b = solve_extremal_at_point(prob, std::polar(0.6, -theta)).achieved_value;
    CHECK(std::abs(a - b) < 1e-8);
  }
}

TEST_CASE("disk maximum sits on the circle") {
  Rng rng(43);
  for (int t = 0; t < 5; ++t) {
    const auto prob = problem(random_sample(rng, 6, 0.2, 0.95), 0.05, 0.5);
    const auto dp = solve_dp_over_disk(prob);
    for (int k = 0; k < 10; ++k) {
      const Complex z = hardy::testing::random_in_disk(rng, 0.5);
      CHECK(solve_extremal_at_point(prob, z).achieved_value <= dp.value + 1e-8);
    }
    const auto inside = check_interior_max(prob, dp, 20, static_cast<std::uint64_t>(t));
    CHECK(inside.ok);
    CHECK(std::abs(inside.argmax) < 0.5);
  }
}

TEST_CASE("certificates re-validate independently and reject tampering") {
  Rng rng(44);
  for (int t = 0; t < 10; ++t) {
    const auto mode = t % 2 ? ConstraintMode::plain : ConstraintMode::weighted;
    const auto prob = problem(random_sample(rng, 1 + static_cast<int>(rng.below(9)), 0.1, 0.95),
                              rng.uniform(0.01, 0.3), rng.uniform(0.2, 0.8), mode);
    const auto dp = solve_dp_over_disk(prob, 64);
    const auto check = validate_kernel_certificate(dp.certificate, prob);
    CHECK_MESSAGE(check.ok, check.message);
    CHECK(std::abs(check.value_at_z0 - dp.value) < 1e-8);
    CHECK(check.norm <= 1.0 + 1e-8);
    CHECK(dp.certificate.residuals.kkt_residual <= kKktContract);
    CHECK(dp.certificate.upper_bound >= dp.certificate.achieved_value);

    auto bigger = dp.certificate;
    bigger.coefficients *= 1.01;
    CHECK_FALSE(validate_kernel_certificate(bigger, prob).ok);
    auto inflated = dp.certificate;
    inflated.achieved_value += 1e-6;
    CHECK_FALSE(validate_kernel_certificate(inflated, prob).ok);
  }
}

TEST_CASE("near-duplicate constraint points") {
  // within the merge distance: merged, solvable
  const auto merged = problem(PointSample::from_points({0.5, Complex(0.5 + 1e-10, 0.0)}), 0.05, 0.5);
  CHECK(KernelProgram(merged).constraint_points().size() == 1);
  CHECK_NOTHROW(solve_extremal_at_point(merged, Complex(0.3)));

  // outside it but below the separation floor: reported by pair
  const auto close = problem(PointSample::from_points({-0.2, 0.5, Complex(0.5 + 2e-8, 0.0)}), 0.05, 0.5);
  try {
    solve_extremal_at_point(close, Complex(0.3));
    FAIL("expected ConditioningError");
  } catch (const ConditioningError& e) {
    CHECK(e.first_index() == 1);
    CHECK(e.second_index() == 2);
  }

  // well separated at the ridge scale
  const auto apart = problem(PointSample::from_points({-0.2, 0.5, Complex(0.5 + 2e-5, 0.0)}), 0.05, 0.5);
  const auto c = solve_extremal_at_point(apart, Complex(0.3));
  CHECK(validate_kernel_certificate(c, apart).ok);
}

TEST_CASE("monotonicity in epsilon, R and the sample") {
  Rng rng(45);
  for (int t = 0; t < 4; ++t) {
    const auto sample = random_sample(rng, 5, 0.1, 0.9);
    double prev = 0.0;
    for (double eps : {0.01, 0.03, 0.1, 0.3, 1.0}) {
      const double v = solve_dp_over_disk(problem(sample, eps, 0.5), 64).value;
      CHECK(v >= prev - 1e-8);
      prev = v;
    }
    prev = 0.0;
    for (double R : {0.2, 0.4, 0.6, 0.8}) {
      const double v = solve_dp_over_disk(problem(sample, 0.05, R), 64).value;
      CHECK(v >= prev - 1e-8);
      prev = v;
    }
    const auto grown = sample.merged_with(random_sample(rng, 3, 0.1, 0.9));
    CHECK(solve_dp_over_disk(problem(grown, 0.05, 0.5), 64).value <=
          solve_dp_over_disk(problem(sample, 0.05, 0.5), 64).value + 1e-8);
  }
}

TEST_CASE("Blaschke certificates as D_p lower bounds") {
  const auto prob = problem(PointSample::from_points({0.5}), 1.0, 0.5);
  const auto bf = brute_force_g(prob, 3);
  for (double p : {1.0, 2.0, 4.0, std::numeric_limits<double>::infinity()}) {
    auto q = prob;
    q.p = HardyExponent(p);
    const auto lb = lower_bound_dp_from_blaschke(bf, q);
    CHECK(std::abs(lb.value - 0.8) < 1e-12);
  }

  CHECK_THROWS_AS(lower_bound_dp_from_blaschke(CertifiedBound{}, prob), ValidationError);
  auto heuristic = bf;
  heuristic.kind = BoundKind::heuristic;
  CHECK_THROWS_AS(lower_bound_dp_from_blaschke(heuristic, prob), ValidationError);
  auto infeasible = bf;
  infeasible.certificate = ZeroConfiguration{DiskPoint(-0.5, 0.0)};
  CHECK_THROWS_AS(lower_bound_dp_from_blaschke(infeasible, problem(PointSample::from_points({0.5}), 0.01, 0.5)),
                  ValidationError);
}

TEST_CASE("sandwich on random instances") {
  Rng rng(46);
  for (int t = 0; t < 20; ++t) {
    const auto prob = problem(random_sample(rng, 1 + static_cast<int>(rng.below(8)), 0.1, 0.95),
                              rng.uniform(0.01, 0.3), rng.uniform(0.2, 0.8));
    const auto g = search_g(prob, 100, static_cast<std::uint64_t>(t));
    if (g.infeasible()) continue;
    const auto lb = lower_bound_dp_from_blaschke(g, prob);
    const auto d2 = solve_dp_over_disk(prob);
    CHECK(lb.value <= d2.value + 1e-8);
  }
}
