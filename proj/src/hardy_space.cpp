#include "hardy/hardy_space.hpp"

#include <algorithm>
#include <bit>
#include <numbers>

#include "hardy/random.hpp"

namespace hardy {

namespace {

Complex on_circle(double radius, double theta) { return std::polar(radius, theta); }

}  // namespace

BoundaryEvaluator BoundaryEvaluator::constant(Complex c) {
  return {[c](double, double) { return c; }, true};
}

BoundaryEvaluator BoundaryEvaluator::polynomial(Eigen::VectorXcd coeffs) {
  return {[coeffs = std::move(coeffs)](double r, double theta) {
            const Complex z = on_circle(r, theta);
            Complex acc(0.0);
            for (Eigen::Index k = coeffs.size() - 1; k >= 0; --k) acc = acc * z + coeffs[k];
            return acc;
          },
          true};
}

BoundaryEvaluator BoundaryEvaluator::blaschke(const ZeroConfiguration& cfg) {
  return {[cfg](double r, double theta) { return blaschke_product(cfg, on_circle(r, theta)); }, true};
}

BoundaryEvaluator BoundaryEvaluator::kernel_combination(std::vector<Complex> points,
                                                        Eigen::VectorXcd coeffs) {
  if (static_cast<Eigen::Index>(points.size()) != coeffs.size())
    throw ValidationError("kernel_combination: point and coefficient counts differ");
  for (const auto& w : points) DiskPoint{w};
  return {[points = std::move(points), coeffs = std::move(coeffs)](double r, double theta) {
            const Complex z = on_circle(r, theta);
            Complex acc(0.0);
            for (std::size_t i = 0; i < points.size(); ++i)
              acc += coeffs[static_cast<Eigen::Index>(i)] / (1.0 - std::conj(points[i]) * z);
            return acc;
          },
          true};
}

BoundaryEvaluator BoundaryEvaluator::analytic(std::function<Complex(Complex)> f,
                                              bool continuous_to_boundary) {
  return {[f = std::move(f)](double r, double theta) { return f(on_circle(r, theta)); },
          continuous_to_boundary};
}

double hp_norm(const BoundaryEvaluator& g, HardyExponent p, int nodes, double radius) {
  if (nodes < 16 || !std::has_single_bit(static_cast<unsigned>(nodes)))
    throw DomainError("hp_norm: nodes must be a power of two >= 16, got " + std::to_string(nodes));
  if (!(radius > 0.0) || radius > 1.0)
    throw DomainError("hp_norm: radius must lie in (0, 1], got " + std::to_string(radius));
  if (radius == 1.0 && !g.continuous_to_boundary)
    throw DomainError("hp_norm: radius 1 requires a function continuous up to the boundary");

  const double step = 2.0 * std::numbers::pi / nodes;
  if (p.is_infinite()) {
    double best = 0.0;
    for (int k = 0; k < nodes; ++k) best = std::max(best, std::abs(g(radius, k * step)));
    return best;
  }
  const double pv = p.value();
  double sum = 0.0, carry = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double m = std::abs(g(radius, k * step));
    const double term = (pv == 2.0 ? m * m : (pv == 1.0 ? m : std::pow(m, pv))) - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  return std::pow(sum / nodes, 1.0 / pv);
}

HardyNorm hardy_norm(const BoundaryEvaluator& g, HardyExponent p, int nodes) {
  if (g.continuous_to_boundary) return {hp_norm(g, p, nodes, 1.0), 1.0, false};
  return {hp_norm(g, p, nodes, kInteriorNormRadius), kInteriorNormRadius, true};
}

double pointwise_growth_bound(HardyExponent p, const Complex& z) {
  if (p.is_infinite()) return 1.0;
  return std::pow(detail::one_minus_abs2(z), -1.0 / p.value());
}

PointwiseReport check_pointwise_bound(const BoundaryEvaluator& g, HardyExponent p, const DiskPoint& z) {
  const double value = std::abs(g.at(z.value()));
  const double bound = pointwise_growth_bound(p, z.value());
  return {value, bound, value <= bound + 1e-9};
}

int quadrature_nodes_for(double max_modulus, int floor) {
  int nodes = std::max(16, static_cast<int>(std::bit_ceil(static_cast<unsigned>(floor))));
  if (max_modulus <= 0.0) return nodes;
  // aliasing error of the trapezoid rule decays like max_modulus^nodes
  const double needed = std::log(1e-18) / std::log(std::min(max_modulus, 1.0 - 1e-15));
  while (nodes < needed && nodes < (1 << 22)) nodes *= 2;
  return nodes;
}

std::vector<UnitNormFunction> builtin_unit_norm_family(HardyExponent p, unsigned long long seed,
                                                       int per_kind) {
  Rng rng(seed);
  std::vector<UnitNormFunction> family;
  for (int i = 0; i < per_kind; ++i) {
    const Complex c = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
    family.push_back({"constant", BoundaryEvaluator::constant(c)});
  }
  for (int i = 0; i < per_kind; ++i) {
    const Complex w = std::polar(rng.uniform(0.0, 0.9), rng.uniform(0.0, 2.0 * std::numbers::pi));
    auto kernel = BoundaryEvaluator::kernel_combination({w}, Eigen::VectorXcd::Ones(1));
    double norm;
    if (p.is_infinite())
      norm = 1.0 / (1.0 - std::abs(w));
    else if (p.value() == 2.0)
      norm = 1.0 / std::sqrt(detail::one_minus_abs2(w));
    else
      norm = hp_norm(kernel, p, quadrature_nodes_for(std::abs(w)));
    family.push_back({"normalized_kernel",
                      BoundaryEvaluator::kernel_combination({w}, Eigen::VectorXcd::Constant(1, 1.0 / norm))});
  }
  for (int i = 0; i < per_kind; ++i) {
    const int degree = 1 + static_cast<int>(rng.below(4));
    std::vector<DiskPoint> zeros;
    for (int j = 0; j < degree; ++j)
      zeros.emplace_back(std::polar(rng.uniform(0.0, 0.9), rng.uniform(0.0, 2.0 * std::numbers::pi)));
    family.push_back({"blaschke", BoundaryEvaluator::blaschke(ZeroConfiguration(std::move(zeros)))});
  }
  return family;
}

}  // namespace hardy
