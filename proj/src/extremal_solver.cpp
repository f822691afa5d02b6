#include "hardy/extremal_solver.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <optional>

#include "hardy/random.hpp"

namespace hardy {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

double kernel_scale(const Complex& w) { return std::sqrt(detail::one_minus_abs2(w)); }

// <k̂_b, k̂_a> for unit-normalized Szegő kernels.
Complex normalized_gram(const Complex& a, const Complex& b) {
  return kernel_scale(a) * kernel_scale(b) / (1.0 - std::conj(b) * a);
}

std::pair<int, int> closest_pair(std::span<const Complex> pts) {
  std::pair<int, int> best{0, std::min<int>(1, static_cast<int>(pts.size()) - 1)};
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = pseudo_hyperbolic_distance(pts[i], pts[j]);
      if (d < best_d) {
        best_d = d;
        best = {static_cast<int>(i), static_cast<int>(j)};
      }
    }
  return best;
}

[[noreturn]] void throw_conditioning(std::span<const Complex> pts) {
  const auto [i, j] = closest_pair(pts);
  throw ConditioningError("Gram matrix numerically singular: points " + std::to_string(i) + " (" +
                              format_double(pts[i].real()) + "," + format_double(pts[i].imag()) + ") and " +
                              std::to_string(j) + " (" + format_double(pts[j].real()) + "," +
                              format_double(pts[j].imag()) + ") are at pseudo-hyperbolic distance " +
                              format_double(pseudo_hyperbolic_distance(pts[i], pts[j])),
                          i, j);
}

// Newton decrement^2 at which a centering stops; any positive multipliers give
// a valid dual bound, so centering only affects how tight it is.
constexpr double kCentered = 1e-9;

struct BarrierResult {
  Eigen::VectorXd x;
  double primal;
  double upper;
};

// maximize c.x  s.t.  |x| <= 1,  (p_j.x)^2 + (q_j.x)^2 <= beta_j^2  (beta_j > 0)
// by the log-barrier method with Newton centering. The dual point
// lambda = 1 / (t * slack) of each centering gives the upper bound
//   c^T H^{-1} c / 4 + lambda_0 + sum lambda_j beta_j^2,  H = lambda_0 I + sum lambda_j (p p^T + q q^T).
BarrierResult solve_modulus_program(const Eigen::VectorXd& c, const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q,
                                    const Eigen::VectorXd& beta, double gap_tol) {
  const Eigen::Index dim = c.size();
  const Eigen::Index k = P.cols();
  const Eigen::ArrayXd beta2 = beta.array().square();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);

  const auto slacks = [&](const Eigen::VectorXd& v, double& s0, Eigen::ArrayXd& s) {
    s0 = 1.0 - v.squaredNorm();
    s = beta2 - (P.transpose() * v).array().square() - (Q.transpose() * v).array().square();
    return s0 > 0.0 && (s > 0.0).all();
  };

  double t = 1.0;
  const auto barrier = [&](const Eigen::VectorXd& v, double v0, const Eigen::ArrayXd& vs) {
    return -t * c.dot(v) - std::log(v0) - vs.log().sum();
  };
  BarrierResult best{x, 0.0, std::numeric_limits<double>::infinity()};
  int stalled = 0;
  for (int outer = 0; outer < 60; ++outer) {
    double s0 = 0.0;
    Eigen::ArrayXd s;
    bool centered = false;
    for (int it = 0; it < 30 && !centered; ++it) {
      slacks(x, s0, s);
      const Eigen::ArrayXd alpha = (P.transpose() * x).array();
      const Eigen::ArrayXd gamma = (Q.transpose() * x).array();
      const Eigen::VectorXd grad = -t * c + (2.0 / s0) * x + P * (2.0 * alpha / s).matrix() +
                                   Q * (2.0 * gamma / s).matrix();
      // H = M M^T + ball terms, M = [P sqrt(2/s), Q sqrt(2/s), V 2/s], V = P diag(alpha) + Q diag(gamma)
      const Eigen::ArrayXd r1 = (2.0 / s).sqrt();
      const Eigen::ArrayXd r2 = 2.0 / s;
      Eigen::MatrixXd M(dim, 3 * k);
      M.leftCols(k) = P * r1.matrix().asDiagonal();
      M.middleCols(k, k) = Q * r1.matrix().asDiagonal();
      M.rightCols(k) = P * (alpha * r2).matrix().asDiagonal() + Q * (gamma * r2).matrix().asDiagonal();
      Eigen::MatrixXd H = (2.0 / s0) * Eigen::MatrixXd::Identity(dim, dim);
      H.selfadjointView<Eigen::Lower>().rankUpdate(x, 4.0 / (s0 * s0));
      H.selfadjointView<Eigen::Lower>().rankUpdate(M);
      const Eigen::VectorXd step = H.selfadjointView<Eigen::Lower>().ldlt().solve(-grad);
      const double decrement2 = -grad.dot(step);
      centered = !(decrement2 > kCentered);
      if (centered) break;
      // backtracking (Armijo) line search on the barrier function, inside the domain
      const double f = barrier(x, s0, s);
      double h = 1.0;
      Eigen::VectorXd trial = x + step;
      double ts0;
      Eigen::ArrayXd ts;
      while (h > 1e-10 && !(slacks(trial, ts0, ts) && barrier(trial, ts0, ts) <= f - 0.25 * h * decrement2)) {
        h *= 0.5;
        trial = x + h * step;
      }
      if (h <= 1e-10) break;  // rounding in f hides the remaining decrease
      x = trial;
    }
    // Uncentered at this t means the Hessian is outrunning double precision;
    // the bound below is still valid, and larger t mostly costs iterations.
    slacks(x, s0, s);
    const double lambda0 = 1.0 / (t * s0);
    const Eigen::VectorXd lambda = (1.0 / (t * s)).matrix();
    Eigen::MatrixXd Hd = lambda0 * Eigen::MatrixXd::Identity(dim, dim);
    Hd.noalias() += P * lambda.asDiagonal() * P.transpose();
    Hd.noalias() += Q * lambda.asDiagonal() * Q.transpose();
    const double upper = 0.25 * c.dot(Hd.ldlt().solve(c)) + lambda0 + lambda.dot(beta2.matrix());
    const double primal = c.dot(x);
    if (upper - primal < best.upper - best.primal) {
      best = {x, primal, upper};
      stalled = 0;
    } else if (++stalled == 3) {
      break;  // rounding floor: the gap no longer shrinks
    }
    if (upper - primal <= (centered ? gap_tol : 100.0 * gap_tol)) break;
    t *= 20.0;
  }
  return best;
}

// Real coordinates x = [Re y; Im y] of a complex linear form r . y:
// Re(r y) = p . x, Im(r y) = q . x.
void real_form(const Eigen::RowVectorXcd& r, Eigen::Ref<Eigen::VectorXd> p, Eigen::Ref<Eigen::VectorXd> q) {
  const Eigen::Index m = r.size();
  p.head(m) = r.real().transpose();
  p.tail(m) = -r.imag().transpose();
  q.head(m) = r.imag().transpose();
  q.tail(m) = r.real().transpose();
}

}  // namespace

KernelProgram::KernelProgram(const ExtremalProblem& prob) {
  prob.validate();
  epsilon_ = prob.epsilon;
  std::vector<double> bound, weight_list;
  for (const auto& pt : prob.sample.points()) {
    const Complex zeta = pt.value();
    // |g(zeta)| <= eps / c(zeta), in units of the normalized kernel
    const double weight = prob.weighted() ? weight_q(zeta) : 1.0;
    const double b = prob.epsilon * kernel_scale(zeta) / weight;
    auto same = std::find_if(points_.begin(), points_.end(), [&](const Complex& w) {
      return pseudo_hyperbolic_distance(w, zeta) < kMergeDistance;
    });
    if (same != points_.end()) {
      auto& kept = bound[static_cast<std::size_t>(same - points_.begin())];
      kept = std::min(kept, b);
      continue;
    }
    points_.push_back(zeta);
    bound.push_back(b);
    weight_list.push_back(weight);
  }
  if (points_.size() > 1) {
    const auto [i, j] = closest_pair(points_);
    if (pseudo_hyperbolic_distance(points_[i], points_[j]) < kSeparationFloor) throw_conditioning(points_);
  }
  const auto n = static_cast<Eigen::Index>(points_.size());
  bounds_ = Eigen::Map<Eigen::VectorXd>(bound.data(), n);
  weights_ = Eigen::Map<Eigen::VectorXd>(weight_list.data(), n);

  Eigen::MatrixXcd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) gram(i, j) = normalized_gram(points_[i], points_[j]);
  gram.diagonal().array() += kGramRidge;
  Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  if (llt.info() != Eigen::Success) throw_conditioning(points_);
  chol_ = llt.matrixL();
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::norm(chol_(i, i)) < kPivotFloor) throw_conditioning(points_);
}

KernelCertificate KernelProgram::solve_at(const Complex& z0, double gap_tol) const {
  if (!(std::abs(z0) < 1.0)) throw DomainError("solve_extremal_at_point: |z0| must be < 1");
  const auto n = static_cast<Eigen::Index>(points_.size());

  int merged = -1;
  double merged_d = kMergeDistance;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double d = pseudo_hyperbolic_distance(z0, points_[j]);
    if (d < merged_d) {
      merged_d = d;
      merged = static_cast<int>(j);
    }
  }

  const Eigen::Index m = merged >= 0 ? n : n + 1;
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(m, m);
  L.topLeftCorner(n, n) = chol_;
  std::vector<Complex> base(points_.begin(), points_.end());
  if (merged < 0) {
    Eigen::VectorXcd col(n);
    for (Eigen::Index j = 0; j < n; ++j) col(j) = normalized_gram(points_[j], z0);
    const Eigen::VectorXcd r = chol_.triangularView<Eigen::Lower>().solve(col);
    const double d2 = 1.0 + kGramRidge - r.squaredNorm();
    base.push_back(z0);
    if (!(d2 >= kPivotFloor)) throw_conditioning(base);
    L.block(n, 0, 1, n) = r.adjoint();
    L(n, n) = std::sqrt(d2);
  }
  // L L^H is the Gram matrix plus the ridge, so with a = L^{-H} y the exact
  // normalized values of g = sum a_i k̂_i are (L - ridge L^{-H}) y, while
  // ||g||^2 = |y|^2 - ridge |a|^2 <= |y|^2 keeps the ball conservative.
  const Eigen::MatrixXcd forms =
      L - kGramRidge * Eigen::MatrixXcd(L.adjoint().triangularView<Eigen::Upper>().solve(Eigen::MatrixXcd::Identity(m, m)));
  const Eigen::RowVectorXcd objective_row = forms.row(merged >= 0 ? merged : n);
  const double objective_scale = kernel_scale(merged >= 0 ? points_[merged] : z0);

  // epsilon = 0 constraints are equalities: restrict y to the null space of their rows.
  std::vector<Eigen::Index> eq, ineq;
  for (Eigen::Index j = 0; j < n; ++j) (bounds_(j) > 0.0 ? ineq : eq).push_back(j);
  Eigen::MatrixXcd basis = Eigen::MatrixXcd::Identity(m, m);
  if (!eq.empty()) {
    Eigen::MatrixXcd rows(static_cast<Eigen::Index>(eq.size()), m);
    for (std::size_t k = 0; k < eq.size(); ++k) rows.row(static_cast<Eigen::Index>(k)) = forms.row(eq[k]);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(rows.adjoint());
    const Eigen::MatrixXcd full_q = qr.householderQ() * Eigen::MatrixXcd::Identity(m, m);
    basis = full_q.rightCols(m - static_cast<Eigen::Index>(eq.size()));
  }
  const Eigen::Index reduced = basis.cols();
  const Eigen::RowVectorXcd obj = objective_row * basis;
  Eigen::MatrixXcd A(static_cast<Eigen::Index>(ineq.size()), reduced);
  Eigen::VectorXd beta(static_cast<Eigen::Index>(ineq.size()));
  for (std::size_t k = 0; k < ineq.size(); ++k) {
    A.row(static_cast<Eigen::Index>(k)) = forms.row(ineq[k]) * basis;
    beta(static_cast<Eigen::Index>(k)) = bounds_(ineq[k]);
  }

  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(reduced);
  double primal = 0.0, upper = 0.0;
  const double obj_norm = obj.norm();
  if (reduced > 0 && obj_norm > 0.0) {
    // Without modulus constraints the optimum is y = obj^H / |obj|.
    const Eigen::VectorXcd free = obj.adjoint() / obj_norm;
    if (A.rows() == 0 || ((A * free).cwiseAbs().array() <= beta.array()).all()) {
      y = free;
      primal = upper = obj_norm;
    } else {
      const Eigen::Index dim = 2 * reduced;
      Eigen::VectorXd c(dim), unused(dim);
      real_form(obj, c, unused);
      Eigen::MatrixXd P(dim, A.rows()), Q(dim, A.rows());
      for (Eigen::Index k = 0; k < A.rows(); ++k) real_form(A.row(k), P.col(k), Q.col(k));
      const BarrierResult res = solve_modulus_program(c, P, Q, beta, gap_tol);
      y.real() = res.x.head(reduced);
      y.imag() = res.x.tail(reduced);
      primal = res.primal;
      upper = res.upper;
    }
  }

  const Eigen::VectorXcd y_full = basis * y;
  const Eigen::VectorXcd a = L.adjoint().triangularView<Eigen::Upper>().solve(y_full);

  KernelCertificate cert;
  cert.base_points = std::move(base);
  cert.coefficients.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) cert.coefficients(i) = a(i) * kernel_scale(cert.base_points[i]);
  cert.z0 = z0;
  cert.achieved_value = primal / objective_scale;
  cert.upper_bound = upper / objective_scale;
  cert.residuals.kkt_residual = std::max(0.0, cert.upper_bound - cert.achieved_value);

  // model residuals from the coefficients (unnormalized Gram, direct evaluation)
  Eigen::MatrixXcd gram(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) gram(i, j) = 1.0 / (1.0 - std::conj(cert.base_points[j]) * cert.base_points[i]);
  const double norm = std::sqrt(std::max(0.0, (cert.coefficients.adjoint() * gram * cert.coefficients)(0, 0).real()));
  cert.residuals.norm_excess = std::max(0.0, norm - 1.0);
  const Eigen::VectorXcd values = gram * cert.coefficients;
  for (Eigen::Index j = 0; j < n; ++j)
    cert.residuals.max_constraint_violation =
        std::max(cert.residuals.max_constraint_violation, weights_(j) * std::abs(values(j)) - epsilon_);
  return cert;
}

KernelCertificate solve_extremal_at_point(const ExtremalProblem& prob, const Complex& z0) {
  return KernelProgram(prob).solve_at(z0);
}


DpSolution solve_dp_over_disk(const ExtremalProblem& prob, int angular_nodes, std::span<const double> hint_angles) {
  prob.validate();
  if (angular_nodes < 3) throw DomainError("solve_dp_over_disk: at least 3 angular nodes are required");
  const KernelProgram program(prob);
  const double step = 2.0 * std::numbers::pi / angular_nodes;

  std::optional<DpSolution> best;
  double best_theta = 0.0;
  const auto evaluate = [&](double theta, double gap_tol = kGapTolerance) {
    const Complex z0 = std::polar(prob.R, theta);
    KernelCertificate cert = program.solve_at(z0, gap_tol);
    const double v = cert.achieved_value;
    if (!best || v > best->value) {
      best = DpSolution{v, z0, std::move(cert)};
      best_theta = theta;
    }
    return v;
  };

  // screening pass: only used to locate peaks
  std::vector<double> grid(static_cast<std::size_t>(angular_nodes));
  for (int k = 0; k < angular_nodes; ++k) grid[k] = evaluate(k * step, kScreeningGapTolerance);

  // refine the three largest local maxima of the grid profile, then every hint
  std::vector<double> centers;
  const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
  if (*hi - *lo > 1e-14) {
    std::vector<int> peaks;
    for (int k = 0; k < angular_nodes; ++k) {
      const double prev = grid[(k + angular_nodes - 1) % angular_nodes];
      const double next = grid[(k + 1) % angular_nodes];
      if (grid[k] >= prev && grid[k] >= next) peaks.push_back(k);
    }
    std::stable_sort(peaks.begin(), peaks.end(), [&](int a, int b) { return grid[a] > grid[b]; });
    for (std::size_t i = 0; i < std::min<std::size_t>(3, peaks.size()); ++i) centers.push_back(peaks[i] * step);
  }
  for (double h : hint_angles) {
    evaluate(h);
    centers.push_back(h);
  }

  for (double center : centers) {
    double a = center - step, b = center + step;
    double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
    double fc = evaluate(c), fd = evaluate(d);
    while (b - a > kAngularTolerance) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kInvPhi * (b - a);
        fc = evaluate(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kInvPhi * (b - a);
        fd = evaluate(d);
      }
    }
    evaluate(0.5 * (a + b));
  }
  // a screening solve may still hold the lead
  if (best->certificate.residuals.kkt_residual > kKktContract) {
    const double theta = best_theta;
    best.reset();
    evaluate(theta);
  }
  return std::move(*best);
}

InteriorCheck check_interior_max(const ExtremalProblem& prob, const DpSolution& circle, int samples,
                                 std::uint64_t seed) {
  const KernelProgram program(prob);
  Rng rng(seed);
  InteriorCheck out{0.0, Complex(0.0), true};
  for (int k = 0; k < samples; ++k) {
    const Complex z = std::polar(prob.R * std::sqrt(rng.uniform()), rng.uniform(0.0, 2.0 * std::numbers::pi));
    const double v = program.solve_at(z).achieved_value;
    if (k == 0 || v > out.max_value) out = {v, z, true};
  }
  out.ok = out.max_value <= circle.value + 1e-8;
  return out;
}

CertificateCheck validate_kernel_certificate(const KernelCertificate& cert, const ExtremalProblem& prob, double tol) {
  CertificateCheck check{0.0, 0.0, 0.0, false, {}};
  if (static_cast<Eigen::Index>(cert.base_points.size()) != cert.coefficients.size() || cert.base_points.empty()) {
    check.message = "base point and coefficient counts differ";
    return check;
  }
  if (!cert.coefficients.allFinite()) {
    check.message = "non-finite coefficients";
    return check;
  }
  double max_modulus = 0.0;
  for (const auto& w : cert.base_points) {
    if (!(std::abs(w) < 1.0)) {
      check.message = "base point outside the open disk";
      return check;
    }
    max_modulus = std::max(max_modulus, std::abs(w));
  }
  const BoundaryEvaluator g = BoundaryEvaluator::kernel_combination(cert.base_points, cert.coefficients);
  const auto eval = [&](const Complex& z) {
    Complex acc(0.0);
    for (std::size_t i = 0; i < cert.base_points.size(); ++i)
      acc += cert.coefficients(static_cast<Eigen::Index>(i)) * szego_kernel(DiskPoint(cert.base_points[i]), z);
    return acc;
  };
  check.norm = hp_norm(g, HardyExponent(2.0), quadrature_nodes_for(max_modulus), 1.0);
  check.value_at_z0 = std::abs(eval(cert.z0));
  for (const auto& zeta : prob.sample.points()) {
    const double weight = prob.weighted() ? weight_q(zeta.value()) : 1.0;
    check.max_constraint = std::max(check.max_constraint, weight * std::abs(eval(zeta.value())));
  }
  if (check.norm > 1.0 + tol)
    check.message = "norm " + format_double(check.norm) + " exceeds 1";
  else if (check.max_constraint > prob.epsilon + tol)
    check.message = "constraint value " + format_double(check.max_constraint) + " exceeds epsilon " +
                    format_double(prob.epsilon);
  else if (std::abs(check.value_at_z0 - cert.achieved_value) > tol)
    check.message = "|g(z0)| = " + format_double(check.value_at_z0) + " does not reproduce achieved value " +
                    format_double(cert.achieved_value);
  else
    check.ok = true;
  return check;
}

CertifiedBound lower_bound_dp_from_blaschke(const CertifiedBound& bound, const ExtremalProblem& prob) {
  if (bound.kind != BoundKind::lower_certified && bound.kind != BoundKind::oracle_exact)
    throw ValidationError("lower_bound_dp_from_blaschke: bound of kind '" + to_string(bound.kind) +
                          "' is not certified");
  if (bound.infeasible()) throw ValidationError("lower_bound_dp_from_blaschke: infeasible marker carries no certificate");
  revalidate_blaschke_certificate(bound, prob);

  const ZeroConfiguration& cfg = *bound.certificate;
  double max_modulus = 0.0;
  for (const auto& z : cfg.zeros()) max_modulus = std::max(max_modulus, z.modulus());
  const int nodes = quadrature_nodes_for(max_modulus);
  const BoundaryEvaluator b = BoundaryEvaluator::blaschke(cfg);
  double norm_excess = 0.0;
  for (const HardyExponent p : {prob.p, HardyExponent(2.0)}) {
    const double norm = hp_norm(b, p, nodes, 1.0);
    if (std::abs(norm - 1.0) > 1e-6)
      throw ValidationError("lower_bound_dp_from_blaschke: ||B||_p = " + format_double(norm) + " for p = " +
                            format_double(p.value()) + ", expected 1");
    norm_excess = std::max(norm_excess, norm - 1.0);
  }
  const FeasibilityReport f = feasibility_margin(cfg, prob);

  CertifiedBound out = bound;
  out.kind = BoundKind::lower_certified;
  out.residuals.max_constraint_violation = std::max(0.0, f.worst_value - prob.epsilon);
  out.residuals.norm_excess = std::max(0.0, norm_excess);
  return out;
}

}  // namespace hardy
