#include "hardy/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace hardy {

Json certificate_to_json(const CertifiedBound& g) {
  Json zeros = Json::array();
  if (g.certificate)
    for (const auto& z : g.certificate->zeros()) zeros.push_back(complex_to_json(z.value()));
  return Json{{"zeros", zeros},
              {"argmax_point", complex_to_json(g.argmax_point)},
              {"residuals",
               {{"max_constraint_violation", g.residuals.max_constraint_violation},
                {"norm_excess", g.residuals.norm_excess}}}};
}

Json kernel_certificate_to_json(const KernelCertificate& c) {
  Json base = Json::array(), coeffs = Json::array();
  for (const auto& w : c.base_points) base.push_back(complex_to_json(w));
  for (Eigen::Index i = 0; i < c.coefficients.size(); ++i) coeffs.push_back(complex_to_json(c.coefficients(i)));
  return Json{{"argmax_z0", complex_to_json(c.z0)},
              {"achieved_value", c.achieved_value},
              {"upper_bound", c.upper_bound},
              {"base_points", base},
              {"coefficients", coeffs},
              {"residuals",
               {{"norm_excess", c.residuals.norm_excess},
                {"max_constraint_violation", c.residuals.max_constraint_violation},
                {"kkt_residual", c.residuals.kkt_residual}}}};
}

namespace {

KernelCertificate kernel_certificate_from_json(const Json& j) {
  KernelCertificate c;
  c.z0 = complex_from_json(j.at("argmax_z0"));
  c.achieved_value = j.at("achieved_value").get<double>();
  c.upper_bound = j.at("upper_bound").get<double>();
  for (const auto& w : j.at("base_points")) c.base_points.push_back(complex_from_json(w));
  const auto& coeffs = j.at("coefficients");
  c.coefficients.resize(static_cast<Eigen::Index>(coeffs.size()));
  for (std::size_t i = 0; i < coeffs.size(); ++i) c.coefficients(static_cast<Eigen::Index>(i)) = complex_from_json(coeffs[i]);
  return c;
}

std::optional<double> ratio_log(double g, double d2) {
  if (!(g > 0.0 && g < 1.0 && d2 > 0.0)) return std::nullopt;
  return std::log(d2) / std::log(g);
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string forensic_dump(const StudyRow& row) { return dump_json(row_to_json(row)); }

}  // namespace

std::vector<double> geometric_grid(double start, double factor, int count) {
  if (!(start > 0.0) || !(factor > 0.0) || count < 1)
    throw ValidationError("epsilon grid: need start > 0, factor > 0, count >= 1");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) grid.push_back(start * std::pow(factor, k));
  return grid;
}

std::vector<double> parse_epsilon_grid(const std::string& spec) {
  std::stringstream ss(spec);
  std::string start, factor, count;
  if (!std::getline(ss, start, ':') || !std::getline(ss, factor, ':') || !std::getline(ss, count) ||
      count.find(':') != std::string::npos)
    throw ValidationError("epsilon grid '" + spec + "' is not of the form start:factor:count");
  try {
    std::size_t used = 0;
    const double s = std::stod(start, &used);
    if (used != start.size()) throw std::invalid_argument(start);
    const double f = std::stod(factor, &used);
    if (used != factor.size()) throw std::invalid_argument(factor);
    const int c = std::stoi(count, &used);
    if (used != count.size()) throw std::invalid_argument(count);
    return geometric_grid(s, f, c);
  } catch (const std::logic_error&) {
    throw ValidationError("epsilon grid '" + spec + "' is not of the form start:factor:count");
  }
}

std::vector<double> default_epsilon_grid() { return geometric_grid(0.5, 0.5, 12); }

StudyReport run_sandwich_study(const PointSample& sample, double R, std::span<const double> epsilon_grid,
                               const StudyOptions& options) {
  if (epsilon_grid.empty()) throw ValidationError("run_sandwich_study: empty epsilon grid");
  for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
    if (!(epsilon_grid[i] > 0.0)) throw ValidationError("run_sandwich_study: epsilon values must be > 0");
    if (i > 0 && !(epsilon_grid[i] < epsilon_grid[i - 1]))
      throw ValidationError("run_sandwich_study: epsilon grid must be strictly descending");
  }

  StudyReport report{sample, R, options, std::vector<StudyRow>(epsilon_grid.size())};
  std::optional<ZeroConfiguration> warm;
  for (std::size_t k = epsilon_grid.size(); k-- > 0;) {
    ExtremalProblem prob{sample, epsilon_grid[k], R, HardyExponent(2.0), options.mode};
    StudyRow& row = report.rows[k];
    row.epsilon = prob.epsilon;

    const CertifiedBound found = search_g(prob, SearchOptions{options.budget, options.seed, warm});
    row.g = found.infeasible() ? found : lower_bound_dp_from_blaschke(found, prob);
    if (!found.infeasible()) warm = found.certificate;
    if (options.run_oracle && sample.size() <= kOracleSampleLimit)
      row.g_oracle = brute_force_g(prob, static_cast<int>(sample.size()) + 4).value;

    const double hint = std::arg(row.g.argmax_point);
    const DpSolution d2 = row.g.infeasible() ? solve_dp_over_disk(prob, options.angular_nodes)
                                             : solve_dp_over_disk(prob, options.angular_nodes, std::span(&hint, 1));
    row.d2_value = d2.value;
    row.d2_certificate = d2.certificate;
    row.ratio_log = ratio_log(row.g.value, row.d2_value);

    const CertificateCheck check = validate_kernel_certificate(row.d2_certificate, prob);
    if (!check.ok)
      throw ValidationError("D_2 certificate at epsilon " + format_double(prob.epsilon) +
                            " failed re-validation: " + check.message);
    if (row.g.value > row.d2_value + kSandwichTolerance)
      throw SandwichViolation("g = " + format_double(row.g.value) + " exceeds D_2 = " + format_double(row.d2_value) +
                                  " at epsilon " + format_double(prob.epsilon),
                              forensic_dump(row));
  }
  return report;
}

std::vector<ScalingPoint> scaling_points(std::span<const StudyRow> rows) {
  std::vector<ScalingPoint> pts;
  for (const auto& r : rows) pts.push_back({r.g.value, r.d2_value});
  return pts;
}

ScalingFit fit_scaling(std::span<const ScalingPoint> points) {
  std::vector<double> xs, ys;
  for (const auto& p : points)
    if (p.g > 0.0 && p.g < 1.0 && p.d2 > 0.0) {
      xs.push_back(std::log(p.g));
      ys.push_back(std::log(p.d2));
    }
  const auto n = static_cast<int>(xs.size());
  if (n < 3)
    throw ValidationError("fit_scaling: need at least 3 rows with 0 < g < 1 and d2 > 0, got " + std::to_string(n));
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 1e-24 * n * (1.0 + mx * mx))) throw ValidationError("fit_scaling: log g has zero variance");
  const double alpha = sxy / sxx;
  const double intercept = my - alpha * mx;
  double ss_res = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = ys[i] - (alpha * xs[i] + intercept);
    ss_res += r * r;
  }
  const double r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return {alpha, intercept, r2, n};
}

Json row_to_json(const StudyRow& row) {
  return Json{{"epsilon", row.epsilon},
              {"g_value", row.g.value},
              {"g_kind", to_string(row.g.kind)},
              {"g_infeasible", row.g.infeasible()},
              {"g_oracle_value", optional_number(row.g_oracle)},
              {"d2_value", row.d2_value},
              {"ratio_log", optional_number(row.ratio_log)},
              {"g_certificate", certificate_to_json(row.g)},
              {"d2_certificate", kernel_certificate_to_json(row.d2_certificate)}};
}

Json study_to_json(const StudyReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) rows.push_back(row_to_json(r));
  Json scaling = nullptr;
  try {
    const auto pts = scaling_points(report.rows);
    const ScalingFit fit = fit_scaling(pts);
    scaling = Json{{"alpha_hat", fit.alpha_hat},
                   {"intercept", fit.intercept},
                   {"r_squared", fit.r_squared},
                   {"rows_used", fit.rows_used}};
  } catch (const ValidationError&) {
  }
  return Json{{"version", 1},
              {"kind", "sandwich_study"},
              {"label", "sampled-E"},
              {"R", report.R},
              {"p", 2.0},
              {"mode", to_string(report.options.mode)},
              {"seed", report.options.seed},
              {"budget", report.options.budget},
              {"angular_nodes", report.options.angular_nodes},
              {"sample", sample_to_json(report.sample)},
              {"rows", rows},
              {"scaling", scaling}};
}

std::string study_to_csv(const StudyReport& report) {
  std::string out = "epsilon,g_value,g_kind,d2_value,ratio_log\n";
  for (const auto& r : report.rows) {
    out += format_double(r.epsilon) + "," + format_double(r.g.value) + "," + to_string(r.g.kind) + "," +
           format_double(r.d2_value) + "," + (r.ratio_log ? format_double(*r.ratio_log) : "") + "\n";
  }
  return out;
}

ReportVerification verify_study_json(const Json& report) {
  ReportVerification out;
  const auto fail = [&](const std::string& what, const Json& row) {
    out.ok = false;
    out.failures.push_back(what);
    out.forensic += what + "\n" + dump_json(row) + "\n";
  };
  try {
    if (!report.is_object() || report.value("kind", "") != "sandwich_study")
      throw ValidationError("not a sandwich study report");
    const PointSample sample = sample_from_json(report.at("sample"));
    const double R = report.at("R").get<double>();
    const ConstraintMode mode = constraint_mode_from_string(report.at("mode").get<std::string>());
    std::size_t index = 0;
    for (const auto& row : report.at("rows")) {
      const std::string where = "row " + std::to_string(index++);
      ExtremalProblem prob{sample, row.at("epsilon").get<double>(), R, HardyExponent(2.0), mode};
      const double g_value = row.at("g_value").get<double>();
      const double d2_value = row.at("d2_value").get<double>();
      if (!(g_value <= d2_value + kSandwichTolerance)) {
        fail(where + ": g_value " + format_double(g_value) + " > d2_value " + format_double(d2_value) + " + 1e-8", row);
        continue;
      }
      const auto& gc = row.at("g_certificate");
      if (!gc.at("zeros").empty()) {
        std::vector<DiskPoint> zeros;
        for (const auto& z : gc.at("zeros")) zeros.emplace_back(complex_from_json(z));
        CertifiedBound g;
        g.value = g_value;
        g.kind = bound_kind_from_string(row.at("g_kind").get<std::string>());
        g.certificate = ZeroConfiguration(std::move(zeros));
        g.argmax_point = complex_from_json(gc.at("argmax_point"));
        try {
          lower_bound_dp_from_blaschke(g, prob);
        } catch (const std::exception& e) {
          fail(where + ": g certificate: " + e.what(), row);
          continue;
        }
      } else if (g_value != 0.0) {
        fail(where + ": nonzero g_value without a certificate", row);
        continue;
      }
      KernelCertificate kc = kernel_certificate_from_json(row.at("d2_certificate"));
      if (std::abs(kc.achieved_value - d2_value) > kCertificateTolerance) {
        fail(where + ": d2_value disagrees with its certificate", row);
        continue;
      }
      const CertificateCheck check = validate_kernel_certificate(kc, prob);
      if (!check.ok) fail(where + ": d2 certificate: " + check.message, row);
    }
  } catch (const std::exception& e) {
    out.ok = false;
    out.failures.push_back(std::string("malformed report: ") + e.what());
  }
  return out;
}

bool run_selftest(std::ostream& out) {
  bool all = true;
  const auto check = [&](const std::string& name, bool ok, const std::string& detail = {}) {
    out << (ok ? "[PASS] " : "[FAIL] ") << name << (detail.empty() ? "" : "  (" + detail + ")") << "\n";
    all = all && ok;
  };
  const auto near = [](double a, double b, double tol) { return std::abs(a - b) <= tol; };

  try {
    check("blaschke_factor vanishes at its zero", std::abs(blaschke_factor(DiskPoint(0.5, 0.0), Complex(0.5))) == 0.0);
    check("blaschke_factor unimodular on the circle",
          near(std::abs(blaschke_factor(DiskPoint(0.3, -0.4), std::polar(1.0, 1.234))), 1.0, 1e-12));
    check("weighted product (1-|z|)|z| at z=0.5",
          near(product_modulus(ZeroConfiguration{DiskPoint(0.0, 0.0)}, Complex(0.5), true), 0.25, 1e-15));

    const double h2 = hp_norm(BoundaryEvaluator::polynomial(Eigen::Vector2cd(1.0, 1.0)), HardyExponent(2.0), 64);
    check("||1+z||_2 = sqrt 2", near(h2, std::sqrt(2.0), 1e-14), format_double(h2));
    const double h4 = hp_norm(BoundaryEvaluator::polynomial(Eigen::Vector2cd(1.0, 1.0)), HardyExponent(4.0), 64);
    check("||1+z||_4 = 6^(1/4)", near(h4, std::pow(6.0, 0.25), 1e-14), format_double(h4));

    const DiskMax m = sup_on_disk(ZeroConfiguration{DiskPoint(0.5, 0.0)}, 0.5);
    check("sup_{|z|<=1/2} |b_{1/2}| = 0.8 at -1/2", near(m.value, 0.8, 1e-12) && near(m.argmax.real(), -0.5, 1e-9),
          format_double(m.value));

    ExtremalProblem single{PointSample::from_points({Complex(0.5)}), 1.0, 0.5, HardyExponent(2.0),
                           ConstraintMode::weighted};
    const CertifiedBound bf = brute_force_g(single, 3);
    check("brute force E={1/2}, eps=1, R=1/2 -> 0.8", near(bf.value, 0.8, 1e-12), format_double(bf.value));

    ExtremalProblem slack{generate_sample(Family::radial_harmonic, 6, {}, 3), 1.0, 0.6, HardyExponent(2.0),
                          ConstraintMode::weighted};
    const KernelCertificate free = solve_extremal_at_point(slack, Complex(0.6));
    check("D_2 slack regime at z0=0.6 -> 1.25", near(free.achieved_value, 1.25, 1e-8),
          format_double(free.achieved_value));

    ExtremalProblem pinned{PointSample::from_points({Complex(0.5)}), 0.0, 0.6, HardyExponent(2.0),
                           ConstraintMode::weighted};
    const KernelCertificate zero = solve_extremal_at_point(pinned, Complex(-0.6));
    check("D_2 with g(1/2)=0 at z0=-0.6 -> (11/13)(5/4)", near(zero.achieved_value, 11.0 / 13.0 * 1.25, 1e-8),
          format_double(zero.achieved_value));

    int agree = 0;
    const int trials = 5;
    for (int t = 0; t < trials; ++t) {
      ExtremalProblem prob{generate_sample(Family::uniform_annulus, 6, {{"r_inner", 0.3}, {"r_outer", 0.9}},
                                           static_cast<std::uint64_t>(100 + t)),
                           0.1, 0.5, HardyExponent(2.0), ConstraintMode::weighted};
      const double a = search_g(prob, 100, 0).value;
      const double b = brute_force_g(prob, 8).value;
      if (near(a, b, 1e-9)) ++agree;
    }
    check("search_g matches brute_force_g on random instances", agree == trials,
          std::to_string(agree) + "/" + std::to_string(trials));
  } catch (const std::exception& e) {
    check("selftest raised", false, e.what());
  }
  return all;
}

}  // namespace hardy
