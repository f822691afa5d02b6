#include "hardy/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hardy/errors.hpp"
#include "hardy/experiments.hpp"

namespace hardy {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProblemFlags {
  std::string problem;
  std::string sample;
  std::optional<double> epsilon;
  double R = 0.5;
  std::string mode = "weighted";
};

void add_problem_flags(CLI::App* cmd, ProblemFlags& f) {
  cmd->add_option("--problem", f.problem, "problem file {sample_path, epsilon, R, p, mode}");
  cmd->add_option("--sample", f.sample, "sample file");
  cmd->add_option("--epsilon", f.epsilon, "constraint level");
  cmd->add_option("--R", f.R, "radius of the evaluation disk");
  cmd->add_option("--mode", f.mode, "weighted|plain")->check(CLI::IsMember({"weighted", "plain"}));
}

ExtremalProblem load_problem(const ProblemFlags& f) {
  ExtremalProblem prob;
  if (!f.problem.empty()) {
    if (!f.sample.empty()) throw UsageError("--problem and --sample are mutually exclusive");
    const Json j = read_json_file(f.problem);
    try {
      fs::path sample_path = j.at("sample_path").get<std::string>();
      if (sample_path.is_relative()) sample_path = fs::path(f.problem).parent_path() / sample_path;
      prob.sample = load_sample(sample_path);
      prob.epsilon = j.at("epsilon").get<double>();
      prob.R = j.at("R").get<double>();
      prob.p = HardyExponent(j.value("p", 2.0));
      prob.mode = constraint_mode_from_string(j.value("mode", std::string("weighted")));
    } catch (const Json::exception& e) {
      throw ValidationError(std::string("problem file: ") + e.what());
    }
  } else {
    if (f.sample.empty()) throw UsageError("one of --problem or --sample is required");
    if (!f.epsilon) throw UsageError("--epsilon is required with --sample");
    prob.sample = load_sample(f.sample);
    prob.epsilon = *f.epsilon;
    prob.R = f.R;
    prob.mode = constraint_mode_from_string(f.mode);
  }
  prob.validate();
  return prob;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty())
    std::cout << text;
  else
    write_file_atomic(out, text);
}

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> params;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects key=value, got '" + item + "'");
    try {
      std::size_t used = 0;
      const std::string value = item.substr(eq + 1);
      params[item.substr(0, eq)] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::logic_error&) {
      throw UsageError("--param value in '" + item + "' is not a number");
    }
  }
  return params;
}

Json problem_header(const ExtremalProblem& prob) {
  return Json{{"epsilon", prob.epsilon},
              {"R", prob.R},
              {"p", prob.p.is_infinite() ? Json("inf") : Json(prob.p.value())},
              {"mode", to_string(prob.mode)},
              {"sample_size", prob.sample.size()}};
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Certified bounds for Hardy-space extremal problems"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  int budget = 200;
  std::string out;
  app.add_option("--seed", seed, "random seed")->capture_default_str();

  // gen-set
  auto* gen = app.add_subcommand("gen-set", "generate a point sample");
  std::string family;
  int count = 0;
  std::vector<std::string> params;
  gen->add_option("--family", family, "radial_harmonic|radial_power|spiral|uniform_annulus")->required();
  gen->add_option("--count", count, "number of points")->required();
  gen->add_option("--param", params, "family parameter key=value (repeatable)");
  gen->add_option("--out", out, "output file");

  // search-g
  auto* search = app.add_subcommand("search-g", "certified Blaschke lower bound for g");
  ProblemFlags search_flags;
  add_problem_flags(search, search_flags);
  search->add_option("--budget", budget, "local search iterations");
  search->add_option("--out", out, "output file");

  // solve-dp
  auto* dp = app.add_subcommand("solve-dp", "exact D_2 over the sample");
  ProblemFlags dp_flags;
  int nodes = kDefaultAngularNodes;
  add_problem_flags(dp, dp_flags);
  int interior = 0;
  dp->add_option("--nodes", nodes, "angular grid size on |z0| = R");
  dp->add_option("--check-interior", interior, "also solve at this many seeded points inside |z0| < R");
  dp->add_option("--out", out, "output file");

  // verify-sandwich
  auto* verify = app.add_subcommand("verify-sandwich", "run or re-check a sandwich study");
  std::string sample_path, grid_spec, report_path, csv, mode = "weighted";
  double R = 0.5;
  verify->add_option("--sample", sample_path, "sample file (run a study)");
  verify->add_option("--report", report_path, "study report to re-check");
  verify->add_option("--epsilon-grid", grid_spec, "start:factor:count");
  verify->add_option("--R", R, "radius of the evaluation disk");
  verify->add_option("--mode", mode, "weighted|plain")->check(CLI::IsMember({"weighted", "plain"}));
  verify->add_option("--budget", budget, "local search iterations");
  verify->add_option("--out", out, "report file");
  verify->add_option("--csv", csv, "flat CSV export of the rows");

  // fit-scaling
  auto* fit = app.add_subcommand("fit-scaling", "log-log fit of d2 against g");
  std::string fit_report;
  fit->add_option("--report", fit_report, "study report")->required();
  fit->add_option("--out", out, "output file");

  auto* selftest = app.add_subcommand("selftest", "closed-form and oracle checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const auto extra = app.remaining();
    if (!extra.empty() && app.get_subcommands().empty()) {
      std::cerr << "unknown subcommand '" << extra.front() << "'\n";
      return 2;
    }
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) {
      const PointSample s = generate_sample(family_from_string(family), count, parse_params(params), seed);
      emit(dump_json(sample_to_json(s)) + "\n", out);
    } else if (*search) {
      const ExtremalProblem prob = load_problem(search_flags);
      const CertifiedBound found = search_g(prob, budget, seed);
      CertifiedBound g = found.infeasible() ? found : lower_bound_dp_from_blaschke(found, prob);
      const Json cert = certificate_to_json(g);
      Json j = problem_header(prob);
      j["seed"] = seed;
      j["budget"] = budget;
      j["value"] = g.value;
      j["kind"] = to_string(g.kind);
      j["infeasible"] = g.infeasible();
      j["certificate_zeros"] = cert.at("zeros");
      j["argmax_point"] = cert.at("argmax_point");
      j["residuals"] = cert.at("residuals");
      emit(dump_json(j) + "\n", out);
    } else if (*dp) {
      const ExtremalProblem prob = load_problem(dp_flags);
      if (!prob.p.is_infinite() && prob.p.value() != 2.0) throw UsageError("solve-dp supports p = 2 only");
      const DpSolution sol = solve_dp_over_disk(prob, nodes);
      const CertificateCheck check = validate_kernel_certificate(sol.certificate, prob);
      Json j = problem_header(prob);
      j["kind"] = "dp_solution";
      j["nodes"] = nodes;
      j["value"] = sol.value;
      j["argmax_z0"] = complex_to_json(sol.argmax_z0);
      j["certificate"] = kernel_certificate_to_json(sol.certificate);
      j["revalidated"] = check.ok;
      std::optional<InteriorCheck> inside;
      if (interior > 0) {
        inside = check_interior_max(prob, sol, interior, seed);
        j["interior_check"] = Json{{"samples", interior},
                                   {"max_value", inside->max_value},
                                   {"argmax", complex_to_json(inside->argmax)},
                                   {"ok", inside->ok}};
      }
      emit(dump_json(j) + "\n", out);
      if (!check.ok) {
        std::cerr << "certificate re-validation failed: " << check.message << "\n";
        return 1;
      }
      if (inside && !inside->ok) {
        std::cerr << "interior value " << format_double(inside->max_value) << " exceeds the circle maximum\n";
        return 1;
      }
    } else if (*verify) {
      if (!report_path.empty()) {
        if (!sample_path.empty()) throw UsageError("--report and --sample are mutually exclusive");
        const ReportVerification v = verify_study_json(read_json_file(report_path));
        if (!v.ok) {
          for (const auto& f : v.failures) std::cerr << "FAIL " << f << "\n";
          std::cerr << v.forensic;
          return 1;
        }
        std::cout << "report verified\n";
        return 0;
      }
      if (sample_path.empty()) throw UsageError("one of --sample or --report is required");
      const auto grid = grid_spec.empty() ? default_epsilon_grid() : parse_epsilon_grid(grid_spec);
      StudyOptions options;
      options.budget = budget;
      options.seed = seed;
      options.mode = constraint_mode_from_string(mode);
      const StudyReport report = run_sandwich_study(load_sample(sample_path), R, grid, options);
      emit(dump_json(study_to_json(report)) + "\n", out);
      if (!csv.empty()) write_file_atomic(csv, study_to_csv(report));
    } else if (*fit) {
      const Json report = read_json_file(fit_report);
      std::vector<ScalingPoint> pts;
      try {
        for (const auto& row : report.at("rows"))
          pts.push_back({row.at("g_value").get<double>(), row.at("d2_value").get<double>()});
      } catch (const Json::exception& e) {
        throw ValidationError(std::string("report: ") + e.what());
      }
      const ScalingFit f = fit_scaling(pts);
      emit(dump_json(Json{{"kind", "scaling_fit"},
                          {"alpha_hat", f.alpha_hat},
                          {"intercept", f.intercept},
                          {"r_squared", f.r_squared},
                          {"rows_used", f.rows_used}}) +
               "\n",
           out);
    } else if (*selftest) {
      return run_selftest(std::cout) ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  } catch (const SandwichViolation& e) {
    std::cerr << e.what() << "\n" << e.forensic() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace hardy
