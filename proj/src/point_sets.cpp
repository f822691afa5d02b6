#include "hardy/point_sets.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <set>

#include "hardy/random.hpp"

namespace hardy {

namespace {

constexpr std::array<std::pair<Family, const char*>, 5> kFamilyNames{{
    {Family::radial_harmonic, "radial_harmonic"},
    {Family::radial_power, "radial_power"},
    {Family::spiral, "spiral"},
    {Family::uniform_annulus, "uniform_annulus"},
    {Family::explicit_points, "explicit"},
}};

double partial_sum(std::span<const DiskPoint> points) {
  double s = 0.0;
  for (const auto& z : points) s += 1.0 - z.modulus();
  return s;
}

double param_or(const std::map<std::string, double>& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void reject_unknown_params(Family family, const std::map<std::string, double>& params,
                           std::set<std::string> allowed) {
  for (const auto& [key, value] : params) {
    if (!allowed.contains(key))
      throw ValidationError("generate_sample: family '" + to_string(family) +
                            "' has no parameter '" + key + "'");
    if (!std::isfinite(value)) throw ValidationError("generate_sample: parameter '" + key + "' is not finite");
  }
}

DiskPoint checked_point(double modulus, double angle, Family family, int j) {
  if (!(modulus <= 1.0 - DiskTraits<double>::interior_margin) || !(modulus >= 0.0))
    throw ValidationError("generate_sample: " + to_string(family) + " point " + std::to_string(j) +
                          " has modulus " + format_double(modulus) + ", not strictly inside the disk");
  return DiskPoint(std::polar(modulus, angle));
}

}  // namespace

std::string to_string(Family family) {
  for (const auto& [f, name] : kFamilyNames)
    if (f == family) return name;
  return "unknown";
}

Family family_from_string(const std::string& name) {
  for (const auto& [f, n] : kFamilyNames)
    if (name == n) return f;
  throw ValidationError("unknown sample family '" + name + "'");
}

bool family_is_non_blaschke(const GeneratorDescriptor& gen) {
  switch (gen.family) {
    case Family::radial_harmonic:
    case Family::spiral:
      return true;
    case Family::radial_power:
      return param_or(gen.params, "beta", 1.0) <= 1.0;
    case Family::uniform_annulus:
      // i.i.d. points in a compact annulus: 1 - |z_j| >= 1 - r_outer > 0
      return true;
    case Family::explicit_points:
      return false;
  }
  return false;
}

PointSample::PointSample(std::vector<DiskPoint> points, GeneratorDescriptor generator)
    : generator_(std::move(generator)) {
  points_.reserve(points.size());
  for (const auto& p : points) {
    const bool duplicate = std::any_of(points_.begin(), points_.end(), [&](const DiskPoint& q) {
      return std::abs(p.value() - q.value()) <= kDuplicateTolerance;
    });
    if (!duplicate) points_.push_back(p);
  }
  blaschke_partial_sum_ = partial_sum(points_);
}

PointSample PointSample::from_points(const std::vector<Complex>& points) {
  std::vector<DiskPoint> pts(points.begin(), points.end());
  return PointSample(std::move(pts), GeneratorDescriptor{});
}

PointSample PointSample::merged_with(const PointSample& other) const {
  std::vector<DiskPoint> all(points_.begin(), points_.end());
  all.insert(all.end(), other.points_.begin(), other.points_.end());
  return PointSample(std::move(all), GeneratorDescriptor{});
}

BlaschkeDiagnostics blaschke_sum(const PointSample& sample) {
  return {partial_sum(sample.points()), family_is_non_blaschke(sample.generator())};
}

PointSample generate_sample(Family family, int count, const std::map<std::string, double>& params,
                            std::uint64_t seed) {
  if (count < 1) throw ValidationError("generate_sample: count must be >= 1, got " + std::to_string(count));

  constexpr double two_pi = 2.0 * std::numbers::pi;
  GeneratorDescriptor gen{family, params, seed};
  Rng rng(seed);
  std::vector<DiskPoint> points;
  points.reserve(static_cast<std::size_t>(count));

  // Angles: fixed theta0 when given, otherwise seeded uniform draws.
  const auto radial_angle = [&](void) {
    auto it = params.find("theta0");
    return it != params.end() ? it->second : two_pi * rng.uniform();
  };

  switch (family) {
    case Family::radial_harmonic:
      reject_unknown_params(family, params, {"theta0"});
      for (int j = 1; j <= count; ++j)
        points.push_back(checked_point(1.0 - 1.0 / (j + 1), radial_angle(), family, j));
      break;
    case Family::radial_power: {
      reject_unknown_params(family, params, {"beta", "theta0"});
      if (!params.contains("beta")) throw ValidationError("generate_sample: radial_power requires 'beta'");
      const double beta = params.at("beta");
      if (!(beta > 0.0)) throw ValidationError("generate_sample: beta must be > 0, got " + format_double(beta));
      for (int j = 1; j <= count; ++j)
        points.push_back(checked_point(1.0 - std::pow(j + 1.0, -beta), radial_angle(), family, j));
      break;
    }
    case Family::spiral: {
      reject_unknown_params(family, params, {"turn", "phase"});
      const double turn = param_or(params, "turn", two_pi * (2.0 - std::numbers::phi));
      const double phase = param_or(params, "phase", 0.0);
      gen.params["turn"] = turn;
      gen.params["phase"] = phase;
      for (int j = 1; j <= count; ++j)
        points.push_back(checked_point(1.0 - 1.0 / (j + 1), phase + j * turn, family, j));
      break;
    }
    case Family::uniform_annulus: {
      reject_unknown_params(family, params, {"r_inner", "r_outer"});
      const double r_in = param_or(params, "r_inner", 0.0);
      const double r_out = param_or(params, "r_outer", 0.9);
      if (!(r_in >= 0.0 && r_in < r_out && r_out < 1.0))
        throw ValidationError("generate_sample: need 0 <= r_inner < r_outer < 1");
      gen.params["r_inner"] = r_in;
      gen.params["r_outer"] = r_out;
      for (int j = 1; j <= count; ++j) {
        const double u = rng.uniform();
        const double r = std::sqrt(r_in * r_in + u * (r_out * r_out - r_in * r_in));
        points.push_back(checked_point(r, two_pi * rng.uniform(), family, j));
      }
      break;
    }
    case Family::explicit_points:
      throw ValidationError("generate_sample: 'explicit' samples are built from points, not generated");
  }
  return PointSample(std::move(points), std::move(gen));
}

Json sample_to_json(const PointSample& sample) {
  Json params = Json::object();
  for (const auto& [k, v] : sample.generator().params) params[k] = v;
  Json points = Json::array();
  for (const auto& z : sample.points()) points.push_back(complex_to_json(z.value()));
  return Json{{"version", kSampleFileVersion},
              {"family", to_string(sample.generator().family)},
              {"params", params},
              {"seed", sample.generator().seed},
              {"blaschke_partial_sum", sample.blaschke_partial_sum()},
              {"points", points}};
}

PointSample sample_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("sample file: top level must be an object");
  for (const char* key : {"version", "family", "params", "seed", "points"})
    if (!j.contains(key)) throw ValidationError(std::string("sample file: missing field '") + key + "'");
  if (!j["version"].is_number_integer() || j["version"].get<int>() != kSampleFileVersion)
    throw ValidationError("sample file: unsupported version " + j["version"].dump() + " (expected " +
                          std::to_string(kSampleFileVersion) + ")");
  if (!j["family"].is_string()) throw ValidationError("sample file: 'family' must be a string");

  GeneratorDescriptor gen;
  gen.family = family_from_string(j["family"].get<std::string>());
  if (!j["params"].is_object()) throw ValidationError("sample file: 'params' must be an object");
  for (auto it = j["params"].begin(); it != j["params"].end(); ++it) {
    if (!it.value().is_number()) throw ValidationError("sample file: parameter '" + it.key() + "' must be numeric");
    gen.params[it.key()] = it.value().get<double>();
  }
  if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
    throw ValidationError("sample file: 'seed' must be an integer");
  gen.seed = j["seed"].get<std::uint64_t>();

  if (!j["points"].is_array()) throw ValidationError("sample file: 'points' must be an array");
  std::vector<DiskPoint> points;
  std::size_t index = 0;
  for (const auto& entry : j["points"]) {
    const Complex z = complex_from_json(entry);
    try {
      points.emplace_back(z);
    } catch (const DomainError&) {
      throw ValidationError("sample file: point " + std::to_string(index) + " has modulus " +
                            format_double(std::abs(z)) + ", not strictly inside the unit disk");
    }
    ++index;
  }
  PointSample sample(std::move(points), std::move(gen));
  if (j.contains("blaschke_partial_sum")) {
    const double stored = j["blaschke_partial_sum"].get<double>();
    if (std::abs(stored - sample.blaschke_partial_sum()) > 1e-12)
      throw ValidationError("sample file: blaschke_partial_sum " + format_double(stored) +
                            " disagrees with the points (" + format_double(sample.blaschke_partial_sum()) + ")");
  }
  return sample;
}

void save_sample(const std::filesystem::path& path, const PointSample& sample) {
  write_file_atomic(path, dump_json(sample_to_json(sample)) + "\n");
}

PointSample load_sample(const std::filesystem::path& path) { return sample_from_json(read_json_file(path)); }

}  // namespace hardy
