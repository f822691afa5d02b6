#pragma once

// Finite samples standing in for a subset E of the disk.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hardy/disk.hpp"
#include "hardy/json_io.hpp"

namespace hardy {

enum class Family {
  radial_harmonic,  // |z_j| = 1 - 1/(j+1)
  radial_power,     // |z_j| = 1 - 1/(j+1)^beta
  spiral,           // radial_harmonic moduli, angles phase + j * turn
  uniform_annulus,  // area-uniform in r_inner <= |z| <= r_outer
  explicit_points,  // hand-specified points, no generator
};

std::string to_string(Family family);
/// Throws ValidationError naming the unknown family.
Family family_from_string(const std::string& name);

struct GeneratorDescriptor {
  Family family = Family::explicit_points;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;

  friend bool operator==(const GeneratorDescriptor&, const GeneratorDescriptor&) = default;
};

/// Whether the infinite sequence the family generates has sum (1 - |z_j|) = inf.
/// Decided from the family and its parameters, never from a finite prefix.
bool family_is_non_blaschke(const GeneratorDescriptor& gen);

inline constexpr double kDuplicateTolerance = 1e-12;
inline constexpr int kSampleFileVersion = 1;

class PointSample {
 public:
  PointSample() = default;
  /// Drops points within kDuplicateTolerance of an earlier one.
  PointSample(std::vector<DiskPoint> points, GeneratorDescriptor generator);

  static PointSample from_points(const std::vector<Complex>& points);

  std::span<const DiskPoint> points() const noexcept { return points_; }
  const DiskPoint& operator[](std::size_t i) const { return points_[i]; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const GeneratorDescriptor& generator() const noexcept { return generator_; }
  double blaschke_partial_sum() const noexcept { return blaschke_partial_sum_; }

  /// Union with `other` (deduplicated), tagged as explicit points.
  PointSample merged_with(const PointSample& other) const;

  friend bool operator==(const PointSample&, const PointSample&) = default;

 private:
  std::vector<DiskPoint> points_;
  GeneratorDescriptor generator_;
  double blaschke_partial_sum_ = 0.0;
};

struct BlaschkeDiagnostics {
  double partial_sum;
  bool non_blaschke_family;
};

BlaschkeDiagnostics blaschke_sum(const PointSample& sample);

/// Deterministic in (family, count, params, seed). Missing optional params are
/// filled with their defaults and recorded in the descriptor.
PointSample generate_sample(Family family, int count, const std::map<std::string, double>& params,
                            std::uint64_t seed);

Json sample_to_json(const PointSample& sample);
PointSample sample_from_json(const Json& j);

void save_sample(const std::filesystem::path& path, const PointSample& sample);
PointSample load_sample(const std::filesystem::path& path);

}  // namespace hardy
