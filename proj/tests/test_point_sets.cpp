#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "hardy/errors.hpp"
#include "hardy/point_sets.hpp"

using namespace hardy;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "hardy_point_sets_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("radial families follow their modulus formulas") {
  const auto h = generate_sample(Family::radial_harmonic, 3, {{"theta0", 0.0}}, 0);
  REQUIRE(h.size() == 3);
  CHECK(h[0].value() == Complex(0.5, 0.0));
  CHECK(h[1].re() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(h[2].re() == doctest::Approx(0.75).epsilon(1e-15));

  const auto p = generate_sample(Family::radial_power, 3, {{"beta", 2.0}, {"theta0", 0.0}}, 0);
  CHECK(p[0].re() == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(p[1].re() == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
  CHECK(p[2].re() == doctest::Approx(15.0 / 16.0).epsilon(1e-15));
  CHECK(p[2].im() == 0.0);
}

TEST_CASE("generation is deterministic in its inputs") {
  for (Family f : {Family::radial_harmonic, Family::spiral, Family::uniform_annulus}) {
    CHECK(generate_sample(f, 25, {}, 7) == generate_sample(f, 25, {}, 7));
  }
  CHECK(generate_sample(Family::radial_power, 9, {{"beta", 0.5}}, 3) ==
        generate_sample(Family::radial_power, 9, {{"beta", 0.5}}, 3));
  CHECK_FALSE(generate_sample(Family::uniform_annulus, 9, {}, 3) == generate_sample(Family::uniform_annulus, 9, {}, 4));
}

TEST_CASE("generator parameter validation") {
  CHECK_THROWS_AS(generate_sample(Family::radial_power, 3, {}, 0), ValidationError);
  CHECK_THROWS_AS(generate_sample(Family::radial_power, 3, {{"beta", -1.0}}, 0), ValidationError);
  CHECK_THROWS_AS(generate_sample(Family::spiral, 3, {{"bogus", 1.0}}, 0), ValidationError);
  CHECK_THROWS_AS(generate_sample(Family::uniform_annulus, 0, {}, 0), ValidationError);
  CHECK_THROWS_AS(family_from_string("lattice"), ValidationError);
}

TEST_CASE("uniform_annulus stays in its annulus") {
  const auto s = generate_sample(Family::uniform_annulus, 400, {{"r_inner", 0.4}, {"r_outer", 0.8}}, 9);
  for (const auto& z : s.points()) {
    CHECK(z.modulus() >= 0.4 - 1e-15);
    CHECK(z.modulus() <= 0.8 + 1e-15);
  }
}

TEST_CASE("blaschke_sum partial sums") {
  // direct summation oracles
  double harmonic = 0.0, squares = 0.0;
  for (int j = 1; j <= 100; ++j) {
    harmonic += 1.0 / (j + 1);
    squares += 1.0 / double((j + 1) * (j + 1));
  }
  const auto h = generate_sample(Family::radial_harmonic, 100, {}, 1);
  CHECK(std::abs(blaschke_sum(h).partial_sum - harmonic) < 1e-12);
  CHECK(std::abs(harmonic - 4.19726) < 1e-4);  // 4.1972785...
  CHECK(blaschke_sum(h).non_blaschke_family);

  const auto p = generate_sample(Family::radial_power, 100, {{"beta", 2.0}}, 1);
  CHECK(std::abs(blaschke_sum(p).partial_sum - squares) < 1e-12);
  CHECK(blaschke_sum(p).partial_sum < std::numbers::pi * std::numbers::pi / 6.0 - 1.0);
  CHECK_FALSE(blaschke_sum(p).non_blaschke_family);

  CHECK(blaschke_sum(PointSample{}).partial_sum == 0.0);
  CHECK(blaschke_sum(generate_sample(Family::spiral, 10, {}, 0)).non_blaschke_family);
}

TEST_CASE("duplicates are removed") {
  const auto s = PointSample::from_points({0.5, 0.5 + 1e-13, Complex(0.0, 0.5), 0.5});
  CHECK(s.size() == 2);
  const auto m = s.merged_with(PointSample::from_points({0.5, 0.25}));
  CHECK(m.size() == 3);
}

TEST_CASE("save/load round trip is exact") {
  for (Family f : {Family::radial_harmonic, Family::spiral, Family::uniform_annulus}) {
    const auto s = generate_sample(f, 30, {}, 17);
    const auto path = scratch("roundtrip.json");
    save_sample(path, s);
    const auto back = load_sample(path);
    CHECK(back == s);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(back[i].value() == s[i].value());
  }
  const auto p = generate_sample(Family::radial_power, 30, {{"beta", 1.5}}, 2);
  save_sample(scratch("power.json"), p);
  CHECK(load_sample(scratch("power.json")) == p);
}

TEST_CASE("malformed sample files are rejected") {
  const auto path = scratch("bad.json");
  write_text(path, R"({"version":1,"family":"explicit","params":{},"seed":0,"blaschke_partial_sum":0,"points":[[0.2,0.1],[1.0,0.0]]})");
  try {
    load_sample(path);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }

  write_text(path, R"({"version":1,"family":"lattice","params":{},"seed":0,"blaschke_partial_sum":0,"points":[]})");
  try {
    load_sample(path);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("lattice") != std::string::npos);
  }

  write_text(path, "{not json");
  CHECK_THROWS_AS(load_sample(path), ValidationError);
  CHECK_THROWS_AS(load_sample(scratch("missing.json")), ValidationError);
}
