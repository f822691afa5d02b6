#pragma once

#include <complex>
#include <filesystem>
#include <string>

#include <json.hpp>

namespace hardy {

using Json = nlohmann::json;

/// Serializes like Json::dump but prints every floating-point number with 17
/// significant digits (lossless for IEEE doubles). Non-finite numbers become null.
std::string dump_json(const Json& value, int indent = 2);

std::string format_double(double x);

Json read_json_file(const std::filesystem::path& path);

/// Write-then-rename so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

inline Json complex_to_json(const std::complex<double>& z) { return Json::array({z.real(), z.imag()}); }
std::complex<double> complex_from_json(const Json& j);

}  // namespace hardy
