#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

namespace uam {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes to a sibling temp file then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Fixed-precision decimal, locale independent.
std::string format_fixed(double value, int digits);

/// Shortest representation that round-trips (%.17g).
std::string format_exact(double value);

}  // namespace uam
