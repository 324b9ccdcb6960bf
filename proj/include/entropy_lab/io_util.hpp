#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace entropy_lab {

/// printf("%.17g"): enough digits to round-trip any binary64 value.
std::string format_g17(double value);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

}  // namespace entropy_lab
