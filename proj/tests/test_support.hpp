#pragma once

#include <cmath>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "entropy_lab/error.hpp"

namespace test_support {

inline bool close_rel(double x, double y, double tol) {
  const double scale = std::max(std::abs(x), std::abs(y));
  return scale == 0.0 || std::abs(x - y) <= tol * scale;
}

// Runs `body` and returns the ErrorKind it throws; fails the test otherwise.
template <class F>
entropy_lab::ErrorKind error_kind_of(F&& body) {
  try {
    body();
  } catch (const entropy_lab::Error& e) {
    return e.kind();
  }
  FAIL("expected entropy_lab::Error");
  return entropy_lab::ErrorKind::kNumeric;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("entropy_lab_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace test_support
