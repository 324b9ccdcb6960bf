#pragma once

// Built-in acceptance checks run by the `validate` command. Each check
// reports its measured quantities with provenance and a pass/fail verdict.

#include <cstdint>
#include <string>
#include <vector>

#include "entropy_lab/report.hpp"

namespace entropy_lab {

enum class Suite { kFast, kFull };

std::string to_string(Suite suite);
Suite suite_from_string(const std::string& name);

struct CriterionOutcome {
  int id;
  std::string name;
  bool ran;  // false when the suite skips it
  bool passed;
  std::string detail;
  Json metrics = Json::object();
  double seconds = 0.0;  // wall clock, recorded by the full suite only
};

/// Runs criteria 1-9. The fast suite skips the high-node LPS runs (5, 6) and
/// the large lattice count (7). Randomized checks draw from `seed`.
std::vector<CriterionOutcome> run_criteria(Suite suite, std::uint64_t seed,
                                           unsigned threads);

/// Root of n = kappa1 z^(-beta1) + kappa2 z^(-beta2) by bisection in log z,
/// to relative width `tolerance`. Requires beta1 > beta2.
double counting_root_bisection(double kappa1, double kappa2, double beta1,
                               double beta2, double n, double tolerance = 1e-14);

}  // namespace entropy_lab
