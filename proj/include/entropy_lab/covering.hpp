#pragma once

// Finite-dimensional covering bounds for l2-ellipsoids and an explicit
// greedy covering used as an empirical upper-bound oracle in low dimension.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace entropy_lab {

enum class Field { kReal, kComplex };

std::string to_string(Field field);

/// {y : sum |y_n / mu_n|^2 <= 1}. Semi-axes are kept non-increasing; over the
/// complex field each axis spans two real dimensions.
class Ellipsoid {
 public:
  Ellipsoid(std::vector<double> semi_axes, Field field);

  std::span<const double> semi_axes() const noexcept { return axes_; }
  Field field() const noexcept { return field_; }
  std::size_t dim() const noexcept { return axes_.size(); }
  std::size_t real_dim() const noexcept {
    return field_ == Field::kComplex ? 2 * axes_.size() : axes_.size();
  }

 private:
  std::vector<double> axes_;
  Field field_;
};

/// Bits of the volume-ratio lower bound
/// max(0, 2d [log2(1/eps) + (1/d) sum log2 mu_n]) for a complex ellipsoid.
/// Real ellipsoids throw kNotSupported.
double volume_lower_bound(const Ellipsoid& e, double epsilon);

inline constexpr double kDefaultRogersC = 16.0;

/// Normalized covering constant kappa(d) of the unit ball in C^d:
/// 2(1 + eps/2) for d <= 4, (rogers_c d^(5/2))^(1/(2d)) for d >= 5.
double ball_covering_kappa(std::size_t d_complex, double epsilon,
                           double rogers_c = kDefaultRogersC);

struct BallCoverBound {
  double bits;
  bool trivial;  // eps >= 1: a single ball suffices
};

/// 2d log2(kappa(d)/eps) bits covering the unit ball of C^d at radius eps.
BallCoverBound ball_covering_upper(std::size_t d_complex, double epsilon,
                                   double rogers_c = kDefaultRogersC);

struct TruncationResult {
  std::size_t kept_dims;
  double dropped_max_axis;  // 0 if nothing was dropped
  double inflated_epsilon;  // (1 - tau) eps
};

/// Keeps the axes >= tau * eps; the dropped ones all lie below that threshold.
TruncationResult truncate_ellipsoid(std::span<const double> axes,
                                    double epsilon, double tau);

/// Cell budget from ENTROPY_LAB_CELL_BUDGET, or kDefaultCellBudget.
inline constexpr std::uint64_t kDefaultCellBudget = 4'000'000;
std::uint64_t cell_budget_from_env();

/// Number of balls in a greedy epsilon-cover of a real ellipsoid of at most
/// three real dimensions, certified as an upper bound on N(eps).
///
/// The body is discretized into cubic cells of side grid_step; every cell
/// meeting the ellipsoid is represented by its centre, and balls of radius
/// eps - grid_step sqrt(dims)/2 centred on grid points are chosen greedily
/// until every representative is covered. Requires grid_step <= eps/4.
std::size_t greedy_cover_count(const Ellipsoid& e, double epsilon,
                               double grid_step,
                               std::uint64_t cell_budget = cell_budget_from_env());

struct CoveringBounds {
  double lower_log2;
  double upper_log2;
  double epsilon;
  std::string lower_method;
  std::string upper_method;
  std::size_t lower_dims;  // axes entering the volume bound
  std::size_t upper_dims;  // axes kept for the ball cover
  bool fully_truncated;    // nothing kept: one ball at the origin
  bool scaled_upper;       // largest axis > 1, upper bound scaled by it
};

/// Lower/upper bracket on H(eps) of the complex ellipsoid with the given
/// semi-axes. The lower side applies the volume bound to the axes >=
/// lower_threshold (default: eps, which maximizes it over all prefixes); the
/// upper side covers the axes >= tau eps by a complex unit ball at radius
/// (1 - tau) eps.
CoveringBounds sandwich_entropy(std::span<const double> axes, double epsilon,
                                double tau, double rogers_c = kDefaultRogersC,
                                double lower_threshold = 0.0);

/// Stable identifier for a list of axes: first 16 hex digits of the SHA-256
/// of their %.17g rendering.
std::string axes_hash(std::span<const double> axes);

struct OracleRow {
  std::string axes_hash;
  double epsilon;
  double tau;
  double lower_bits;
  double upper_bits;
  long long greedy_count;  // -1 when the oracle was not run
};

/// CSV `axes_hash,epsilon,tau,lower_bits,upper_bits,greedy_count`.
std::string oracle_rows_csv(std::span<const OracleRow> rows);

}  // namespace entropy_lab
