#include "entropy_lab/covering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "entropy_lab/error.hpp"
#include "entropy_lab/io_util.hpp"

namespace entropy_lab {

std::string to_string(Field field) {
  return field == Field::kComplex ? "complex" : "real";
}

Ellipsoid::Ellipsoid(std::vector<double> semi_axes, Field field)
    : axes_(std::move(semi_axes)), field_(field) {
  for (double a : axes_)
    require(std::isfinite(a) && a > 0.0, ErrorKind::kPrecondition,
            "ellipsoid: semi-axes must be positive and finite, got " +
                format_g17(a));
  std::stable_sort(axes_.begin(), axes_.end(), std::greater<>());
}

double volume_lower_bound(const Ellipsoid& e, double epsilon) {
  require(e.field() == Field::kComplex, ErrorKind::kNotSupported,
          "volume_lower_bound: only complex ellipsoids are supported; pair "
          "real dimensions or use the greedy oracle");
  require(epsilon > 0.0, ErrorKind::kPrecondition,
          "volume_lower_bound: epsilon must be positive");
  const double d = static_cast<double>(e.dim());
  double log_sum = 0.0;
  for (double mu : e.semi_axes()) log_sum += std::log2(mu);
  const double bits = 2.0 * d * std::log2(1.0 / epsilon) + 2.0 * log_sum;
  return std::max(0.0, bits);
}

double ball_covering_kappa(std::size_t d_complex, double epsilon,
                           double rogers_c) {
  require(d_complex >= 1, ErrorKind::kPrecondition,
          "ball_covering_kappa: dimension must be >= 1");
  require(rogers_c >= 1.0 && std::isfinite(rogers_c), ErrorKind::kPrecondition,
          "ball_covering_kappa: rogers_c must be >= 1 (kappa(d) below 1 would "
          "beat the volume bound)");
  if (d_complex <= 4) return 2.0 * (1.0 + epsilon / 2.0);
  const double d = static_cast<double>(d_complex);
  return std::exp((std::log(rogers_c) + 2.5 * std::log(d)) / (2.0 * d));
}

BallCoverBound ball_covering_upper(std::size_t d_complex, double epsilon,
                                   double rogers_c) {
  require(epsilon > 0.0, ErrorKind::kPrecondition,
          "ball_covering_upper: epsilon must be positive");
  if (epsilon >= 1.0) return {0.0, true};
  const double kappa = ball_covering_kappa(d_complex, epsilon, rogers_c);
  const double bits =
      2.0 * static_cast<double>(d_complex) * std::log2(kappa / epsilon);
  return {std::max(0.0, bits), false};
}

TruncationResult truncate_ellipsoid(std::span<const double> axes,
                                    double epsilon, double tau) {
  require(epsilon > 0.0, ErrorKind::kPrecondition,
          "truncate_ellipsoid: epsilon must be positive");
  require(tau > 0.0 && tau < 1.0, ErrorKind::kPrecondition,
          "truncate_ellipsoid: tau must lie in (0, 1)");
  const double threshold = tau * epsilon;
  TruncationResult out{0, 0.0, (1.0 - tau) * epsilon};
  for (double a : axes) {
    if (a >= threshold)
      ++out.kept_dims;
    else
      out.dropped_max_axis = std::max(out.dropped_max_axis, a);
  }
  return out;
}

std::uint64_t cell_budget_from_env() {
  const char* raw = std::getenv("ENTROPY_LAB_CELL_BUDGET");
  if (raw == nullptr || *raw == '\0') return kDefaultCellBudget;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  require(end != raw && *end == '\0' && v > 0, ErrorKind::kSchema,
          std::string("ENTROPY_LAB_CELL_BUDGET must be a positive integer, "
                      "got '") + raw + "'");
  return v;
}

namespace {

// Dense 3-D grid (unused trailing dimensions have extent 1) of the cells
// meeting the ellipsoid.
struct CoverGrid {
  std::array<long, 3> half{0, 0, 0};    // index range [-half, half]
  std::array<long, 3> extent{1, 1, 1};  // 2 half + 1
  std::vector<std::uint8_t> member;     // cell meets the ellipsoid
  std::vector<std::array<long, 3>> stencil;
  std::vector<std::size_t> points;      // flat indices of member cells

  std::size_t flat(long i, long j, long k) const {
    return static_cast<std::size_t>(((i + half[0]) * extent[1] + (j + half[1])) *
                                        extent[2] +
                                    (k + half[2]));
  }
  std::array<long, 3> coords(std::size_t f) const {
    const long k = static_cast<long>(f % static_cast<std::size_t>(extent[2]));
    f /= static_cast<std::size_t>(extent[2]);
    const long j = static_cast<long>(f % static_cast<std::size_t>(extent[1]));
    const long i = static_cast<long>(f / static_cast<std::size_t>(extent[1]));
    return {i - half[0], j - half[1], k - half[2]};
  }
  bool inside(const std::array<long, 3>& c) const {
    for (int d = 0; d < 3; ++d)
      if (c[d] < -half[d] || c[d] > half[d]) return false;
    return true;
  }
};

// Greedy max-coverage over the member cells with a fixed candidate ranking
// for ties, followed by removal of balls made redundant by later choices.
std::size_t run_greedy(const CoverGrid& grid,
                       const std::vector<std::size_t>& rank) {
  const std::size_t cells = grid.member.size();
  std::vector<std::uint32_t> cover_count(cells, 0);
  std::size_t uncovered = grid.points.size();

  auto for_each_covered = [&](std::size_t centre, auto&& fn) {
    const auto c = grid.coords(centre);
    for (const auto& o : grid.stencil) {
      const std::array<long, 3> p{c[0] + o[0], c[1] + o[1], c[2] + o[2]};
      if (!grid.inside(p)) continue;
      const std::size_t f = grid.flat(p[0], p[1], p[2]);
      if (grid.member[f]) fn(f);
    }
  };
  auto gain_of = [&](std::size_t centre) {
    std::size_t g = 0;
    for_each_covered(centre, [&](std::size_t f) { g += cover_count[f] == 0; });
    return g;
  };

  // (gain, -rank) max-heap; stale gains are refreshed lazily since gains
  // only ever decrease.
  using Entry = std::tuple<std::size_t, long long, std::size_t>;
  std::priority_queue<Entry> heap;
  for (std::size_t idx = 0; idx < grid.points.size(); ++idx) {
    const std::size_t c = grid.points[idx];
    heap.emplace(gain_of(c), -static_cast<long long>(rank[idx]), c);
  }

  std::vector<std::size_t> chosen;
  while (uncovered > 0 && !heap.empty()) {
    auto [stale, neg_rank, c] = heap.top();
    heap.pop();
    const std::size_t fresh = gain_of(c);
    if (fresh == 0) continue;
    if (fresh < stale && !heap.empty() &&
        Entry(fresh, neg_rank, c) < heap.top()) {
      heap.emplace(fresh, neg_rank, c);
      continue;
    }
    chosen.push_back(c);
    for_each_covered(c, [&](std::size_t f) {
      if (cover_count[f]++ == 0) --uncovered;
    });
  }
  if (uncovered != 0)
    throw std::logic_error("greedy_cover_count: candidates exhausted");

  std::size_t kept = chosen.size();
  for (auto it = chosen.rbegin(); it != chosen.rend(); ++it) {
    bool redundant = true;
    for_each_covered(*it, [&](std::size_t f) { redundant &= cover_count[f] >= 2; });
    if (!redundant) continue;
    for_each_covered(*it, [&](std::size_t f) { --cover_count[f]; });
    --kept;
  }
  return kept;
}

}  // namespace

std::size_t greedy_cover_count(const Ellipsoid& e, double epsilon,
                               double grid_step, std::uint64_t cell_budget) {
  const std::size_t dims = e.real_dim();
  require(dims >= 1 && dims <= 3, ErrorKind::kNotSupported,
          "greedy_cover_count: only 1 to 3 real dimensions are supported, got " +
              std::to_string(dims));
  require(epsilon > 0.0, ErrorKind::kPrecondition,
          "greedy_cover_count: epsilon must be positive");
  require(grid_step > 0.0 && grid_step <= epsilon / 4.0,
          ErrorKind::kPrecondition,
          "greedy_cover_count: grid_step " + format_g17(grid_step) +
              " is too coarse, need grid_step <= epsilon/4 = " +
              format_g17(epsilon / 4.0));

  std::vector<double> axes;
  for (double a : e.semi_axes()) {
    axes.push_back(a);
    if (e.field() == Field::kComplex) axes.push_back(a);
  }
  // The centred ball already contains the whole body.
  if (axes.front() <= epsilon) return 1;

  CoverGrid grid;
  std::uint64_t total = 1;
  for (std::size_t d = 0; d < dims; ++d) {
    grid.half[d] = static_cast<long>(std::floor(axes[d] / grid_step + 0.5));
    grid.extent[d] = 2 * grid.half[d] + 1;
    total *= static_cast<std::uint64_t>(grid.extent[d]);
    require(total <= cell_budget, ErrorKind::kResource,
            "greedy_cover_count: grid exceeds the cell budget of " +
                std::to_string(cell_budget) +
                " (raise ENTROPY_LAB_CELL_BUDGET or the grid step)");
  }

  // A cell meets the ellipsoid iff its point closest to the origin, taken
  // coordinatewise, lies inside.
  grid.member.assign(total, 0);
  auto gap = [&](long j) {
    return std::max(0.0, grid_step * (static_cast<double>(std::labs(j)) - 0.5));
  };
  for (long i = -grid.half[0]; i <= grid.half[0]; ++i)
    for (long j = -grid.half[1]; j <= grid.half[1]; ++j)
      for (long k = -grid.half[2]; k <= grid.half[2]; ++k) {
        const std::array<long, 3> idx{i, j, k};
        double q = 0.0;
        for (std::size_t d = 0; d < dims; ++d) {
          const double t = gap(idx[d]) / axes[d];
          q += t * t;
        }
        if (q <= 1.0) {
          const std::size_t f = grid.flat(i, j, k);
          grid.member[f] = 1;
          grid.points.push_back(f);
        }
      }

  // Every point of a cell is within grid_step sqrt(dims)/2 of its centre.
  const double radius =
      epsilon - grid_step * std::sqrt(static_cast<double>(dims)) / 2.0;
  const double r2 = (radius / grid_step) * (radius / grid_step);
  const long reach = static_cast<long>(std::floor(radius / grid_step));
  std::array<long, 3> lim{0, 0, 0};
  for (std::size_t d = 0; d < dims; ++d) lim[d] = reach;
  for (long i = -lim[0]; i <= lim[0]; ++i)
    for (long j = -lim[1]; j <= lim[1]; ++j)
      for (long k = -lim[2]; k <= lim[2]; ++k)
        if (static_cast<double>(i * i + j * j + k * k) <= r2)
          grid.stencil.push_back({i, j, k});

  // Two tie-breaking orders: grid order (a sweep, optimal in 1-D) and
  // centre-out. Both yield valid covers, so the smaller count is reported.
  const std::size_t n = grid.points.size();
  std::vector<std::size_t> sweep(n);
  for (std::size_t idx = 0; idx < n; ++idx) sweep[idx] = idx;

  std::vector<std::size_t> order(n);
  for (std::size_t idx = 0; idx < n; ++idx) order[idx] = idx;
  auto norm2 = [&](std::size_t idx) {
    const auto c = grid.coords(grid.points[idx]);
    return c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return norm2(x) < norm2(y);
  });
  std::vector<std::size_t> centre_out(n);
  for (std::size_t r = 0; r < n; ++r) centre_out[order[r]] = r;

  return std::min(run_greedy(grid, sweep), run_greedy(grid, centre_out));
}

CoveringBounds sandwich_entropy(std::span<const double> axes, double epsilon,
                                double tau, double rogers_c,
                                double lower_threshold) {
  require(epsilon > 0.0, ErrorKind::kPrecondition,
          "sandwich_entropy: epsilon must be positive");
  require(tau > 0.0 && tau < 1.0, ErrorKind::kPrecondition,
          "sandwich_entropy: tau must lie in (0, 1)");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    require(axes[i] > 0.0, ErrorKind::kPrecondition,
            "sandwich_entropy: semi-axes must be positive");
    require(i == 0 || axes[i] <= axes[i - 1], ErrorKind::kPrecondition,
            "sandwich_entropy: semi-axes must be non-increasing");
  }

  CoveringBounds out{};
  out.epsilon = epsilon;

  const double threshold = lower_threshold > 0.0 ? lower_threshold : epsilon;
  const auto low_end = std::find_if(axes.begin(), axes.end(),
                                    [&](double a) { return a < threshold; });
  out.lower_dims = static_cast<std::size_t>(low_end - axes.begin());
  out.lower_method = "volume-ratio(complex, axes>=" + format_g17(threshold) + ")";
  if (out.lower_dims > 0) {
    const Ellipsoid kept(std::vector<double>(axes.begin(), low_end),
                         Field::kComplex);
    out.lower_log2 = volume_lower_bound(kept, epsilon);
  }

  const TruncationResult trunc = truncate_ellipsoid(axes, epsilon, tau);
  out.upper_dims = trunc.kept_dims;
  if (trunc.kept_dims == 0) {
    out.fully_truncated = true;
    out.upper_method = "single-ball";
  } else {
    const double scale = std::max(1.0, axes.front());
    out.scaled_upper = scale > 1.0;
    const BallCoverBound ball = ball_covering_upper(
        trunc.kept_dims, trunc.inflated_epsilon / scale, rogers_c);
    out.upper_log2 = ball.bits;
    out.upper_method = ball.trivial ? "single-ball"
                                    : std::string("ball-cover(kappa(") +
                                          std::to_string(trunc.kept_dims) +
                                          "), radius (1-tau)eps" +
                                          (out.scaled_upper ? "/mu_1" : "") + ")";
  }
  if (out.lower_log2 > out.upper_log2 * (1.0 + 1e-12) + 1e-12)
    throw std::logic_error("sandwich_entropy: lower bound exceeds upper bound");
  out.lower_log2 = std::min(out.lower_log2, out.upper_log2);
  return out;
}

std::string axes_hash(std::span<const double> axes) {
  std::string text;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (i) text += ',';
    text += format_g17(axes[i]);
  }
  return sha256_hex(text).substr(0, 16);
}

std::string oracle_rows_csv(std::span<const OracleRow> rows) {
  std::string out = "axes_hash,epsilon,tau,lower_bits,upper_bits,greedy_count\n";
  for (const auto& r : rows) {
    out += r.axes_hash + ',' + format_g17(r.epsilon) + ',' + format_g17(r.tau) +
           ',' + format_g17(r.lower_bits) + ',' + format_g17(r.upper_bits) + ',' +
           (r.greedy_count < 0 ? std::string() : std::to_string(r.greedy_count)) +
           '\n';
  }
  return out;
}

}  // namespace entropy_lab
