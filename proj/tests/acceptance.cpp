// Acceptance gate: runs each acceptance criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Expected values come from oracles
// written here, not from the library's own validation suite.
//
// usage: acceptance PATH_TO_ENTROPY_LAB_BINARY

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "entropy_lab/asymptotics.hpp"
#include "entropy_lab/covering.hpp"
#include "entropy_lab/sequence_model.hpp"
#include "entropy_lab/spectra.hpp"

using namespace entropy_lab;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;

struct Outcome {
  bool passed;
  std::string detail;
};

std::string num(double x, int digits = 6) {
  std::ostringstream ss;
  ss.precision(digits);
  ss << x;
  return ss.str();
}

double rel(double x, double y) {
  const double scale = std::max(std::abs(x), std::abs(y));
  return scale == 0 ? 0 : std::abs(x - y) / scale;
}

Outcome interval_sobolev_coefficient() {
  double worst = 0;
  for (int k = 1; k <= 3; ++k) {
    const double a = sobolev_entropy(SobolevConfig(k, BoxDomain({2 * kPi})),
                                     WeylOrder::kOneTerm).A;
    worst = std::max(worst, rel(a, 2.0 * k / kLn2));
  }
  return {worst <= 1e-12, "max relative error " + num(worst, 3)};
}

Outcome routes_commute() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0;
  int models = 0;
  while (models < 100) {
    const double b1 = 0.2 + 4.8 * u(rng);
    const bool power_law = u(rng) < 0.1;
    const double b2 = power_law ? b1 : b1 * (0.5 + 0.5 * u(rng));
    if (!power_law && (b2 <= b1 / 2 || b2 >= b1)) continue;
    const CountingModel cm(0.1 + 5 * u(rng), b1, power_law ? 0.0 : 4 * u(rng) - 2, b2);
    const EigenvalueModel em = counting_to_eigenvalue_model(cm);
    const auto h1 = entropy_from_counting_model(cm), h2 = entropy_from_eigenvalue_model(em);
    const auto e1 = entropy_numbers_from_counting_model(cm),
               e2 = entropy_numbers_from_eigenvalue_model(em);
    for (double d : {rel(h1.A, h2.A), rel(h1.a, h2.a), rel(h1.B, h2.B), rel(h1.b, h2.b),
                     rel(e1.A, e2.A), rel(e1.a, e2.a), rel(e1.B, e2.B), rel(e1.b, e2.b)})
      worst = std::max(worst, d);
    ++models;
  }
  return {worst <= 1e-12, "100 models, max coefficient gap " + num(worst, 3)};
}

// max_N 2^(-m/N) (N!)^(-1/N) for lambda_n = 1/n, scanning N = 1..n_max.
double harmonic_carl_oracle(std::size_t m, std::size_t n_max) {
  long double best = -INFINITY;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const long double nn = static_cast<long double>(n);
    const long double v = (-std::lgamma(nn + 1) - static_cast<long double>(m) * kLn2) / nn;
    best = std::max(best, v);
  }
  return static_cast<double>(std::exp(best));
}

Outcome carl_asymptotics() {
  std::vector<double> harmonic(1'000'000);
  for (std::size_t n = 1; n <= harmonic.size(); ++n) harmonic[n - 1] = 1.0 / double(n);
  bool ok = true;
  double worst_oracle_gap = 0, lo = INFINITY, hi = -INFINITY, scaled = 0;
  for (std::size_t m : {10, 100, 1000, 10000}) {
    const double sup = carl_supremum(harmonic, m, harmonic.size()).value;
    worst_oracle_gap = std::max(worst_oracle_gap, rel(sup, harmonic_carl_oracle(m, 1'000'000)));
    // Leading entropy-number term of lambda_n = 1/n is m^-1 / ln 2.
    const double ratio = (1.0 / (double(m) * kLn2)) / sup;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    if (m == 10000) scaled = sup * double(m) * kLn2;
  }
  ok = scaled >= 0.95 && scaled <= 1.05 && lo >= 1 && hi <= 6 && worst_oracle_gap <= 1e-9;
  return {ok, "sup*m*ln2 = " + num(scaled) + ", leading/sup in [" + num(lo) + ", " +
                  num(hi) + "], gap to direct scan " + num(worst_oracle_gap, 2)};
}

// Root of kappa1 z^-beta1 + kappa2 z^-beta2 = n in extended precision.
long double bisect_root(long double k1, long double k2, long double b1, long double b2,
                        long double n) {
  auto f = [&](long double z) { return k1 * std::pow(z, -b1) + k2 * std::pow(z, -b2) - n; };
  long double lo = std::pow(k1 / n, 1 / b1), hi = lo;
  while (f(lo) <= 0) lo /= 2;
  while (f(hi) >= 0) hi *= 2;
  while ((hi - lo) > 1e-14L * hi) {
    const long double mid = (lo + hi) / 2;
    (f(mid) > 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

Outcome series_inversion() {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool ok = true;
  double worst = 0;
  for (int i = 0; i < 10; ++i) {
    const double k1 = 0.5 + 1.5 * u(rng);
    const double k2 = (u(rng) < 0.5 ? -1 : 1) * (0.2 + 0.8 * u(rng));
    const double b1 = 1 + 2 * u(rng);
    const double b2 = b1 * (0.5 + 0.25 * u(rng));
    const TwoTermInversion inv = invert_second_order(k1, k2, b1, b2);
    auto ratio = [&](double n) {
      const double root = static_cast<double>(bisect_root(k1, k2, b1, b2, n));
      return std::abs(root - inv(n)) / std::abs(inv.second(n));
    };
    const double r4 = ratio(1e4), r6 = ratio(1e6);
    worst = std::max(worst, r6);
    ok = ok && r6 < 0.1 && r6 < r4;
  }
  return {ok, "worst remainder/second term at n=1e6: " + num(worst)};
}

SpectrumSample lps_spectrum(double r, std::size_t nodes) {
  LPSConfig cfg;
  cfg.sigma = 1;
  cfg.r = r;
  cfg.nodes = nodes;
  return lps_eigenvalues(cfg);
}

Outcome lps_plateau(const SpectrumSample& s) {
  const double raw_min = std::stod(s.params().at("raw_min"));
  const double raw_max = std::stod(s.params().at("raw_max"));
  std::size_t count = 0;
  for (double v : s.values()) count += v >= 0.5;
  bool ok = raw_min >= -1e-8 && raw_max <= 1 + 1e-8 && count >= 11 && count <= 15;
  double worst = 0;
  for (double g : {0.2, 0.5, 0.8}) {
    std::size_t m = 0;
    for (double v : s.values()) m += v >= g;
    const double rate = double(m) / 20;
    ok = ok && lps_counting_rate(s, 20, g) == rate;
    worst = std::max(worst, std::abs(rate - 2 / kPi));
  }
  ok = ok && worst <= 0.1;
  return {ok, "raw range [" + num(raw_min, 3) + ", " + num(raw_max, 12) + "], M(0.5) = " +
                  std::to_string(count) + ", max |rate - 2/pi| = " + num(worst)};
}

// kappa(d) of the ball cover, restated from its definition.
double kappa(std::size_t d, double eps) {
  if (d <= 4) return 2 * (1 + eps / 2);
  return std::pow(16 * std::pow(double(d), 2.5), 1 / (2.0 * double(d)));
}

struct Bracket {
  double lower, upper;
};

Bracket sandwich_rate(const SpectrumSample& s, double r, double eps, double tau) {
  std::vector<double> axes;
  for (double v : s.values())
    if (v > 0) axes.push_back(v);
  const CoveringBounds b = sandwich_entropy(axes, eps, tau);

  double lower = 0;
  std::size_t kept = 0;
  for (double a : axes) {
    if (a >= eps) lower += 2 * std::log2(a / eps);
    if (a >= tau * eps) ++kept;
  }
  const double radius = (1 - tau) * eps / std::max(1.0, axes.front());
  const double upper = 2 * double(kept) * std::log2(kappa(kept, radius) / radius);
  if (rel(lower, b.lower_log2) > 1e-12 || rel(upper, b.upper_log2) > 1e-12)
    return {NAN, NAN};
  return {lower / (2 * r), upper / (2 * r)};
}

Outcome lps_sandwich(const SpectrumSample& s10, const SpectrumSample& s20) {
  const double theory = 2 / kPi;
  const Bracket b10 = sandwich_rate(s10, 10, 0.5, 0.5);
  const Bracket b20 = sandwich_rate(s20, 20, 0.5, 0.5);
  const double d10 = std::abs((b10.lower + b10.upper) / 2 - theory);
  const double d20 = std::abs((b20.lower + b20.upper) / 2 - theory);
  const bool ok = b20.lower >= 0.75 * theory && b20.lower <= 1.25 * theory &&
                  b20.upper >= 0.75 * theory && d20 <= d10;
  return {ok, "r=20 bracket [" + num(b20.lower) + ", " + num(b20.upper) + "] vs " +
                  num(theory) + " (upper/rate " + num(b20.upper / theory, 3) +
                  "), midpoint distance " + num(d10) + " -> " + num(d20)};
}

Outcome weyl_two_term() {
  const double gamma = 1e4;
  // Direct count of n in N^3 with n1^2 + n2^2 + n3^2 <= gamma.
  std::uint64_t direct = 0;
  for (long a = 1; a * a <= gamma; ++a)
    for (long b = 1; a * a + b * b <= gamma; ++b)
      for (long c = 1; a * a + b * b + c * c <= gamma; ++c) ++direct;
  const std::uint64_t count = box_laplacian_counting(BoxDomain({kPi, kPi, kPi}), gamma, 2);
  const double one = kPi / 6 * std::pow(gamma, 1.5);
  const double two = one - 3 * kPi / 8 * gamma;
  const double n = double(count);
  const double e1 = std::abs(n - one) / n, e2 = std::abs(n - two) / n;
  const bool ok = count == direct && e1 <= 0.03 && e2 <= 0.01 && n < one;
  return {ok, "count " + std::to_string(count) + " (direct " + std::to_string(direct) +
                  "), one-term error " + num(e1) + ", two-term error " + num(e2)};
}

Outcome covering_sandwich() {
  bool ok = true;
  std::string detail;
  const Ellipsoid disk({1.0}, Field::kComplex);
  for (double eps : {0.5, 0.3}) {
    const double lower = volume_lower_bound(disk, eps);
    const double upper = ball_covering_upper(1, eps).bits;
    ok = ok && rel(lower, 2 * std::log2(1 / eps)) <= 1e-14 &&
         rel(upper, 2 * std::log2(2 * (1 + eps / 2) / eps)) <= 1e-14;
    const std::size_t count = greedy_cover_count(disk, eps, eps / 8);
    const double bits = std::log2(double(count));
    ok = ok && lower <= bits && bits <= upper;
    if (eps == 0.5) ok = ok && std::abs(lower - 2) <= 1e-12 && count <= 9;
    detail += (detail.empty() ? "" : "; ") + std::string("eps=") + num(eps, 2) + ": " +
              num(lower) + " <= log2(" + std::to_string(count) + ") <= " + num(upper);
  }
  return {ok, detail};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome repeat_runs_identical(const std::string& cli) {
  const fs::path root = fs::temp_directory_path() / "entropy_lab_acceptance";
  fs::remove_all(root);
  const fs::path a = root / "a", b = root / "b";
  for (const fs::path& dir : {a, b}) {
    const std::string cmd = "\"" + cli + "\" validate --suite fast --seed 7 --threads 2 --out \"" +
                            dir.string() + "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
  }
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel_path = fs::relative(entry.path(), a);
    if (!fs::exists(b / rel_path) || slurp(entry.path()) != slurp(b / rel_path))
      return {false, rel_path.string() + " differs"};
    ++files;
  }
  std::size_t files_b = 0;
  for (const auto& entry : fs::recursive_directory_iterator(b)) files_b += entry.is_regular_file();
  if (files == 0 || files != files_b) return {false, "file sets differ"};
  fs::remove_all(root);
  return {true, std::to_string(files) + " files byte-identical across two runs"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s PATH_TO_ENTROPY_LAB\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];

  std::optional<SpectrumSample> s10, s20;
  auto r10 = [&]() -> const SpectrumSample& {
    if (!s10) s10 = lps_spectrum(10, 300);
    return *s10;
  };
  auto r20 = [&]() -> const SpectrumSample& {
    if (!s20) s20 = lps_spectrum(20, 600);
    return *s20;
  };

  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "sobolev leading coefficient 2k/ln2", 1, interval_sobolev_coefficient},
      {2, "counting and eigenvalue routes commute", 1, routes_commute},
      {3, "carl supremum asymptotics", 60, carl_asymptotics},
      {4, "second-order inversion accuracy", 5, series_inversion},
      {5, "lps eigenvalue plateau", 120, [&] { return lps_plateau(r20()); }},
      {6, "lps entropy-rate sandwich", 300, [&] { return lps_sandwich(r10(), r20()); }},
      {7, "two-term weyl law on the cube", 5, weyl_two_term},
      {8, "covering sandwich on the unit disk", 30, covering_sandwich},
      {9, "repeat runs produce identical bundles", 300, [&] { return repeat_runs_identical(cli); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.budget_seconds) {
      o.passed = false;
      o.detail += "; took " + num(seconds, 3) + " s, budget " + num(c.budget_seconds) + " s";
    }
    failures += !o.passed;
    std::printf("criterion %d: %s %s: %s (%.2f s)\n", c.id, o.passed ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), seconds);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
