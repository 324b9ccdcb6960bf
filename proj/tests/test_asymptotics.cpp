#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "entropy_lab/asymptotics.hpp"
#include "test_support.hpp"

using namespace entropy_lab;
using test_support::close_rel;
using test_support::error_kind_of;

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Root of f(z) = target on a bracket where f is decreasing, by plain bisection.
template <class F>
double bisect_decreasing(F&& f, double target, double lo, double hi) {
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct DirectCarl {
  double value;
  std::size_t n_star;
};

// max_N 2^(-m/N) (prod lambda_n)^(1/N) with an explicit product.
DirectCarl direct_carl(const std::vector<double>& lambda, std::size_t m,
                       std::size_t n_max) {
  DirectCarl best{-1.0, 0};
  double product = 1.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    product *= lambda[n - 1];
    const double v = std::pow(2.0, -static_cast<double>(m) / static_cast<double>(n)) *
                     std::pow(product, 1.0 / static_cast<double>(n));
    if (v > best.value * (1.0 + 1e-13)) best = {v, n};
  }
  return best;
}

std::vector<double> harmonic(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 1; i <= n; ++i) v[i - 1] = 1.0 / static_cast<double>(i);
  return v;
}

}  // namespace

TEST_CASE("entropy expansion from an eigenvalue model") {
  const auto h1 = entropy_from_eigenvalue_model(EigenvalueModel(1, 1, 0, 1));
  CHECK(h1.A == doctest::Approx(1.0 / kLn2).epsilon(1e-15));
  CHECK(h1.a == 1.0);
  CHECK(h1.B == 0.0);
  CHECK(h1.A == doctest::Approx(1.442695).epsilon(1e-6));

  const auto h2 = entropy_from_eigenvalue_model(EigenvalueModel(1, 1, 1, 1.25));
  CHECK(h2.A == doctest::Approx(1.442695).epsilon(1e-6));
  CHECK(h2.a == 1.0);
  CHECK(h2.B == doctest::Approx(1.0 / (0.75 * kLn2)).epsilon(1e-15));
  CHECK(h2.B == doctest::Approx(1.923594).epsilon(1e-6));
  CHECK(h2.b == doctest::Approx(0.75).epsilon(1e-15));

  const auto h3 = entropy_from_eigenvalue_model(EigenvalueModel(2, 2, 0, 2));
  CHECK(h3.A == doctest::Approx(2.0 * std::sqrt(2.0) / kLn2).epsilon(1e-15));
  CHECK(h3.a == 0.5);
}

TEST_CASE("entropy-number expansion from an eigenvalue model") {
  const auto e1 = entropy_numbers_from_eigenvalue_model(EigenvalueModel(1, 1, 0, 1));
  CHECK(e1.A == doctest::Approx(1.0 / kLn2).epsilon(1e-15));
  CHECK(e1.a == 1.0);

  const auto e2 = entropy_numbers_from_eigenvalue_model(EigenvalueModel(1, 1, 1, 1.25));
  CHECK(e2.A == doctest::Approx(1.442695).epsilon(1e-6));
  CHECK(e2.B == doctest::Approx(std::pow(1.0 / kLn2, 1.25) / 0.75).epsilon(1e-15));
  CHECK(e2.b == 1.25);

  SUBCASE("inverting the leading entropy term reproduces A") {
    for (const auto& model : {EigenvalueModel(1, 1, 0, 1), EigenvalueModel(2, 2, 0, 2),
                              EigenvalueModel(0.3, 0.7, 0.1, 1.0)}) {
      const auto h = entropy_from_eigenvalue_model(model);
      const auto e = entropy_numbers_from_eigenvalue_model(model);
      for (double m : {10.0, 1e3, 1e6}) {
        const double eps = std::pow(h.A / m, 1.0 / h.a);  // solves A eps^-a = m
        CHECK(close_rel(eps * std::pow(m, e.a), e.A, 1e-12));
      }
    }
  }
}

TEST_CASE("expansions from a counting model") {
  const auto h1 = entropy_from_counting_model(CountingModel(1, 1, 0, 1));
  CHECK(h1.A == doctest::Approx(1.0 / kLn2).epsilon(1e-15));
  CHECK(h1.a == 1.0);

  const double pi = std::numbers::pi;
  const auto h2 = entropy_from_counting_model(CountingModel::power_law(pi / 6, 3));
  CHECK(h2.A == doctest::Approx(pi / (18 * kLn2)).epsilon(1e-15));
  CHECK(h2.a == 3.0);

  const auto e1 = entropy_numbers_from_counting_model(CountingModel(1, 1, 0, 1));
  CHECK(e1.A == doctest::Approx(1.0 / kLn2).epsilon(1e-15));
  CHECK(e1.a == 1.0);

  const auto e2 = entropy_numbers_from_counting_model(CountingModel(1, 2, 1, 1.5));
  CHECK(e2.a == 0.5);
  CHECK(e2.b == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(e2.A == doctest::Approx(std::sqrt(1.0 / (2 * kLn2))).epsilon(1e-15));
  CHECK(e2.A == doctest::Approx(0.849322).epsilon(1e-6));
}

TEST_CASE("counting route commutes with the eigenvalue route") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int tested = 0;
  for (int i = 0; i < 100; ++i) {
    const double k1 = 0.2 + 3 * u(rng), b1 = 0.3 + 4 * u(rng);
    const bool power = i % 7 == 0;
    const double b2 = power ? b1 : b1 / 2 + b1 / 2 * (0.001 + 0.998 * u(rng));
    const CountingModel cm(k1, b1, power ? 0.0 : 2 * u(rng) - 1, b2);
    const auto em = counting_to_eigenvalue_model(cm);
    const auto h1 = entropy_from_counting_model(cm);
    const auto h2 = entropy_from_eigenvalue_model(em);
    const auto e1 = entropy_numbers_from_counting_model(cm);
    const auto e2 = entropy_numbers_from_eigenvalue_model(em);
    CHECK(close_rel(h1.A, h2.A, 1e-12));
    CHECK(close_rel(h1.a, h2.a, 1e-12));
    CHECK(close_rel(h1.B, h2.B, 1e-12));
    CHECK(close_rel(h1.b, h2.b, 1e-12));
    CHECK(close_rel(e1.A, e2.A, 1e-12));
    CHECK(close_rel(e1.a, e2.a, 1e-12));
    CHECK(close_rel(e1.B, e2.B, 1e-12));
    CHECK(close_rel(e1.b, e2.b, 1e-12));
    ++tested;
  }
  CHECK(tested == 100);
}

TEST_CASE("first-order inversion") {
  const PowerTerm t1 = invert_first_order(1, 1);
  CHECK(t1.coefficient == 1.0);
  CHECK(t1.exponent == -1.0);
  const PowerTerm t2 = invert_first_order(4, 2);
  CHECK(t2.coefficient == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(t2.exponent == -0.5);

  const double n = 1e6;
  const double root =
      bisect_decreasing([](double z) { return 9.0 * std::pow(z, -3.0); }, n, 1e-6, 1.0);
  const PowerTerm t3 = invert_first_order(9, 3);
  CHECK(close_rel(t3(n), root, 1e-9));
  CHECK(close_rel(t3(n), std::cbrt(9.0) * 1e-2, 1e-12));
}

TEST_CASE("second-order inversion") {
  const TwoTermInversion inv = invert_second_order(1, 1, 2, 1);
  CHECK(inv.lead.coefficient == 1.0);
  CHECK(inv.lead.exponent == -0.5);
  CHECK(inv.second.coefficient == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(inv.second.exponent == doctest::Approx(-1.0).epsilon(1e-15));

  SUBCASE("quadratic case solved in closed form") {
    // z^-2 + z^-1 = 100 is a quadratic in 1/z.
    const double exact = 2.0 / (-1.0 + std::sqrt(401.0));
    CHECK(exact == doctest::Approx(0.105131).epsilon(1e-5));
    CHECK(inv(100) == doctest::Approx(0.105).epsilon(1e-15));
    const double residual = std::abs(exact - inv(100));
    CHECK(residual < 2e-4);
    CHECK(residual < inv.second(100));
  }
  SUBCASE("vanishing second coefficient reduces to first order") {
    const TwoTermInversion z = invert_second_order(1, 0, 2, 1);
    CHECK(z.second.coefficient == 0.0);
    CHECK(z(1e4) == invert_first_order(1, 2)(1e4));
  }
  SUBCASE("hypothesis beta1 > beta2") {
    CHECK(error_kind_of([] { invert_second_order(1, 1, 1, 1); }) == ErrorKind::kRegime);
    CHECK(error_kind_of([] { invert_second_order(1, 1, 1, 2); }) == ErrorKind::kRegime);
  }
}

TEST_CASE("second-order inversion residual shrinks relative to the second term") {
  struct P { double k1, k2, b1, b2; };
  for (const P p : {P{1, 1, 2, 1.5}, P{0.7, -0.5, 3, 2}, P{2, 0.3, 1.5, 1.0}}) {
    const TwoTermInversion inv = invert_second_order(p.k1, p.k2, p.b1, p.b2);
    double previous = INFINITY;
    for (double n : {1e3, 1e4, 1e5}) {
      const double lead = inv.lead(n);
      const double root = bisect_decreasing(
          [&](double z) { return p.k1 * std::pow(z, -p.b1) + p.k2 * std::pow(z, -p.b2); },
          n, lead / 4, lead * 4);
      const double ratio = std::abs(root - inv(n)) / std::abs(inv.second(n));
      CHECK(ratio < previous);
      previous = ratio;
    }
  }
}

TEST_CASE("expansion evaluation") {
  CHECK(eval_expansion(EntropyExpansion{1, 1, 0, 1}, 0.5) == doctest::Approx(2.0));
  CHECK(eval_expansion(EntropyExpansion{1.442695, 1, 0, 1}, 0.01) ==
        doctest::Approx(144.2695).epsilon(1e-12));
  CHECK(eval_expansion(EntropyNumberExpansion{1, 1, -0.5, 0.5}, 4) ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK(error_kind_of([] { eval_expansion(EntropyExpansion{1, 1, 0, 1}, 0.0); }) ==
        ErrorKind::kPrecondition);
}

TEST_CASE("expansions with positive terms decrease in epsilon") {
  const auto h = entropy_from_eigenvalue_model(EigenvalueModel(1.5, 1.2, 0.4, 1.5));
  REQUIRE(h.B > 0);
  double previous = INFINITY;
  for (double eps = 1e-6; eps < 1.0; eps *= 1.3) {
    const double v = eval_expansion(h, eps);
    CHECK(v < previous);
    previous = v;
  }
}

TEST_CASE("carl supremum examples") {
  const auto lambda = harmonic(64);
  SUBCASE("harmonic, m = 4") {
    const DirectCarl oracle = direct_carl(lambda, 4, 64);
    const CarlBoundResult r = carl_supremum(lambda, 4, 64);
    CHECK(r.n_star == 4);
    CHECK(oracle.n_star == 4);
    CHECK(close_rel(r.value, oracle.value, 1e-12));
    CHECK(close_rel(r.value, 0.5 * std::pow(24.0, -0.25), 1e-14));
    CHECK(r.m == 4);
    CHECK_FALSE(r.boundary_hit);
  }
  SUBCASE("harmonic, m = 1: N = 1 and N = 2 tie, the smaller wins") {
    const CarlBoundResult r = carl_supremum(harmonic(16), 1, 16);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.n_star == 1);
  }
  SUBCASE("geometric, m = 2") {
    std::vector<double> g(32);
    for (std::size_t n = 1; n <= 32; ++n) g[n - 1] = std::ldexp(1.0, -static_cast<int>(n));
    const CarlBoundResult r = carl_supremum(g, 2, 32);
    CHECK(r.value == doctest::Approx(std::pow(2.0, -2.5)).epsilon(1e-14));
    CHECK(r.n_star == 2);
  }
}

TEST_CASE("carl supremum in log space matches the direct product") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(20);
    for (auto& x : v) x = u(rng);
    std::sort(v.begin(), v.end(), std::greater<>());
    for (std::size_t m : {1, 2, 5, 12}) {
      const DirectCarl oracle = direct_carl(v, m, 20);
      const CarlBoundResult r = carl_supremum(v, m, 20);
      CHECK(close_rel(r.value, oracle.value, 1e-12));
    }
  }
}

TEST_CASE("carl supremum properties and errors") {
  const auto lambda = harmonic(20000);
  double previous = INFINITY;
  for (std::size_t m = 1; m <= 200; m += 7) {
    const double v = carl_supremum(lambda, m, lambda.size()).value;
    CHECK(v < previous);
    previous = v;
  }

  const std::vector<double> flat(50, 1.0);
  const CarlBoundResult edge = carl_supremum(flat, 3, 50);
  CHECK(edge.boundary_hit);
  CHECK(edge.n_star == 50);

  CHECK(error_kind_of([] { carl_supremum(std::vector<double>{1.0, 0.0, 0.0}, 3, 3); }) ==
        ErrorKind::kSpectrumDomain);
  CHECK(error_kind_of([&] { carl_supremum(lambda, 0, 10); }) == ErrorKind::kPrecondition);
  CHECK(error_kind_of([&] { carl_supremum(harmonic(5), 2, 10); }) ==
        ErrorKind::kPrecondition);

  const auto model = EigenvalueModel::power_law(1, 1);
  const CarlBoundResult via_model = carl_supremum(model, 50, 5000);
  const CarlBoundResult via_values = carl_supremum(harmonic(5000), 50, 5000);
  CHECK(via_model.n_star == via_values.n_star);
  CHECK(close_rel(via_model.value, via_values.value, 1e-14));
}

TEST_CASE("carl supremum against the leading entropy-number term") {
  const auto lambda = harmonic(200000);
  const auto e = entropy_numbers_from_eigenvalue_model(EigenvalueModel::power_law(1, 1));
  for (std::size_t m : {10, 100, 1000, 10000}) {
    const double ratio = e.A * std::pow(static_cast<double>(m), -e.a) /
                         carl_supremum(lambda, m, lambda.size()).value;
    CHECK(ratio >= 1.0);
    CHECK(ratio <= 6.0);
  }
}

TEST_CASE("carl asymptotic leading term") {
  CHECK(carl_asymptotic(EigenvalueModel::power_law(1, 1), 1000) ==
        doctest::Approx(1.442695e-3).epsilon(1e-6));
  CHECK(carl_asymptotic(EigenvalueModel::power_law(3, 2), 100) ==
        doctest::Approx(3 * std::pow(2 / kLn2, 2) * 1e-4).epsilon(1e-14));
  CHECK(carl_asymptotic(EigenvalueModel::power_law(3, 2), 100) ==
        doctest::Approx(2.497e-3).epsilon(1e-3));
  const double sup = carl_supremum(harmonic(1000000), 10000, 1000000).value;
  CHECK(close_rel(carl_asymptotic(EigenvalueModel::power_law(1, 1), 10000), sup, 0.05));
  CHECK(error_kind_of([] { carl_asymptotic(EigenvalueModel(1, 1, 1, 1.2), 10); }) ==
        ErrorKind::kNotSupported);
}
