#include "entropy_lab/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "entropy_lab/error.hpp"
#include "entropy_lab/io_util.hpp"

namespace entropy_lab {
namespace {

constexpr double kLn2 = std::numbers::ln2;

// Fits the tail [ceil(n/2), n] of a positive prefix to get a decay rate for
// the early-stop window; returns 0 when no sensible estimate exists.
double quick_decay_estimate(std::span<const double> values, std::size_t n_max) {
  if (n_max < 8) return 0.0;
  const std::size_t first = (n_max + 1) / 2;
  for (std::size_t n = first; n <= n_max; ++n)
    if (!(values[n - 1] > 0.0)) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double count = static_cast<double>(n_max - first + 1);
  for (std::size_t n = first; n <= n_max; ++n) {
    const double x = std::log(static_cast<double>(n));
    const double y = std::log(values[n - 1]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = count * sxx - sx * sx;
  if (!(denom > 0.0)) return 0.0;
  const double slope = (count * sxy - sx * sy) / denom;
  return slope < 0.0 ? -slope : 0.0;
}

template <class Lambda>
CarlBoundResult carl_search(Lambda&& lambda, std::size_t m, std::size_t n_max,
                            double alpha_hat) {
  require(m >= 1, ErrorKind::kPrecondition, "carl_supremum: m must be >= 1");
  require(n_max >= 1, ErrorKind::kPrecondition,
          "carl_supremum: n_max must be >= 1");

  std::size_t stop_after = std::numeric_limits<std::size_t>::max();
  if (alpha_hat > 0.0 && std::isfinite(alpha_hat)) {
    const double w = 3.0 * std::ceil(kLn2 * static_cast<double>(m) / alpha_hat);
    if (w < 1e18) stop_after = static_cast<std::size_t>(w < 1.0 ? 1.0 : w);
  }

  const double m_ln2 = static_cast<double>(m) * kLn2;
  double log_sum = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  double previous = best;
  std::size_t n_star = 0;
  std::size_t run = 0;
  std::size_t n = 1;
  for (; n <= n_max; ++n) {
    const double l = lambda(n);
    require(l > 0.0 && std::isfinite(l), ErrorKind::kSpectrumDomain,
            "carl_supremum: lambda_" + std::to_string(n) + " = " +
                format_g17(l) + " is not positive");
    log_sum += std::log(l);
    const double objective = (log_sum - m_ln2) / static_cast<double>(n);
    if (objective > best) {
      best = objective;
      n_star = n;
    }
    run = objective < previous ? run + 1 : 0;
    previous = objective;
    if (run >= stop_after) break;
  }
  const std::size_t evaluated = n > n_max ? n_max : n;
  return CarlBoundResult{std::exp(best), n_star, m, n_star == n_max, evaluated};
}

}  // namespace

EntropyExpansion entropy_from_eigenvalue_model(const EigenvalueModel& model) {
  const double c1 = model.c1(), a1 = model.alpha1();
  const double c2 = model.c2(), a2 = model.alpha2();
  const double gap = a1 - a2 + 1.0;
  EntropyExpansion e;
  e.A = a1 * std::pow(c1, 1.0 / a1) / kLn2;
  e.a = 1.0 / a1;
  e.B = c2 * std::pow(c1, (1.0 - a2) / a1) / (kLn2 * gap);
  e.b = gap / a1;
  return e;
}

EntropyNumberExpansion entropy_numbers_from_eigenvalue_model(
    const EigenvalueModel& model) {
  const double c1 = model.c1(), a1 = model.alpha1();
  const double c2 = model.c2(), a2 = model.alpha2();
  EntropyNumberExpansion e;
  e.A = c1 * std::pow(a1 / kLn2, a1);
  e.a = a1;
  e.B = c2 / (a1 - a2 + 1.0) * std::pow(a1 / kLn2, a2);
  e.b = a2;
  return e;
}

EntropyExpansion entropy_from_counting_model(const CountingModel& cm) {
  EntropyExpansion e;
  e.A = cm.kappa1() / (cm.beta1() * kLn2);
  e.a = cm.beta1();
  e.B = cm.kappa2() / (cm.beta2() * kLn2);
  e.b = cm.beta2();
  return e;
}

EntropyNumberExpansion entropy_numbers_from_counting_model(
    const CountingModel& cm) {
  const double k1 = cm.kappa1(), b1 = cm.beta1();
  const double base = k1 / (b1 * kLn2);
  const double inv_star = 1.0 / cm.beta_star();
  EntropyNumberExpansion e;
  e.A = std::pow(base, 1.0 / b1);
  e.a = 1.0 / b1;
  e.B = cm.kappa2() / (k1 * cm.beta2()) * std::pow(base, inv_star);
  e.b = inv_star;
  return e;
}

PowerTerm invert_first_order(double kappa1, double beta1) {
  require(kappa1 > 0.0 && beta1 > 0.0, ErrorKind::kPrecondition,
          "invert_first_order: kappa1 and beta1 must be positive");
  return PowerTerm{std::pow(kappa1, 1.0 / beta1), -1.0 / beta1};
}

TwoTermInversion invert_second_order(double kappa1, double kappa2, double beta1,
                                     double beta2) {
  require(kappa1 > 0.0 && beta2 > 0.0 && std::isfinite(kappa2),
          ErrorKind::kPrecondition,
          "invert_second_order: need kappa1 > 0, beta2 > 0, finite kappa2");
  require(beta1 > beta2, ErrorKind::kRegime,
          "invert_second_order: need beta1 > beta2 (beta1=" +
              format_g17(beta1) + ", beta2=" + format_g17(beta2) + ")");
  TwoTermInversion inv;
  inv.lead = invert_first_order(kappa1, beta1);
  inv.second.coefficient =
      std::pow(kappa1, 1.0 / beta1 - beta2 / beta1) * kappa2 / beta1;
  inv.second.exponent = beta2 / beta1 - 1.0 / beta1 - 1.0;
  return inv;
}

CarlBoundResult carl_supremum(std::span<const double> values, std::size_t m,
                              std::size_t n_max) {
  require(values.size() >= n_max, ErrorKind::kPrecondition,
          "carl_supremum: spectrum has " + std::to_string(values.size()) +
              " values, n_max is " + std::to_string(n_max));
  const double alpha_hat = quick_decay_estimate(values, n_max);
  return carl_search([&](std::size_t n) { return values[n - 1]; }, m, n_max,
                     alpha_hat);
}

CarlBoundResult carl_supremum(const SpectrumSample& sample, std::size_t m,
                              std::size_t n_max) {
  return carl_supremum(sample.values(), m, n_max);
}

CarlBoundResult carl_supremum(const EigenvalueModel& model, std::size_t m,
                              std::size_t n_max) {
  return carl_search([&](std::size_t n) { return eval_model(model, n); }, m,
                     n_max, model.alpha1());
}

double carl_asymptotic(const EigenvalueModel& model, std::size_t m) {
  require(model.regime() == Regime::kPowerLaw, ErrorKind::kNotSupported,
          "carl_asymptotic: only pure power-law models are supported");
  require(m >= 1, ErrorKind::kPrecondition, "carl_asymptotic: m must be >= 1");
  const double a1 = model.alpha1();
  return model.c1() * std::pow(a1 / kLn2, a1) *
         std::pow(static_cast<double>(m), -a1);
}

}  // namespace entropy_lab
