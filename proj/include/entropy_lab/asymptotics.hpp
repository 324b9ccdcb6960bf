#pragma once

// Two-term asymptotic expansions of entropy and entropy numbers, the
// series-inversion lemmas behind them, and the classical geometric-mean
// (Carl) supremum they improve on.

#include <cmath>
#include <cstddef>
#include <span>

#include "entropy_lab/error.hpp"
#include "entropy_lab/sequence_model.hpp"

namespace entropy_lab {

struct EpsilonVariable {};
struct IndexVariable {};

/// A x^-a + B x^-b. The variable tag keeps H(eps) and eps_m apart.
template <class Variable>
struct TwoTermExpansion {
  double A;
  double a;
  double B;
  double b;

  double operator()(double x) const {
    return A * std::pow(x, -a) + B * std::pow(x, -b);
  }
};

/// H(eps; T) as a function of eps.
using EntropyExpansion = TwoTermExpansion<EpsilonVariable>;
/// eps_m(T) as a function of m.
using EntropyNumberExpansion = TwoTermExpansion<IndexVariable>;

/// A x^-a + B x^-b; throws kPrecondition unless x > 0.
template <class Variable>
double eval_expansion(const TwoTermExpansion<Variable>& e, double x) {
  require(x > 0.0, ErrorKind::kPrecondition,
          "eval_expansion: evaluation point must be positive");
  return e(x);
}

EntropyExpansion entropy_from_eigenvalue_model(const EigenvalueModel& model);
EntropyNumberExpansion entropy_numbers_from_eigenvalue_model(
    const EigenvalueModel& model);
EntropyExpansion entropy_from_counting_model(const CountingModel& cm);
EntropyNumberExpansion entropy_numbers_from_counting_model(
    const CountingModel& cm);

struct PowerTerm {
  double coefficient;
  double exponent;  // term is coefficient * n^exponent

  double operator()(double n) const {
    return coefficient * std::pow(n, exponent);
  }
};

struct TwoTermInversion {
  PowerTerm lead;
  PowerTerm second;

  double operator()(double n) const { return lead(n) + second(n); }
};

/// Solves n ~ kappa1 zeta^-beta1 for zeta to first order.
PowerTerm invert_first_order(double kappa1, double beta1);

/// Solves n ~ kappa1 zeta^-beta1 + kappa2 zeta^-beta2 (beta1 > beta2) for
/// zeta to second order. Throws kRegime when beta1 <= beta2.
TwoTermInversion invert_second_order(double kappa1, double kappa2, double beta1,
                                     double beta2);

struct CarlBoundResult {
  double value;
  std::size_t n_star;  // smallest maximizing N
  std::size_t m;
  bool boundary_hit;        // maximizer equals the search limit
  std::size_t evaluated_n;  // last N evaluated (early stop may cut n_max)
};

/// sup over N <= n_max of 2^(-m/N) (prod_{n<=N} lambda_n)^(1/N), evaluated in
/// log space. Stops early once the objective has decreased for
/// 3 * ceil(ln 2 * m / alpha_hat) consecutive N. `values` must hold at least
/// n_max entries (lambda_1 first).
CarlBoundResult carl_supremum(std::span<const double> values, std::size_t m,
                              std::size_t n_max);
CarlBoundResult carl_supremum(const SpectrumSample& sample, std::size_t m,
                              std::size_t n_max);
CarlBoundResult carl_supremum(const EigenvalueModel& model, std::size_t m,
                              std::size_t n_max);

/// Leading term c1 (alpha1 / ln 2)^alpha1 m^-alpha1 of the Carl supremum for
/// a pure power law; throws kNotSupported for two-term models.
double carl_asymptotic(const EigenvalueModel& model, std::size_t m);

}  // namespace entropy_lab
