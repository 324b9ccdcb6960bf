#pragma once

// Eigenvalue and eigenvalue-counting models of positive self-adjoint compact
// operators, plus finite empirical spectra.

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace entropy_lab {

/// Which admissible region a two-term model lives in.
///   kTwoTerm:  genuinely two-term, strict inequalities on the exponents.
///   kPowerLaw: single power law (equal exponents, vanishing second coefficient).
enum class Regime { kTwoTerm, kPowerLaw };

/// lambda_n = c1 n^-alpha1 + c2 n^-alpha2 (+ lower order).
///
/// Admissible iff alpha1 < alpha2 < alpha1 + 1/2, or alpha1 == alpha2 with
/// c2 == 0. Anything else throws; landing exactly on alpha2 == alpha1 + 1/2
/// (or alpha2 == alpha1 with c2 != 0) throws kRegimeBoundary.
class EigenvalueModel {
 public:
  EigenvalueModel(double c1, double alpha1, double c2, double alpha2);

  /// Pure power law c1 n^-alpha1.
  static EigenvalueModel power_law(double c1, double alpha1) {
    return EigenvalueModel(c1, alpha1, 0.0, alpha1);
  }

  double c1() const noexcept { return c1_; }
  double alpha1() const noexcept { return alpha1_; }
  double c2() const noexcept { return c2_; }
  double alpha2() const noexcept { return alpha2_; }
  Regime regime() const noexcept { return regime_; }

 private:
  double c1_, alpha1_, c2_, alpha2_;
  Regime regime_;
};

/// M_T(gamma) = kappa1 gamma^-beta1 + kappa2 gamma^-beta2 (+ lower order).
///
/// Admissible iff beta1/2 < beta2 < beta1, or beta1 == beta2 with kappa2 == 0.
class CountingModel {
 public:
  CountingModel(double kappa1, double beta1, double kappa2, double beta2);

  static CountingModel power_law(double kappa1, double beta1) {
    return CountingModel(kappa1, beta1, 0.0, beta1);
  }

  double kappa1() const noexcept { return kappa1_; }
  double beta1() const noexcept { return beta1_; }
  double kappa2() const noexcept { return kappa2_; }
  double beta2() const noexcept { return beta2_; }
  Regime regime() const noexcept { return regime_; }

  /// beta* = beta1 / (1 + beta1 - beta2), always derived from the fields.
  double beta_star() const noexcept {
    return beta1_ / (1.0 + beta1_ - beta2_);
  }

 private:
  double kappa1_, beta1_, kappa2_, beta2_;
  Regime regime_;
};

enum class SpectrumSource { kAnalytic, kNystrom, kLattice, kFile };

std::string to_string(SpectrumSource source);
SpectrumSource spectrum_source_from_string(const std::string& name);

/// Values below -kClampTolerance are rejected; values in
/// [-kClampTolerance, 0) are clamped to zero.
inline constexpr double kClampTolerance = 1e-10;

/// Finite non-increasing list of eigenvalues with provenance.
class SpectrumSample {
 public:
  using Params = std::map<std::string, std::string>;

  /// Sorts (stable, non-increasing) and clamps; throws kSpectrumDomain on
  /// values below -kClampTolerance or non-finite values.
  SpectrumSample(std::vector<double> values, SpectrumSource source,
                 Params params = {});

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  /// 1-based access, matching lambda_1 >= lambda_2 >= ...
  double lambda(std::size_t n) const { return values_.at(n - 1); }

  SpectrumSource source() const noexcept { return source_; }
  const Params& params() const noexcept { return params_; }

 private:
  std::vector<double> values_;
  SpectrumSource source_;
  Params params_;
};

/// c1 n^-alpha1 + c2 n^-alpha2, without clamping.
double eval_model(const EigenvalueModel& model, std::size_t n);

/// #{n : lambda_n >= gamma}; inclusive at gamma.
std::size_t empirical_counting(const SpectrumSample& sample, double gamma);

/// Reformulates a counting-function model as the equivalent eigenvalue model.
EigenvalueModel counting_to_eigenvalue_model(const CountingModel& cm);

struct IndexWindow {
  std::size_t first;  // 1-based, inclusive
  std::size_t last;   // 1-based, inclusive
};

struct TailFit {
  EigenvalueModel model;
  double residual_rms;  // RMS of the log-log residuals
  std::size_t points;
};

/// Ordinary least squares of log lambda_n against log n over the window.
/// The returned model is always a pure power law.
TailFit fit_tail_model(const SpectrumSample& sample, IndexWindow window);

// CSV with header `index,lambda`; an optional `<file>.json` sidecar carries
// {"source": ..., "params": {...}}.
SpectrumSample read_spectrum_csv(const std::filesystem::path& path);
void write_spectrum_csv(const SpectrumSample& sample,
                        const std::filesystem::path& path);

}  // namespace entropy_lab
