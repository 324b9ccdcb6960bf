#pragma once

// Operator front-ends: the time-frequency limiting (Landau-Pollak-Slepian)
// operator on an interval, Dirichlet Laplacian spectra of boxes, the Sobolev
// operator (Id + (-Laplacian)^k)^(-1/2), and the geometry constants that
// enter their Weyl laws and entropy rates.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "entropy_lab/asymptotics.hpp"
#include "entropy_lab/sequence_model.hpp"

namespace entropy_lab {

/// Volume of the unit ball in R^d.
double omega(int d);

/// omega_r * measure / (r (2 pi)^r ln 2): the r-dimensional content that
/// multiplies the smoothness order in Sobolev entropy expansions.
double chi(int r, double measure);

enum class Quadrature { kGaussLegendre, kTrapezoid };

std::string to_string(Quadrature q);
Quadrature quadrature_from_string(const std::string& name);

struct LPSConfig {
  double sigma = 1.0;  // band [-sigma, sigma]
  double r = 1.0;      // time interval [-r, r]
  std::size_t nodes = 600;
  Quadrature quadrature = Quadrature::kGaussLegendre;

  void validate() const;
};

/// Eigenvalues within this distance outside [0, 1] are clamped; beyond it the
/// discretization is rejected.
inline constexpr double kLpsRangeTolerance = 1e-8;

/// Nystrom discretization of the sinc kernel sin(sigma(s-t))/(pi(s-t)) on
/// [-r, r], symmetrized with the quadrature weights and diagonalized by
/// cyclic Jacobi. Kernel rows are assembled on `threads` workers.
SpectrumSample lps_eigenvalues(const LPSConfig& cfg, unsigned threads = 1);

/// M_r(gamma) / r for an already computed spectrum.
double lps_counting_rate(const SpectrumSample& spectrum, double r, double gamma);
double lps_counting_rate(const LPSConfig& cfg, double gamma, unsigned threads = 1);

/// 2 |Omega| |W| / (2 pi)^d log2(1/eps), bits per unit r^d.
double lps_entropy_rate(double omega_measure, double w_measure, int d,
                        double epsilon);

/// Axis-parallel box (0, L_1) x ... x (0, L_d).
class BoxDomain {
 public:
  explicit BoxDomain(std::vector<double> sides);

  const std::vector<double>& sides() const noexcept { return sides_; }
  int dim() const noexcept { return static_cast<int>(sides_.size()); }

 private:
  std::vector<double> sides_;
};

struct DomainGeometry {
  int dim;
  double volume;         // d-dimensional measure
  double boundary_area;  // (d-1)-dimensional measure of the boundary

  static DomainGeometry of(const BoxDomain& box);
};

inline constexpr std::uint64_t kDefaultLatticeBudget = 200'000'000;

/// #{n in (N*)^d : sum (pi n_i / L_i)^2 <= gamma}, innermost index counted in
/// closed form; the outermost index is sharded over `threads` workers.
std::uint64_t box_laplacian_counting(const BoxDomain& box, double gamma,
                                     unsigned threads = 1,
                                     std::uint64_t budget = kDefaultLatticeBudget);

/// All Dirichlet eigenvalues <= gamma_max, ascending. Throws kResource when
/// more than `budget` eigenvalues would be produced.
std::vector<double> box_laplacian_eigenvalues(
    const BoxDomain& box, double gamma_max,
    std::uint64_t budget = kDefaultLatticeBudget);

/// (1 + mu^k)^(-1/2): eigenvalue of the Sobolev operator over a Laplacian
/// eigenvalue mu.
double sobolev_T_eigenvalue(double mu, int k);

enum class WeylOrder { kOneTerm, kTwoTerm };

std::string to_string(WeylOrder order);
WeylOrder weyl_order_from_string(const std::string& name);

struct SobolevConfig {
  int k;
  DomainGeometry domain;

  SobolevConfig(int k, const BoxDomain& box);
  SobolevConfig(int k, DomainGeometry geometry);
};

/// Counting model of the Sobolev operator from the one- or two-term Weyl law.
/// The two-term form needs d >= 3 (kHypothesis otherwise).
CountingModel sobolev_counting_model(const SobolevConfig& cfg, WeylOrder order);

/// k chi_d(Omega) eps^(-d/k) [ - k chi_{d-1}(boundary)/4 eps^(-(d-1)/k) ].
EntropyExpansion sobolev_entropy(const SobolevConfig& cfg, WeylOrder order);

/// Sobolev operator eigenvalues over all box eigenvalues mu <= mu_max.
SpectrumSample sobolev_T_spectrum(const BoxDomain& box, int k, double mu_max,
                                  std::uint64_t budget = kDefaultLatticeBudget);

}  // namespace entropy_lab
