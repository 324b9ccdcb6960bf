#include "entropy_lab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "entropy_lab/error.hpp"
#include "entropy_lab/io_util.hpp"
#include "entropy_lab/linalg.hpp"
#include "entropy_lab/parallel.hpp"

namespace entropy_lab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;

}  // namespace

double omega(int d) {
  require(d >= 1, ErrorKind::kPrecondition, "omega: d must be >= 1");
  const double h = 0.5 * static_cast<double>(d);
  return std::pow(kPi, h) / std::tgamma(h + 1.0);
}

double chi(int r, double measure) {
  require(r >= 1, ErrorKind::kPrecondition, "chi: r must be >= 1");
  require(measure > 0.0, ErrorKind::kPrecondition, "chi: measure must be positive");
  const double rr = static_cast<double>(r);
  return omega(r) * measure / (rr * std::pow(2.0 * kPi, rr) * kLn2);
}

std::string to_string(Quadrature q) {
  return q == Quadrature::kTrapezoid ? "trapezoid" : "gauss-legendre";
}

Quadrature quadrature_from_string(const std::string& name) {
  if (name == "gauss-legendre") return Quadrature::kGaussLegendre;
  if (name == "trapezoid") return Quadrature::kTrapezoid;
  fail(ErrorKind::kSchema, "unknown quadrature '" + name +
                               "' (expected gauss-legendre or trapezoid)");
}

void LPSConfig::validate() const {
  require(sigma > 0.0 && std::isfinite(sigma), ErrorKind::kPrecondition,
          "lps: sigma must be positive");
  require(r > 0.0 && std::isfinite(r), ErrorKind::kPrecondition,
          "lps: r must be positive");
  require(nodes >= 16, ErrorKind::kPrecondition,
          "lps: need at least 16 quadrature nodes, got " + std::to_string(nodes));
}

SpectrumSample lps_eigenvalues(const LPSConfig& cfg, unsigned threads) {
  cfg.validate();
  const QuadratureRule rule = cfg.quadrature == Quadrature::kTrapezoid
                                  ? trapezoid(cfg.nodes)
                                  : gauss_legendre(cfg.nodes);
  const std::size_t n = cfg.nodes;
  std::vector<double> t(n), sw(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = cfg.r * rule.nodes[i];
    sw[i] = std::sqrt(cfg.r * rule.weights[i]);
  }

  SymmetricMatrix a(n);
  const double diagonal = cfg.sigma / kPi;
  parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) {
      a.set(i, i, sw[i] * diagonal * sw[i]);
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = t[i] - t[j];
        const double k = d == 0.0 ? diagonal : std::sin(cfg.sigma * d) / (kPi * d);
        a.set(i, j, sw[i] * k * sw[j]);
      }
    }
  });

  JacobiOptions jacobi;
  jacobi.threads = threads;
  const JacobiResult eig = jacobi_eigenvalues(std::move(a), jacobi);
  std::vector<double> values = eig.eigenvalues;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double raw_min = *lo, raw_max = *hi;
  for (double& v : values) {
    if (v < -kLpsRangeTolerance || v > 1.0 + kLpsRangeTolerance) {
      fail(ErrorKind::kDiscretization,
           "lps: eigenvalue " + format_g17(v) + " lies outside [0, 1] by more "
           "than " + format_g17(kLpsRangeTolerance) +
               "; increase the number of nodes (currently " +
               std::to_string(n) + ")");
    }
    v = std::clamp(v, 0.0, 1.0);
  }
  SpectrumSample::Params params{
      {"sigma", format_g17(cfg.sigma)},
      {"r", format_g17(cfg.r)},
      {"nodes", std::to_string(cfg.nodes)},
      {"quadrature", to_string(cfg.quadrature)},
      {"jacobi_sweeps", std::to_string(eig.sweeps)},
      {"raw_min", format_g17(raw_min)},
      {"raw_max", format_g17(raw_max)},
  };
  return SpectrumSample(std::move(values), SpectrumSource::kNystrom,
                        std::move(params));
}

double lps_counting_rate(const SpectrumSample& spectrum, double r, double gamma) {
  require(gamma > 0.0 && gamma < 1.0, ErrorKind::kPrecondition,
          "lps_counting_rate: gamma must lie in (0, 1)");
  require(r > 0.0, ErrorKind::kPrecondition, "lps_counting_rate: r must be positive");
  return static_cast<double>(empirical_counting(spectrum, gamma)) / r;
}

double lps_counting_rate(const LPSConfig& cfg, double gamma, unsigned threads) {
  require(gamma > 0.0 && gamma < 1.0, ErrorKind::kPrecondition,
          "lps_counting_rate: gamma must lie in (0, 1)");
  return lps_counting_rate(lps_eigenvalues(cfg, threads), cfg.r, gamma);
}

double lps_entropy_rate(double omega_measure, double w_measure, int d,
                        double epsilon) {
  require(epsilon > 0.0 && epsilon <= 1.0, ErrorKind::kPrecondition,
          "lps_entropy_rate: epsilon must lie in (0, 1]");
  require(d >= 1, ErrorKind::kPrecondition, "lps_entropy_rate: d must be >= 1");
  require(omega_measure >= 0.0 && w_measure >= 0.0, ErrorKind::kPrecondition,
          "lps_entropy_rate: measures must be non-negative");
  return 2.0 * omega_measure * w_measure /
         std::pow(2.0 * kPi, static_cast<double>(d)) * std::log2(1.0 / epsilon);
}

BoxDomain::BoxDomain(std::vector<double> sides) : sides_(std::move(sides)) {
  require(!sides_.empty(), ErrorKind::kPrecondition, "box: need at least one side");
  for (double l : sides_)
    require(l > 0.0 && std::isfinite(l), ErrorKind::kPrecondition,
            "box: side lengths must be positive, got " + format_g17(l));
}

DomainGeometry DomainGeometry::of(const BoxDomain& box) {
  const auto& s = box.sides();
  double volume = 1.0;
  for (double l : s) volume *= l;
  double area = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double face = 1.0;
    for (std::size_t j = 0; j < s.size(); ++j)
      if (j != i) face *= s[j];
    area += face;
  }
  return DomainGeometry{box.dim(), volume, 2.0 * area};
}

namespace {

// Eigenvalues are accumulated as ((s_0 n_0^2 + s_1 n_1^2) + ...) in this exact
// order everywhere, so counts and enumerations agree bit for bit.
double lattice_term(std::uint64_t n, double scale) {
  const double x = static_cast<double>(n);
  return x * x * scale;
}

std::vector<double> lattice_scales(const BoxDomain& box) {
  std::vector<double> s;
  for (double l : box.sides()) s.push_back((kPi / l) * (kPi / l));
  return s;
}

std::uint64_t innermost_count(double partial, double scale, double gamma) {
  if (partial > gamma) return 0;
  double k = std::floor(std::sqrt(std::max(0.0, (gamma - partial) / scale)));
  while (partial + (k + 1.0) * (k + 1.0) * scale <= gamma) k += 1.0;
  while (k > 0.0 && partial + k * k * scale > gamma) k -= 1.0;
  return static_cast<std::uint64_t>(k);
}

std::uint64_t count_from(const std::vector<double>& s, std::size_t dim,
                         double partial, double gamma) {
  if (dim + 1 == s.size()) return innermost_count(partial, s[dim], gamma);
  std::uint64_t total = 0;
  for (std::uint64_t n = 1;; ++n) {
    const double p = partial + lattice_term(n, s[dim]);
    if (p > gamma) break;
    total += count_from(s, dim + 1, p, gamma);
  }
  return total;
}

void check_lattice_dims(const BoxDomain& box) {
  require(box.dim() <= 4, ErrorKind::kPrecondition,
          "lattice enumeration supports d <= 4, got d = " +
              std::to_string(box.dim()));
}

}  // namespace

std::uint64_t box_laplacian_counting(const BoxDomain& box, double gamma,
                                     unsigned threads, std::uint64_t budget) {
  require(gamma > 0.0 && std::isfinite(gamma), ErrorKind::kPrecondition,
          "box_laplacian_counting: gamma must be positive");
  check_lattice_dims(box);
  const auto s = lattice_scales(box);

  double outer = 1.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    outer *= std::floor(std::sqrt(gamma / s[i])) + 1.0;
  require(outer <= static_cast<double>(budget), ErrorKind::kResource,
          "box_laplacian_counting: about " + format_g17(outer) +
              " outer lattice iterations exceed the budget of " +
              std::to_string(budget) + "; use a smaller gamma");

  if (s.size() == 1) return innermost_count(0.0, s[0], gamma);

  const auto n0_max =
      static_cast<std::size_t>(std::floor(std::sqrt(gamma / s[0]))) + 1;
  std::vector<std::uint64_t> partial_sums(std::max(1u, threads), 0);
  parallel_chunks(n0_max, threads,
                  [&](std::size_t begin, std::size_t end, std::size_t worker) {
                    std::uint64_t sum = 0;
                    for (std::size_t i = begin; i < end; ++i) {
                      const double p = lattice_term(i + 1, s[0]);
                      if (p > gamma) continue;
                      sum += count_from(s, 1, p, gamma);
                    }
                    partial_sums[worker] = sum;
                  });
  std::uint64_t total = 0;
  for (auto v : partial_sums) total += v;
  return total;
}

std::vector<double> box_laplacian_eigenvalues(const BoxDomain& box,
                                              double gamma_max,
                                              std::uint64_t budget) {
  require(gamma_max > 0.0 && std::isfinite(gamma_max), ErrorKind::kPrecondition,
          "box_laplacian_eigenvalues: gamma_max must be positive");
  check_lattice_dims(box);
  const auto s = lattice_scales(box);
  std::vector<double> out;

  auto walk = [&](auto&& self, std::size_t dim, double partial) -> void {
    for (std::uint64_t n = 1;; ++n) {
      const double p = partial + lattice_term(n, s[dim]);
      if (p > gamma_max) break;
      if (dim + 1 == s.size()) {
        require(out.size() < budget, ErrorKind::kResource,
                "box_laplacian_eigenvalues: more than " +
                    std::to_string(budget) + " eigenvalues below gamma_max");
        out.push_back(p);
      } else {
        self(self, dim + 1, p);
      }
    }
  };
  walk(walk, 0, 0.0);
  std::sort(out.begin(), out.end());
  return out;
}

double sobolev_T_eigenvalue(double mu, int k) {
  require(mu > 0.0, ErrorKind::kPrecondition, "sobolev_T_eigenvalue: mu must be positive");
  require(k >= 1, ErrorKind::kPrecondition, "sobolev_T_eigenvalue: k must be >= 1");
  return 1.0 / std::sqrt(1.0 + std::pow(mu, k));
}

std::string to_string(WeylOrder order) {
  return order == WeylOrder::kTwoTerm ? "two-term" : "one-term";
}

WeylOrder weyl_order_from_string(const std::string& name) {
  if (name == "one-term") return WeylOrder::kOneTerm;
  if (name == "two-term") return WeylOrder::kTwoTerm;
  fail(ErrorKind::kSchema,
       "unknown Weyl order '" + name + "' (expected one-term or two-term)");
}

SobolevConfig::SobolevConfig(int k_, const BoxDomain& box)
    : SobolevConfig(k_, DomainGeometry::of(box)) {}

SobolevConfig::SobolevConfig(int k_, DomainGeometry geometry)
    : k(k_), domain(geometry) {
  require(k >= 1, ErrorKind::kPrecondition, "sobolev: k must be >= 1");
  require(domain.dim >= 1, ErrorKind::kPrecondition, "sobolev: dimension must be >= 1");
  require(domain.volume > 0.0, ErrorKind::kPrecondition,
          "sobolev: domain volume must be positive");
  require(domain.boundary_area >= 0.0, ErrorKind::kPrecondition,
          "sobolev: boundary measure must be non-negative");
}

CountingModel sobolev_counting_model(const SobolevConfig& cfg, WeylOrder order) {
  const int d = cfg.domain.dim;
  const double dd = static_cast<double>(d);
  const double kk = static_cast<double>(cfg.k);
  const double kappa1 = omega(d) * cfg.domain.volume / std::pow(2.0 * kPi, dd);
  if (order == WeylOrder::kOneTerm) return CountingModel::power_law(kappa1, dd / kk);

  require(d >= 3, ErrorKind::kHypothesis,
          "sobolev: the two-term Weyl expansion requires d >= 3 (got d = " +
              std::to_string(d) + ")");
  require(cfg.domain.boundary_area > 0.0, ErrorKind::kPrecondition,
          "sobolev: two-term expansion needs a positive boundary measure");
  const double kappa2 = -omega(d - 1) * cfg.domain.boundary_area /
                        (4.0 * std::pow(2.0 * kPi, dd - 1.0));
  return CountingModel(kappa1, dd / kk, kappa2, (dd - 1.0) / kk);
}

EntropyExpansion sobolev_entropy(const SobolevConfig& cfg, WeylOrder order) {
  const int d = cfg.domain.dim;
  const double kk = static_cast<double>(cfg.k);
  EntropyExpansion e;
  e.A = kk * chi(d, cfg.domain.volume);
  e.a = static_cast<double>(d) / kk;
  if (order == WeylOrder::kOneTerm) {
    e.B = 0.0;
    e.b = e.a;
    return e;
  }
  require(d >= 3, ErrorKind::kHypothesis,
          "sobolev: the two-term Weyl expansion requires d >= 3 (got d = " +
              std::to_string(d) + ")");
  require(cfg.domain.boundary_area > 0.0, ErrorKind::kPrecondition,
          "sobolev: two-term expansion needs a positive boundary measure");
  e.B = -kk * chi(d - 1, cfg.domain.boundary_area) / 4.0;
  e.b = static_cast<double>(d - 1) / kk;
  return e;
}

SpectrumSample sobolev_T_spectrum(const BoxDomain& box, int k, double mu_max,
                                  std::uint64_t budget) {
  std::vector<double> mus = box_laplacian_eigenvalues(box, mu_max, budget);
  std::vector<double> values;
  values.reserve(mus.size());
  for (double mu : mus) values.push_back(sobolev_T_eigenvalue(mu, k));
  std::string sides;
  for (double l : box.sides()) {
    if (!sides.empty()) sides += ' ';
    sides += format_g17(l);
  }
  return SpectrumSample(std::move(values), SpectrumSource::kLattice,
                        {{"sides", sides},
                         {"gamma_max", format_g17(mu_max)},
                         {"k", std::to_string(k)}});
}

}  // namespace entropy_lab
