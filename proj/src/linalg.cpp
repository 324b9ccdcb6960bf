#include "entropy_lab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "entropy_lab/error.hpp"
#include "entropy_lab/io_util.hpp"
#include "entropy_lab/parallel.hpp"

namespace entropy_lab {
namespace {

double off_diagonal_norm(const SymmetricMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double* r = a.row(i);
    for (std::size_t j = i + 1; j < a.size(); ++j) s += r[j] * r[j];
  }
  return std::sqrt(2.0 * s);
}

double frobenius_norm(const SymmetricMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double* r = a.row(i);
    for (std::size_t j = 0; j < a.size(); ++j) s += r[j] * r[j];
  }
  return std::sqrt(s);
}

struct Rotation {
  std::size_t p, q;
  double s, tau;
  double new_pp, new_qq;
};

// A <- J^T A J for a set of disjoint plane rotations: rows first, then
// columns, then the 2x2 blocks are set to their exact rotated values.
void apply_round(SymmetricMatrix& a, const std::vector<Rotation>& rotations,
                 unsigned threads) {
  const std::size_t n = a.size();
  parallel_chunks(rotations.size(), threads,
                  [&](std::size_t begin, std::size_t end, std::size_t) {
                    for (std::size_t k = begin; k < end; ++k) {
                      const Rotation& r = rotations[k];
                      double* rp = a.row(r.p);
                      double* rq = a.row(r.q);
                      for (std::size_t j = 0; j < n; ++j) {
                        const double x = rp[j], y = rq[j];
                        rp[j] = x - r.s * (y + r.tau * x);
                        rq[j] = y + r.s * (x - r.tau * y);
                      }
                    }
                  });
  parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) {
      double* row = a.row(i);
      for (const Rotation& r : rotations) {
        const double x = row[r.p], y = row[r.q];
        row[r.p] = x - r.s * (y + r.tau * x);
        row[r.q] = y + r.s * (x - r.tau * y);
      }
    }
  });
  for (const Rotation& r : rotations) {
    a.row(r.p)[r.p] = r.new_pp;
    a.row(r.q)[r.q] = r.new_qq;
    a.set(r.p, r.q, 0.0);
  }
}

}  // namespace

JacobiResult jacobi_eigenvalues(SymmetricMatrix a, const JacobiOptions& opts) {
  const std::size_t n = a.size();
  JacobiResult out{{}, 0, 0.0};
  const double norm = frobenius_norm(a);
  if (n <= 1 || norm == 0.0) {
    for (std::size_t i = 0; i < n; ++i) out.eigenvalues.push_back(a(i, i));
    return out;
  }

  // Round-robin (tournament) ordering: every round rotates n/2 disjoint
  // pairs, so one pass over the rows and one over the columns apply all of
  // them. Each sweep visits every pair exactly once.
  const std::size_t m = n + (n % 2);
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::vector<Rotation> rotations;
  rotations.reserve(m / 2);
  // Entries below this can be left alone: even all of them together keep the
  // off-diagonal norm under half the tolerance.
  const double negligible = opts.tolerance * norm / (2.0 * static_cast<double>(n));

  double off = off_diagonal_norm(a) / norm;
  while (off > opts.tolerance) {
    if (out.sweeps == opts.max_sweeps) {
      std::ostringstream ss;
      ss << "jacobi: no convergence after " << out.sweeps
         << " sweeps (relative off-diagonal norm " << format_g17(off)
         << ", tolerance " << format_g17(opts.tolerance) << ")";
      fail(ErrorKind::kNumeric, ss.str());
    }
    ++out.sweeps;
    for (std::size_t round = 0; round + 1 < m; ++round) {
      rotations.clear();
      for (std::size_t i = 0; i < m / 2; ++i) {
        std::size_t p = order[i], q = order[m - 1 - i];
        if (p >= n || q >= n) continue;
        if (p > q) std::swap(p, q);
        const double apq = a(p, q);
        if (std::abs(apq) < negligible) continue;
        const double app = a(p, p), aqq = a(q, q);
        // Rotations that cannot change either diagonal entry are dropped.
        const double g = 100.0 * std::abs(apq);
        if (out.sweeps > 4 && std::abs(app) + g == std::abs(app) &&
            std::abs(aqq) + g == std::abs(aqq)) {
          a.set(p, q, 0.0);
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        rotations.push_back({p, q, s, s / (1.0 + c), app - t * apq, aqq + t * apq});
      }
      if (!rotations.empty()) apply_round(a, rotations, opts.threads);
      std::rotate(order.begin() + 1, order.end() - 1, order.end());
    }
    off = off_diagonal_norm(a) / norm;
  }
  out.off_norm = off;
  for (std::size_t i = 0; i < n; ++i) out.eigenvalues.push_back(a(i, i));
  return out;
}

QuadratureRule gauss_legendre(std::size_t n) {
  require(n >= 1, ErrorKind::kPrecondition, "gauss_legendre: n must be >= 1");
  QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double kk = static_cast<double>(k);
      const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule trapezoid(std::size_t n) {
  require(n >= 2, ErrorKind::kPrecondition, "trapezoid: n must be >= 2");
  QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
  const double h = 2.0 / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = -1.0 + h * static_cast<double>(i);
    rule.weights[i] = (i == 0 || i == n - 1) ? 0.5 * h : h;
  }
  rule.nodes[n - 1] = 1.0;
  return rule;
}

}  // namespace entropy_lab
