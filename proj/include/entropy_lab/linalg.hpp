#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace entropy_lab {

/// Dense symmetric matrix, full row-major storage.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * n_ + j];
  }
  /// Writes both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * n_ + j] = v;
    data_[j * n_ + i] = v;
  }
  double* row(std::size_t i) { return data_.data() + i * n_; }
  const double* row(std::size_t i) const { return data_.data() + i * n_; }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

struct JacobiOptions {
  double tolerance = 1e-12;  // off-diagonal Frobenius norm relative to ||A||_F
  int max_sweeps = 30;
  unsigned threads = 1;  // results do not depend on this
};

struct JacobiResult {
  std::vector<double> eigenvalues;  // in diagonal order, unsorted
  int sweeps;
  double off_norm;  // relative, at exit
};

/// Cyclic Jacobi diagonalization (eigenvalues only), round-robin pair order. Throws kNumeric with the
/// sweep count and residual off-diagonal norm when it fails to converge.
JacobiResult jacobi_eigenvalues(SymmetricMatrix a, const JacobiOptions& opts = {});

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(std::size_t n);

/// n-point composite trapezoid rule on [-1, 1] (n >= 2).
QuadratureRule trapezoid(std::size_t n);

}  // namespace entropy_lab
