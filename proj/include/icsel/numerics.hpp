#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "icsel/matrix.hpp"

namespace icsel::numerics {

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public NumericError {
 public:
  NonConvergence(const std::string& what, double residual)
      : NumericError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class NotPositiveDefinite : public NumericError {
 public:
  NotPositiveDefinite(std::size_t pivot, double value);
  std::size_t pivot() const { return pivot_; }
  double value() const { return value_; }

 private:
  std::size_t pivot_;
  double value_;
};

/// Square symmetric matrix. Construction from a general matrix averages the
/// two triangles, so the stored entries are exactly symmetric.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim) : m_(dim, dim) {}
  explicit SymMatrix(Matrix m);
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows)
      : SymMatrix(Matrix(rows)) {}

  static SymMatrix identity(std::size_t dim) {
    return SymMatrix(Matrix::identity(dim));
  }

  std::size_t dim() const { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  /// Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }
  double trace() const;
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // column j pairs with values[j]
  int sweeps = 0;
};

struct JacobiOptions {
  double rel_tol = 1e-12;
  int max_sweeps = 100;
};

/// Cyclic-by-rows Jacobi. Stops once the largest off-diagonal magnitude is
/// at most rel_tol·(1 + max|diag|); throws NonConvergence past max_sweeps.
EigenDecomposition jacobi_eigen(const SymMatrix& m, JacobiOptions opts = {});

/// Lower-triangular L with L·Lᵀ = m. Throws NotPositiveDefinite naming the
/// first non-positive pivot (0-based).
Matrix cholesky(const SymMatrix& m);

/// log det of an SPD matrix from its Cholesky factor.
double log_det_from_cholesky(const Matrix& lower);

}  // namespace icsel::numerics
