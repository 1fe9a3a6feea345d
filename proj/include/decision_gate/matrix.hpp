#ifndef DECISION_GATE_MATRIX_HPP
#define DECISION_GATE_MATRIX_HPP

#include <vector>

namespace dgate {

// Eigenvalues below -kPsdTolerance fail validation; Cholesky pivots in
// [-kPsdTolerance, 0] are clamped to zero so rank-deficient (perfectly
// correlated) matrices still factor.
inline constexpr double kPsdTolerance = 1e-10;

// Symmetric positive-semidefinite matrix with unit diagonal and off-diagonal
// magnitudes <= 1. Validated on construction.
class CorrelationMatrix {
 public:
  static CorrelationMatrix identity(int dim);
  static CorrelationMatrix equicorrelated(int dim, double rho);
  // Row-major entries, dim*dim values. Throws std::domain_error when any
  // invariant (symmetry, unit diagonal, bounds, PSD) fails.
  static CorrelationMatrix from_entries(int dim, std::vector<double> entries);

  int dim() const { return dim_; }
  double at(int i, int j) const { return entries_[static_cast<size_t>(i) * dim_ + j]; }
  const std::vector<double>& entries() const { return entries_; }

 private:
  CorrelationMatrix(int dim, std::vector<double> entries)
      : dim_(dim), entries_(std::move(entries)) {}
  int dim_ = 0;
  std::vector<double> entries_;
};

struct LowerTriangular {
  int dim = 0;
  std::vector<double> entries;  // row-major dense, upper part zero
  double at(int i, int j) const { return entries[static_cast<size_t>(i) * dim + j]; }
};

// L such that L * L^T reproduces m. Pivots in [-kPsdTolerance, 0] are clamped
// to zero; pivots below -kPsdTolerance throw std::domain_error.
LowerTriangular cholesky_lower(const CorrelationMatrix& m);

// All eigenvalues in descending order, by cyclic Jacobi rotations.
std::vector<double> symmetric_eigenvalues(const CorrelationMatrix& m);

// Raw variant for arbitrary symmetric input (row-major, dim*dim). Throws
// std::domain_error when the input is not symmetric.
std::vector<double> symmetric_eigenvalues(int dim, const std::vector<double>& entries);

}  // namespace dgate

#endif
