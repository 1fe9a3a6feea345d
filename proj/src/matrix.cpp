#include "decision_gate/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace dgate {

namespace {

// Cyclic Jacobi: sweep all upper off-diagonal pairs, rotate each to zero,
// repeat until the off-diagonal norm is negligible. Destroys `a`.
std::vector<double> jacobi(std::vector<double> a, int n) {
  auto idx = [n](int i, int j) { return static_cast<size_t>(i) * n + j; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a[idx(i, j)] * a[idx(i, j)];
    if (off < 1e-28 * n * n) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = a[idx(p, q)];
        if (std::fabs(apq) < 1e-300) continue;
        double app = a[idx(p, p)];
        double aqq = a[idx(q, q)];
        double theta = 0.5 * (aqq - app) / apq;
        double t = std::copysign(1.0, theta) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;

        a[idx(p, p)] = app - t * apq;
        a[idx(q, q)] = aqq + t * apq;
        a[idx(p, q)] = 0.0;
        a[idx(q, p)] = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          double akp = a[idx(k, p)];
          double akq = a[idx(k, q)];
          a[idx(k, p)] = c * akp - s * akq;
          a[idx(p, k)] = a[idx(k, p)];
          a[idx(k, q)] = s * akp + c * akq;
          a[idx(q, k)] = a[idx(k, q)];
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = a[idx(i, i)];
  std::sort(eig.begin(), eig.end(), std::greater<double>());
  return eig;
}

}  // namespace

CorrelationMatrix CorrelationMatrix::identity(int dim) {
  if (dim < 1) throw std::domain_error("CorrelationMatrix: dim must be >= 1");
  std::vector<double> e(static_cast<size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) e[static_cast<size_t>(i) * dim + i] = 1.0;
  return CorrelationMatrix(dim, std::move(e));
}

CorrelationMatrix CorrelationMatrix::equicorrelated(int dim, double rho) {
  if (dim < 1) throw std::domain_error("CorrelationMatrix: dim must be >= 1");
  std::vector<double> e(static_cast<size_t>(dim) * dim, rho);
  for (int i = 0; i < dim; ++i) e[static_cast<size_t>(i) * dim + i] = 1.0;
  return from_entries(dim, std::move(e));
}

CorrelationMatrix CorrelationMatrix::from_entries(int dim, std::vector<double> entries) {
  if (dim < 1) throw std::domain_error("CorrelationMatrix: dim must be >= 1");
  if (entries.size() != static_cast<size_t>(dim) * dim) {
    throw std::domain_error("CorrelationMatrix: entry count does not match dim");
  }
  auto idx = [dim](int i, int j) { return static_cast<size_t>(i) * dim + j; };
  for (int i = 0; i < dim; ++i) {
    if (std::fabs(entries[idx(i, i)] - 1.0) > 1e-12) {
      throw std::domain_error("CorrelationMatrix: diagonal must be 1");
    }
    for (int j = i + 1; j < dim; ++j) {
      if (std::fabs(entries[idx(i, j)] - entries[idx(j, i)]) > 1e-12) {
        throw std::domain_error("CorrelationMatrix: not symmetric");
      }
      if (std::fabs(entries[idx(i, j)]) > 1.0 + 1e-12) {
        throw std::domain_error("CorrelationMatrix: off-diagonal magnitude > 1");
      }
    }
  }
  std::vector<double> eig = jacobi(entries, dim);
  if (eig.back() < -kPsdTolerance) {
    throw std::domain_error("CorrelationMatrix: not positive semidefinite (min eigenvalue " +
                            std::to_string(eig.back()) + ")");
  }
  return CorrelationMatrix(dim, std::move(entries));
}

LowerTriangular cholesky_lower(const CorrelationMatrix& m) {
  const int n = m.dim();
  LowerTriangular L;
  L.dim = n;
  L.entries.assign(static_cast<size_t>(n) * n, 0.0);
  auto idx = [n](int i, int j) { return static_cast<size_t>(i) * n + j; };

  for (int j = 0; j < n; ++j) {
    double d = m.at(j, j);
    for (int k = 0; k < j; ++k) d -= L.entries[idx(j, k)] * L.entries[idx(j, k)];
    if (d < -kPsdTolerance) {
      throw std::domain_error("cholesky_lower: matrix is indefinite (pivot " +
                              std::to_string(d) + ")");
    }
    if (d <= 0.0) {
      // Semidefinite pivot: zero column, consistent with a PSD input.
      continue;
    }
    double ljj = std::sqrt(d);
    L.entries[idx(j, j)] = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = m.at(i, j);
      for (int k = 0; k < j; ++k) s -= L.entries[idx(i, k)] * L.entries[idx(j, k)];
      L.entries[idx(i, j)] = s / ljj;
    }
  }
  return L;
}

std::vector<double> symmetric_eigenvalues(const CorrelationMatrix& m) {
  return jacobi(m.entries(), m.dim());
}

std::vector<double> symmetric_eigenvalues(int dim, const std::vector<double>& entries) {
  if (dim < 1 || entries.size() != static_cast<size_t>(dim) * dim) {
    throw std::domain_error("symmetric_eigenvalues: bad dimensions");
  }
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      if (std::fabs(entries[static_cast<size_t>(i) * dim + j] -
                    entries[static_cast<size_t>(j) * dim + i]) > 1e-10) {
        throw std::domain_error("symmetric_eigenvalues: input is not symmetric");
      }
    }
  }
  return jacobi(entries, dim);
}

}  // namespace dgate
