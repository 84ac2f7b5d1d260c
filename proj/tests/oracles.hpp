#pragma once

// Test-only oracles, kept independent of the library implementation paths
// they are used to check.

#include <cmath>
#include <vector>

#include "qscar/types.hpp"

namespace oracles {

using qscar::Complex;
using qscar::Matrix;
using qscar::Vector;

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Cyclic two-sided Jacobi eigensolver for Hermitian matrices. Deliberately
/// not based on Eigen's solver; used as the independent diagonalization
/// oracle.
inline std::vector<double> jacobi_eigenvalues(Matrix a, int max_sweeps = 100,
                                              double tol = 1e-13) {
  const long n = a.rows();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (long p = 0; p < n; ++p)
      for (long q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) < tol * std::max(1.0, a.norm())) break;
    for (long p = 0; p < n; ++p) {
      for (long q = p + 1; q < n; ++q) {
        Complex apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        double app = a(p, p).real(), aqq = a(q, q).real();
        // unitary 2x2 rotation zeroing the (p,q) element
        Complex phase = apq / std::abs(apq);
        double theta = 0.5 * std::atan2(2.0 * std::abs(apq), aqq - app);
        double c = std::cos(theta), s = std::sin(theta);
        Vector rowp = a.row(p), rowq = a.row(q);
        a.row(p) = c * rowp.transpose() - s * std::conj(phase) * rowq.transpose();
        a.row(q) = s * phase * rowp.transpose() + c * rowq.transpose();
        Vector colp = a.col(p), colq = a.col(q);
        a.col(p) = c * colp - s * phase * colq;
        a.col(q) = s * std::conj(phase) * colp + c * colq;
      }
    }
  }
  std::vector<double> ev(n);
  for (long i = 0; i < n; ++i) ev[i] = a(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Half-cut entanglement entropy of the (L, n) Dicke state from the
/// hypergeometric weights of its reduced density matrix.
inline double dicke_half_cut_entropy(int L, int n) {
  const int l = L / 2;
  double s = 0.0;
  for (int k = 0; k <= n; ++k) {
    if (k > l || n - k > L - l) continue;
    double p = binom(l, k) * binom(L - l, n - k) / binom(L, n);
    if (p > 1e-15) s -= p * std::log(p);
  }
  return s;
}

}  // namespace oracles
