#pragma once

// Independent reference computations used as test oracles. Nothing here
// calls into the library's numerical kernels.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off < 1e-30 * std::max(1.0, a.squaredNorm())) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Eigenvalues of a Hermitian H = A + iB from the real embedding
/// [[A, -B], [B, A]], whose spectrum is that of H with each value doubled.
inline std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& h) {
  const Eigen::Index n = h.rows();
  Eigen::MatrixXd big(2 * n, 2 * n);
  big.topLeftCorner(n, n) = h.real();
  big.bottomRightCorner(n, n) = h.real();
  big.topRightCorner(n, n) = -h.imag();
  big.bottomLeftCorner(n, n) = h.imag();
  const std::vector<double> all = jacobi_eigenvalues(big);
  std::vector<double> ev;
  for (std::size_t i = 0; i < all.size(); i += 2) ev.push_back(0.5 * (all[i] + all[i + 1]));
  return ev;
}

/// Closed-form eigenvalues of a 2x2 Hermitian matrix, ascending.
inline std::pair<double, double> eigenvalues_2x2(const Eigen::Matrix2cd& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const double mean = 0.5 * (a + d);
  const double r = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(h(0, 1)));
  return {mean - r, mean + r};
}

/// Brute-force cross-ratio supremum with explicit products (no log tricks).
inline double diameter_bruteforce(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  double best = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index q = 0; q < n; ++q) {
          const double num = a(i, j) * a(p, q);
          const double den = a(i, q) * a(p, j);
          if (num == 0.0) continue;
          if (den == 0.0) return INFINITY;
          best = std::max(best, std::log(num / den));
        }
  return best;
}

}  // namespace oracle
