#include "conecons/classical_consensus.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace conecons {

namespace {

void validate_nonnegative_map(const Eigen::MatrixXd& a) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw std::invalid_argument("projective_diameter: matrix must be square and non-empty");
  }
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    bool any_positive = false;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double v = a(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument("projective_diameter: entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") is not a finite nonnegative number");
      }
      any_positive = any_positive || v > 0.0;
    }
    if (!any_positive) {
      throw std::invalid_argument("projective_diameter: row " + std::to_string(i) +
                                  " is identically zero");
    }
  }
}

// Entrywise log; zeros map to -inf and are tested for explicitly.
Eigen::MatrixXd log_entries(const Eigen::MatrixXd& a) {
  return a.unaryExpr([](double v) {
    return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
  });
}

// Contribution of the quadruples sharing rows (i, p). Grouping the log terms
// as (L_ij - L_iq) + (L_pq - L_pj) makes the i == p and j == q cases
// cancel to exactly zero.
struct RowPairResult {
  double best = 0.0;
  bool infinite = false;
};

RowPairResult scan_row_pair(const Eigen::MatrixXd& a, const Eigen::MatrixXd& log_a,
                            Eigen::Index i, Eigen::Index p) {
  RowPairResult r;
  const Eigen::Index n = a.cols();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (a(i, j) <= 0.0) continue;
    for (Eigen::Index q = 0; q < n; ++q) {
      if (a(p, q) <= 0.0) continue;
      if (a(i, q) <= 0.0 || a(p, j) <= 0.0) {
        r.infinite = true;
        return r;
      }
      const double v = (log_a(i, j) - log_a(i, q)) + (log_a(p, q) - log_a(p, j));
      if (v > r.best) r.best = v;
    }
  }
  return r;
}

}  // namespace

ExtendedNonnegReal projective_diameter(const Eigen::MatrixXd& a) {
  validate_nonnegative_map(a);
  const Eigen::MatrixXd log_a = log_entries(a);
  const Eigen::Index n = a.rows();

  double best = 0.0;
  bool infinite = false;
#pragma omp parallel for collapse(2) reduction(max : best) reduction(|| : infinite) \
    schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index p = 0; p < n; ++p) {
      const RowPairResult r = scan_row_pair(a, log_a, i, p);
      infinite = infinite || r.infinite;
      if (r.best > best) best = r.best;
    }
  }
  if (infinite) return ExtendedNonnegReal::infinity();
  return ExtendedNonnegReal(best);
}

namespace reference {

ExtendedNonnegReal projective_diameter(const Eigen::MatrixXd& a) {
  validate_nonnegative_map(a);
  const Eigen::Index n = a.rows();
  double best = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index p = 0; p < n; ++p) {
        for (Eigen::Index q = 0; q < n; ++q) {
          if (a(i, j) <= 0.0 || a(p, q) <= 0.0) continue;
          if (a(i, q) <= 0.0 || a(p, j) <= 0.0) return ExtendedNonnegReal::infinity();
          const double v =
              (std::log(a(i, j)) - std::log(a(i, q))) + (std::log(a(p, q)) - std::log(a(p, j)));
          if (v > best) best = v;
        }
      }
    }
  }
  return ExtendedNonnegReal(best);
}

}  // namespace reference

}  // namespace conecons
