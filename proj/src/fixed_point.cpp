#include "conecons/quantum_channel.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace conecons {

namespace {

constexpr double kResidualTarget = 1e-10;
constexpr double kEigenspaceGap = 1e-8;
constexpr double kInverseShift = 1e-11;
constexpr int kInverseIterations = 60;
constexpr std::size_t kPowerIterations = 100000;

double residual_of(const KrausMap& psi, const HermitianMatrix& z) {
  return (apply_channel(psi, z).matrix() - z.matrix()).norm();
}

// Inverse iteration on T - (1 + shift) I from the coordinates of I/n. For a
// simple eigenvalue 1 this converges to the fixed point; for a semisimple
// repeated one it converges to the spectral projection of I/n.
Eigen::VectorXd inverse_iteration(const Eigen::MatrixXd& t, Eigen::Index n) {
  const Eigen::Index dim = t.rows();
  const Eigen::MatrixXd shifted =
      t - (1.0 + kInverseShift) * Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);
  Eigen::VectorXd v = hermitian_coordinates(HermitianMatrix::identity(n));
  v.normalize();
  for (int k = 0; k < kInverseIterations; ++k) {
    v = lu.solve(v);
    v.normalize();
    if ((t * v - v).norm() <= 1e-3 * kResidualTarget) break;
  }
  return v;
}

HermitianMatrix normalize_trace(const HermitianMatrix& z) {
  const double tr = z.trace();
  if (!(std::abs(tr) > 1e-8)) {
    throw std::runtime_error("channel_fixed_point: eigenvector for eigenvalue 1 has zero trace");
  }
  return z * (1.0 / tr);
}

}  // namespace

Eigen::VectorXd hermitian_coordinates(const HermitianMatrix& x) {
  const Eigen::Index n = x.dim();
  Eigen::VectorXd c(n * n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) c[k++] = x(i, i).real();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      c[k++] = x(i, j).real();
      c[k++] = x(i, j).imag();
    }
  }
  return c;
}

HermitianMatrix from_hermitian_coordinates(const Eigen::VectorXd& c, Eigen::Index n) {
  if (c.size() != n * n) {
    throw std::invalid_argument("from_hermitian_coordinates: expected " + std::to_string(n * n) +
                                " coordinates, got " + std::to_string(c.size()));
  }
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = c[k++];
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      m(i, j) = Complex(c[k], c[k + 1]);
      m(j, i) = Complex(c[k], -c[k + 1]);
      k += 2;
    }
  }
  return HermitianMatrix(m);
}

Eigen::MatrixXd channel_transfer_matrix(const KrausMap& psi) {
  const Eigen::Index n = psi.dim();
  const Eigen::Index dim = n * n;
  Eigen::MatrixXd t(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const HermitianMatrix basis = from_hermitian_coordinates(Eigen::VectorXd::Unit(dim, k), n);
    t.col(k) = hermitian_coordinates(apply_channel(psi, basis));
  }
  return t;
}

FixedPointResult channel_fixed_point(const KrausMap& psi, const FixedPointOptions& options) {
  const Eigen::Index n = psi.dim();
  const Eigen::MatrixXd t = channel_transfer_matrix(psi);
  const Eigen::Index dim = t.rows();

  const Eigen::BDCSVD<Eigen::MatrixXd> svd(t - Eigen::MatrixXd::Identity(dim, dim));
  const Eigen::VectorXd& sv = svd.singularValues();
  std::size_t nullity = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv[k] < kEigenspaceGap) ++nullity;
  }
  // A trace-preserving map always has eigenvalue 1.
  if (nullity == 0) nullity = 1;

  FixedPointResult result;
  result.eigenspace_dimension = nullity;
  result.unique = nullity == 1;

  std::optional<HermitianMatrix> z;
  if (result.unique) {
    result.method = FixedPointResult::Method::kInverseIteration;
    z = normalize_trace(from_hermitian_coordinates(inverse_iteration(t, n), n));
  } else {
    result.method = FixedPointResult::Method::kPowerIteration;
    HermitianMatrix current = DensityMatrix::maximally_mixed(n).matrix();
    for (std::size_t k = 0; k < kPowerIterations; ++k) {
      HermitianMatrix next = apply_channel(psi, current);
      const double step = (next.matrix() - current.matrix()).norm();
      current = std::move(next);
      if (step <= 1e-3 * kResidualTarget) break;
    }
    if (residual_of(psi, current) > kResidualTarget) {
      // Peripheral eigenvalues keep the iterates rotating; project instead.
      result.method = FixedPointResult::Method::kInverseIteration;
      current = normalize_trace(from_hermitian_coordinates(inverse_iteration(t, n), n));
    }
    z = normalize_trace(current);
  }

  result.residual = residual_of(psi, *z);
  if (result.residual > kResidualTarget) {
    throw std::runtime_error("channel_fixed_point: residual " + format_double(result.residual) +
                             " exceeds 1e-10");
  }
  try {
    result.state = DensityMatrix(*z);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("channel_fixed_point: fixed point is not a state: ") +
                             e.what());
  }

  if (options.certify) {
    for (unsigned power = 1; power <= options.certify_max_power; ++power) {
      DiameterBracket b =
          diameter_bracket(psi.power(power), options.certify_samples, options.certify_seed);
      const bool finite = b.upper.is_finite();
      result.bracket = std::move(b);
      if (finite) {
        result.certified_power = power;
        break;
      }
    }
  }
  return result;
}

DualityReport duality_invariant_check(const KrausMap& psi, const DensityMatrix& z0,
                                      const HermitianMatrix& x0, std::size_t t_max,
                                      const std::optional<HermitianMatrix>& fixed_point) {
  constexpr double kTolerance = 1e-10;
  if (psi.dim() != z0.dim() || psi.dim() != x0.dim()) {
    throw std::invalid_argument("duality_invariant_check: dimension mismatch");
  }
  DualityReport report;
  HermitianMatrix z = z0.matrix();
  HermitianMatrix x = x0;
  for (std::size_t t = 0;; ++t) {
    const double primal = trace_pairing(z, x0);
    const double dual = trace_pairing(z0.matrix(), x);
    report.max_pairing_gap = std::max(report.max_pairing_gap, std::abs(primal - dual));
    report.final_pairing = primal;
    report.steps = t;
    if (t == t_max) break;
    z = apply_channel(psi, z);
    x = apply_dual(psi, x);
  }
  report.pairing_holds = report.max_pairing_gap <= kTolerance;
  if (fixed_point) {
    report.limit_pairing = trace_pairing(*fixed_point, x0);
    report.limit_gap = std::abs(report.final_pairing - *report.limit_pairing);
  }
  return report;
}

}  // namespace conecons
