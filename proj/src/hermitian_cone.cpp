#include "conecons/hermitian_cone.hpp"

#include "conecons/trace.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <string>

namespace conecons {

namespace {

constexpr double kPdThreshold = 1e-12;

ComplexMatrix symmetrize(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw std::invalid_argument("HermitianMatrix: matrix must be square and non-empty (got " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                ")");
  }
  if (!m.allFinite()) throw std::invalid_argument("HermitianMatrix: non-finite entry");
  ComplexMatrix h = (m + m.adjoint()) * 0.5;
  // Exact real diagonal and exact conjugate symmetry.
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    h(i, i) = Complex(h(i, i).real(), 0.0);
    for (Eigen::Index j = i + 1; j < h.cols(); ++j) h(j, i) = std::conj(h(i, j));
  }
  return h;
}

// Y^{-1/2} from the eigendecomposition of Y, rejecting non-PD Y.
ComplexMatrix inverse_sqrt(const HermitianMatrix& y, const char* who, const char* arg) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(y.matrix());
  const Eigen::VectorXd& w = es.eigenvalues();
  const SpectralInterval s{w[0], w[w.size() - 1]};
  if (!is_positive_definite(s)) {
    throw NotPositiveDefinite(std::string(who) + ": argument " + arg +
                              " is not positive definite (lambda_min = " +
                              format_double(s.lambda_min) + ")");
  }
  const Eigen::VectorXd inv_sqrt = w.array().rsqrt().matrix();
  return es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint();
}

void require_pd(const HermitianMatrix& x, const char* who, const char* arg) {
  const SpectralInterval s = spectral_interval(x);
  if (!is_positive_definite(s)) {
    throw NotPositiveDefinite(std::string(who) + ": argument " + arg +
                              " is not positive definite (lambda_min = " +
                              format_double(s.lambda_min) + ")");
  }
}

// Eigenvalues of Y^{-1/2} X Y^{-1/2}.
Eigen::VectorXd relative_eigenvalues(const HermitianMatrix& x, const HermitianMatrix& y,
                                     const char* who) {
  if (x.dim() != y.dim()) {
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  }
  require_pd(x, who, "X");
  const ComplexMatrix r = inverse_sqrt(y, who, "Y");
  return eigenvalues(HermitianMatrix(ComplexMatrix(r * x.matrix() * r)));
}

}  // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) : m_(symmetrize(m)) {}

HermitianMatrix::HermitianMatrix(const Eigen::MatrixXd& m)
    : m_(symmetrize(m.cast<Complex>())) {}

HermitianMatrix HermitianMatrix::identity(Eigen::Index n) {
  return HermitianMatrix(ComplexMatrix(ComplexMatrix::Identity(n, n)));
}

HermitianMatrix HermitianMatrix::diagonal(const Eigen::VectorXd& d) {
  return HermitianMatrix(Eigen::MatrixXd(d.asDiagonal()));
}

HermitianMatrix HermitianMatrix::projector(const ComplexVector& x) {
  return HermitianMatrix(ComplexMatrix(x * x.adjoint()));
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& other) const {
  return HermitianMatrix(ComplexMatrix(m_ + other.m_));
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& other) const {
  return HermitianMatrix(ComplexMatrix(m_ - other.m_));
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
  return HermitianMatrix(ComplexMatrix(m_ * s));
}

HermitianMatrix HermitianMatrix::shifted(double alpha) const {
  ComplexMatrix m = m_;
  m.diagonal().array() += alpha;
  return HermitianMatrix(m);
}

double hermitian_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd eigenvalues(const HermitianMatrix& x) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(x.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalues: Hermitian eigensolver did not converge");
  }
  return es.eigenvalues();
}

SpectralInterval spectral_interval(const HermitianMatrix& x) {
  const Eigen::VectorXd w = eigenvalues(x);
  return {w[0], w[w.size() - 1]};
}

bool is_positive_definite(const SpectralInterval& s) {
  return s.lambda_max > 0.0 && s.lambda_min > kPdThreshold * s.lambda_max;
}

bool is_positive_definite(const HermitianMatrix& x) {
  return is_positive_definite(spectral_interval(x));
}

double hilbert_distance_psd(const HermitianMatrix& x, const HermitianMatrix& y) {
  const Eigen::VectorXd mu = relative_eigenvalues(x, y, "hilbert_distance_psd");
  return std::log(mu[mu.size() - 1]) - std::log(mu[0]);
}

double hilbert_distance_to_identity(const HermitianMatrix& x) {
  const SpectralInterval s = spectral_interval(x);
  if (!is_positive_definite(s)) {
    throw NotPositiveDefinite(
        "hilbert_distance_to_identity: argument X is not positive definite (lambda_min = " +
        format_double(s.lambda_min) + ")");
  }
  return std::log(s.lambda_max) - std::log(s.lambda_min);
}

double riemannian_distance(const HermitianMatrix& x, const HermitianMatrix& y) {
  const Eigen::VectorXd mu = relative_eigenvalues(x, y, "riemannian_distance");
  return std::sqrt(mu.array().log().square().sum());
}

double trace_norm(const HermitianMatrix& x) {
  return eigenvalues(x).cwiseAbs().sum();
}

double trace_pairing(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("trace_pairing: dimension mismatch");
  // tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
  return (a.matrix().array() * b.matrix().array().conjugate()).sum().real();
}

}  // namespace conecons
