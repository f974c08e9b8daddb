#pragma once

#include <Eigen/Core>

#include <complex>
#include <stdexcept>

namespace conecons {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Complex Hermitian matrix. Construction symmetrizes to (M + M^*) / 2, so
/// X == X^* holds exactly afterwards.
class HermitianMatrix {
 public:
  /// Throws std::invalid_argument on a non-square, empty, or non-finite input.
  explicit HermitianMatrix(const ComplexMatrix& m);
  explicit HermitianMatrix(const Eigen::MatrixXd& m);

  static HermitianMatrix identity(Eigen::Index n);
  static HermitianMatrix diagonal(const Eigen::VectorXd& d);
  /// x x^*.
  static HermitianMatrix projector(const ComplexVector& x);

  Eigen::Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  double trace() const { return m_.trace().real(); }
  Eigen::VectorXd diagonal_entries() const { return m_.diagonal().real(); }

  HermitianMatrix operator+(const HermitianMatrix& other) const;
  HermitianMatrix operator-(const HermitianMatrix& other) const;
  HermitianMatrix operator*(double s) const;
  /// X + alpha I.
  HermitianMatrix shifted(double alpha) const;

 private:
  ComplexMatrix m_;
};

/// Largest entrywise modulus of M - M^*.
double hermitian_defect(const ComplexMatrix& m);

/// Real eigenvalues in ascending order.
Eigen::VectorXd eigenvalues(const HermitianMatrix& x);

struct SpectralInterval {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double spread() const { return lambda_max - lambda_min; }
};

SpectralInterval spectral_interval(const HermitianMatrix& x);

/// Raised by the metric functions when an argument is not positive definite.
class NotPositiveDefinite : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// lambda_min > 1e-12 * lambda_max with lambda_max > 0.
bool is_positive_definite(const SpectralInterval& s);
bool is_positive_definite(const HermitianMatrix& x);

/// log(lambda_max / lambda_min) of Y^{-1/2} X Y^{-1/2}.
double hilbert_distance_psd(const HermitianMatrix& x, const HermitianMatrix& y);

/// log lambda_max(X) - log lambda_min(X).
double hilbert_distance_to_identity(const HermitianMatrix& x);

/// || log(Y^{-1/2} X Y^{-1/2}) ||_F = sqrt(sum_i log^2 lambda_i).
double riemannian_distance(const HermitianMatrix& x, const HermitianMatrix& y);

/// sum_i |lambda_i|.
double trace_norm(const HermitianMatrix& x);

/// Re tr(A B); the pairing between states and observables.
double trace_pairing(const HermitianMatrix& a, const HermitianMatrix& b);

}  // namespace conecons
