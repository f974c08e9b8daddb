#include "conecons/random.hpp"

#include <Eigen/QR>

namespace conecons {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x636f6e65u};
  return Rng(seq);
}

Eigen::MatrixXd random_stochastic_matrix(Eigen::Index n, Rng& rng,
                                         const RandomStochasticOptions& options) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double value = 1.0 - unit(rng);  // (0, 1]
      const bool keep = (i == j && options.positive_diagonal) || unit(rng) < options.density;
      a(i, j) = keep ? value : 0.0;
    }
    if (a.row(i).sum() == 0.0) {
      std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
      a(i, pick(rng)) = 1.0;
    }
    a.row(i) /= a.row(i).sum();
  }
  return a;
}

ComplexMatrix random_complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

ComplexVector haar_unit_vector(Eigen::Index n, Rng& rng) {
  ComplexVector v = random_complex_gaussian(n, 1, rng).col(0);
  return v / v.norm();
}

KrausMap random_kraus_map(Eigen::Index n, std::size_t m, Rng& rng) {
  const Eigen::Index rows = static_cast<Eigen::Index>(m) * n;
  const ComplexMatrix g = random_complex_gaussian(rows, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, n);
  std::vector<ComplexMatrix> ops;
  ops.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    ops.push_back(q.middleRows(static_cast<Eigen::Index>(k) * n, n));
  }
  return KrausMap(std::move(ops));
}

HermitianMatrix random_hermitian(Eigen::Index n, Rng& rng) {
  return HermitianMatrix(random_complex_gaussian(n, n, rng));
}

HermitianMatrix random_positive_definite(Eigen::Index n, Rng& rng) {
  const ComplexMatrix g = random_complex_gaussian(n, n, rng);
  std::uniform_real_distribution<double> shift(0.05, 1.0);
  ComplexMatrix m = g * g.adjoint() / static_cast<double>(n);
  m.diagonal().array() += shift(rng);
  return HermitianMatrix(m);
}

DensityMatrix random_density_matrix(Eigen::Index n, Rng& rng) {
  const ComplexMatrix g = random_complex_gaussian(n, n, rng);
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(HermitianMatrix(m));
}

}  // namespace conecons
