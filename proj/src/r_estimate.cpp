#include "conecons/quantum_channel.hpp"
#include "conecons/random.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace conecons {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Basis projectors first, then the Haar draws in stream order.
std::vector<ComplexVector> candidate_vectors(Eigen::Index n, std::size_t samples,
                                             std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("estimate_R: samples must be >= 1");
  std::vector<ComplexVector> xs;
  xs.reserve(static_cast<std::size_t>(n) + samples);
  for (Eigen::Index j = 0; j < n; ++j) xs.push_back(ComplexVector::Unit(n, j));
  Rng rng = make_rng(seed);
  for (std::size_t s = 0; s < samples; ++s) xs.push_back(haar_unit_vector(n, rng));
  return xs;
}

double log_condition_of_image(const KrausMap& phi, const ComplexVector& x) {
  const SpectralInterval s = spectral_interval(apply_dual(phi, HermitianMatrix::projector(x)));
  if (!is_positive_definite(s)) return kInf;
  return std::log(s.lambda_max) - std::log(s.lambda_min);
}

REstimate summarize(const std::vector<ComplexVector>& xs, const std::vector<double>& values) {
  REstimate est;
  est.evaluated = values.size();
  std::size_t best = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] == kInf) ++est.singular_images;
    if (values[k] > values[best]) best = k;
  }
  est.r_hat = values[best] == kInf ? ExtendedNonnegReal::infinity()
                                   : ExtendedNonnegReal(std::max(0.0, values[best]));
  est.attained_at = xs[best];
  return est;
}

}  // namespace

REstimate estimate_R(const KrausMap& phi, std::size_t samples, std::uint64_t seed) {
  const std::vector<ComplexVector> xs = candidate_vectors(phi.dim(), samples, seed);
  std::vector<double> values(xs.size());
  const auto count = static_cast<std::ptrdiff_t>(xs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    values[static_cast<std::size_t>(k)] =
        log_condition_of_image(phi, xs[static_cast<std::size_t>(k)]);
  }
  return summarize(xs, values);
}

namespace reference {

REstimate estimate_R(const KrausMap& phi, std::size_t samples, std::uint64_t seed) {
  const std::vector<ComplexVector> xs = candidate_vectors(phi.dim(), samples, seed);
  std::vector<double> values;
  values.reserve(xs.size());
  for (const auto& x : xs) values.push_back(log_condition_of_image(phi, x));
  return summarize(xs, values);
}

}  // namespace reference

DiameterBracket diameter_bracket(const REstimate& estimate) {
  DiameterBracket b;
  b.lower = estimate.r_hat;
  b.upper = 2.0 * estimate.r_hat;
  b.contraction_factor = contraction_ratio(b.upper);
  b.estimate = estimate;
  return b;
}

DiameterBracket diameter_bracket(const KrausMap& phi, std::size_t samples, std::uint64_t seed) {
  return diameter_bracket(estimate_R(phi, samples, seed));
}

}  // namespace conecons
