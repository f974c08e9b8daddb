#pragma once

#include "conecons/classical_consensus.hpp"
#include "conecons/cone_core.hpp"
#include "conecons/hermitian_cone.hpp"
#include "conecons/trace.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace conecons {

/// Kraus operators V_1..V_m with sum_i V_i^* V_i = I. The same operators
/// define the unital dual Phi(X) = sum V_i^* X V_i and the trace-preserving
/// channel Psi(Z) = sum V_i Z V_i^*.
class KrausMap {
 public:
  static constexpr double kCompletenessTolerance = 1e-10;

  enum class Normalization {
    kStrict,  // reject when sum V^*V deviates from I by more than the tolerance
    kPolar,   // replace V_i by V_i S^{-1/2}, S = sum V^*V
  };

  explicit KrausMap(std::vector<ComplexMatrix> operators,
                    Normalization normalization = Normalization::kStrict);

  Eigen::Index dim() const { return ops_.front().rows(); }
  std::size_t size() const { return ops_.size(); }
  const std::vector<ComplexMatrix>& operators() const { return ops_; }

  /// sum V_i V_i^* = I as well (doubly stochastic analog).
  bool is_unital_channel() const { return unital_channel_; }

  /// Largest entry of |sum V_i^* V_i - I|.
  double completeness_defect() const;

  /// The map "apply this, then `next`" on the dual side:
  /// next.apply_dual(this.apply_dual(X)). Operators are V_i W_j.
  KrausMap then(const KrausMap& next) const;

  /// k-fold composition, k >= 1.
  KrausMap power(unsigned k) const;

  static KrausMap identity(Eigen::Index n);

 private:
  std::vector<ComplexMatrix> ops_;
  bool unital_channel_ = false;
};

/// Composition of maps applied in order: maps[0] first.
KrausMap compose(std::span<const KrausMap> maps_in_order);

/// Phi(X) = sum V_i^* X V_i.
HermitianMatrix apply_dual(const KrausMap& phi, const HermitianMatrix& x);

/// Psi(Z) = sum V_i Z V_i^*.
HermitianMatrix apply_channel(const KrausMap& psi, const HermitianMatrix& z);

/// Positive semidefinite, unit trace (tolerance 1e-12 on both).
class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-12;

  explicit DensityMatrix(HermitianMatrix m);

  /// I / n.
  static DensityMatrix maximally_mixed(Eigen::Index n);

  const HermitianMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.dim(); }

 private:
  HermitianMatrix m_;
};

/// Phi_0, Phi_1, ... as a finite, periodic, or constant list, or produced
/// on demand by a generator.
class KrausSequence {
 public:
  using Generator = std::function<std::optional<KrausMap>(std::size_t)>;

  static KrausSequence finite(std::vector<KrausMap> maps);
  static KrausSequence periodic(std::vector<KrausMap> maps);
  static KrausSequence constant(KrausMap map);
  /// `length` nullopt for an unbounded generator.
  static KrausSequence generated(Eigen::Index n, Generator generator,
                                 std::optional<std::size_t> length = std::nullopt);

  Eigen::Index dim() const { return dim_; }
  std::optional<std::size_t> length() const;
  /// nullopt past the end of a finite sequence.
  std::optional<KrausMap> at(std::size_t t) const;

 private:
  KrausSequence(std::vector<KrausMap> maps, bool cyclic);
  KrausSequence(Eigen::Index n, Generator generator, std::optional<std::size_t> length);

  Eigen::Index dim_ = 0;
  std::vector<KrausMap> maps_;
  bool cyclic_ = false;
  Generator generator_;
  std::optional<std::size_t> generated_length_;
};

struct QuantumRun {
  SimulationTrace trace{LyapunovKind::kHilbert};
  HermitianMatrix final_state = HermitianMatrix::identity(1);
};

/// Iterates X(t+1) = Phi_t(X(t)). The lyapunov column is the Hilbert distance
/// to the identity ray when X0 is positive definite, and the spread
/// lambda_max - lambda_min otherwise. Stops once the spread drops below the
/// tolerance. `limit` fills dist_to_limit with the Frobenius distance.
QuantumRun run_noncommutative_consensus(const KrausSequence& phis, const HermitianMatrix& x0,
                                        const StoppingRule& stop = {},
                                        const std::optional<HermitianMatrix>& limit = std::nullopt);

/// Iterates Z(t+1) = Psi(Z(t)) for a fixed channel. The lyapunov column is
/// the trace norm of Z(t+1) - Z(t), which positive trace-preserving maps
/// cannot increase; the run stops when it drops below the tolerance.
QuantumRun run_channel(const KrausMap& psi, const HermitianMatrix& z0, const StoppingRule& stop = {},
                       const std::optional<HermitianMatrix>& limit = std::nullopt);

struct Lemma1Report {
  double lambda_min_before = 0.0;
  double lambda_min_after = 0.0;
  double lambda_max_before = 0.0;
  double lambda_max_after = 0.0;
  // lambda_min(Phi X) - lambda_min(X); nonnegative when the bound holds.
  double min_margin = 0.0;
  // lambda_max(X) - lambda_max(Phi X); nonnegative when the bound holds.
  double max_margin = 0.0;
  bool holds = true;
};

/// Checks that the spectral interval of Phi(X) nests inside that of X,
/// with 1e-10 slack.
Lemma1Report lemma1_bounds_check(const KrausMap& phi, const HermitianMatrix& x);

/// Sampled lower bound on R(Phi) = sup log(lambda_max/lambda_min)(Phi(P)) over
/// rank-one projectors P. Not a certificate.
struct REstimate {
  ExtendedNonnegReal r_hat;
  // Unit vector x of the maximizing projector x x^*.
  ComplexVector attained_at;
  // Projectors evaluated: the n basis projectors followed by the Haar samples.
  std::size_t evaluated = 0;
  std::size_t singular_images = 0;
};

/// Evaluates the n coordinate projectors e_j e_j^*, then `samples`
/// Haar-random projectors drawn from `seed`. An image with
/// lambda_min <= 1e-12 lambda_max counts as +inf. The projector batch is
/// generated serially and evaluated in parallel; ties resolve to the lowest
/// index, so the result does not depend on the thread count.
REstimate estimate_R(const KrausMap& phi, std::size_t samples, std::uint64_t seed);

namespace reference {
REstimate estimate_R(const KrausMap& phi, std::size_t samples, std::uint64_t seed);
}  // namespace reference

/// (R_hat, 2 R_hat) as a bracket for the projective diameter. The lower end
/// is itself only a sampled lower bound on R.
struct DiameterBracket {
  ExtendedNonnegReal lower;
  ExtendedNonnegReal upper;
  // contraction_ratio(upper); 1 when upper is infinite.
  double contraction_factor = 1.0;
  REstimate estimate;
};

DiameterBracket diameter_bracket(const REstimate& estimate);
DiameterBracket diameter_bracket(const KrausMap& phi, std::size_t samples, std::uint64_t seed);

/// Coordinates of a Hermitian matrix in R^{n^2}: the n diagonal entries,
/// then (Re X_ij, Im X_ij) for i < j in row-major order.
Eigen::VectorXd hermitian_coordinates(const HermitianMatrix& x);
HermitianMatrix from_hermitian_coordinates(const Eigen::VectorXd& c, Eigen::Index n);

/// Real n^2 x n^2 matrix of Psi acting on hermitian_coordinates.
Eigen::MatrixXd channel_transfer_matrix(const KrausMap& psi);

struct FixedPointOptions {
  // Estimate Delta(Phi^N) for N = 1..certify_max_power until one is finite.
  bool certify = false;
  unsigned certify_max_power = 4;
  std::size_t certify_samples = 2000;
  std::uint64_t certify_seed = 0;
};

struct FixedPointResult {
  DensityMatrix state = DensityMatrix::maximally_mixed(1);
  // ||Psi(Z) - Z||_F.
  double residual = 0.0;
  // Numerical dimension of the eigenvalue-1 eigenspace of the transfer matrix.
  std::size_t eigenspace_dimension = 0;
  bool unique = false;
  enum class Method { kInverseIteration, kPowerIteration } method = Method::kInverseIteration;
  // First power N with a finite sampled bracket, when certification was asked.
  std::optional<unsigned> certified_power;
  std::optional<DiameterBracket> bracket;
};

/// Fixed point of Psi in the trace-one PSD matrices, from the eigenvalue-1
/// eigenvector of the transfer matrix (shifted inverse iteration). When that
/// eigenspace is degenerate, falls back to power iteration from I/n and
/// flags non-uniqueness. Throws std::runtime_error if no PSD trace-one fixed
/// point is found with residual <= 1e-10.
FixedPointResult channel_fixed_point(const KrausMap& psi, const FixedPointOptions& options = {});

struct DualityReport {
  std::size_t steps = 0;
  // max_t |tr(Z(t) X0) - tr(Z0 X(t))|.
  double max_pairing_gap = 0.0;
  double final_pairing = 0.0;
  // tr(Z_bar X0) and |final_pairing - limit_pairing| when a fixed point is given.
  std::optional<double> limit_pairing;
  std::optional<double> limit_gap;
  bool pairing_holds = true;
};

/// Runs Z(t) = Psi^t(Z0) and X(t) = Phi^t(X0) side by side for t <= t_max and
/// compares the two pairings (tolerance 1e-10).
DualityReport duality_invariant_check(const KrausMap& psi, const DensityMatrix& z0,
                                      const HermitianMatrix& x0, std::size_t t_max,
                                      const std::optional<HermitianMatrix>& fixed_point = std::nullopt);

/// Cyclic-shift permutations S_i and diagonal weights W_i realizing a
/// row-stochastic matrix as a unital Kraus map on diagonal states.
struct ClassicalEmbedding {
  // perms[i][r] = column holding the 1 in row r of S_i.
  std::vector<std::vector<Eigen::Index>> perms;
  // Diagonals of W_i.
  std::vector<Eigen::VectorXd> weights;

  Eigen::MatrixXd permutation_matrix(std::size_t i) const;
  /// V_i = S_i W_i.
  KrausMap to_kraus() const;
};

/// S_i shifts index j to j + i (mod n); W_i has sqrt(a_{k, k-i}) at
/// position k. The induced dual map sends diag(x) to diag(A x).
ClassicalEmbedding build_classical_embedding(const StochasticMatrix& a);

/// num/den * pi, den > 0, stored reduced.
struct RationalPi {
  std::int64_t num = 0;
  std::int64_t den = 1;
  friend bool operator==(const RationalPi&, const RationalPi&) = default;
};

RationalPi make_rational_pi(std::int64_t num, std::int64_t den);
/// Parses "p/q" or "p".
RationalPi parse_rational_pi(const std::string& text);
std::string to_string(const RationalPi& r);

/// An angle given either in radians or as an exact rational multiple of pi.
class Angle {
 public:
  static Angle radians(double value);
  static Angle pi_multiple(RationalPi value);

  double value() const;
  /// Exact for multiples of pi/2.
  double cos() const;
  double sin() const;

  bool is_exact() const { return std::holds_alternative<RationalPi>(repr_); }
  const RationalPi* exact() const { return std::get_if<RationalPi>(&repr_); }
  /// Decidable only for exact angles.
  std::optional<bool> multiple_of(RationalPi step) const;

  friend bool operator==(const Angle&, const Angle&) = default;

 private:
  explicit Angle(std::variant<double, RationalPi> repr) : repr_(repr) {}
  std::variant<double, RationalPi> repr_;
};

/// Degenerate cases of the spin-rotation map; nullopt when not decidable
/// (angles given in radians).
struct SpinRotationDegeneracy {
  std::optional<bool> alpha_zero_mod_pi;
  std::optional<bool> beta_zero_mod_pi;
  std::optional<bool> double_angles_zero_mod_pi;
  std::optional<bool> generic() const;
};

SpinRotationDegeneracy classify_spin_rotation(const Angle& alpha, const Angle& beta);

/// V0 = sqrt(p) diag(e^{i alpha}, e^{-i alpha}),
/// V1 = sqrt(1-p) [[cos beta, i sin beta], [i sin beta, cos beta]]. p in (0, 1).
KrausMap make_spin_rotation_map(const Angle& alpha, const Angle& beta, double p);
KrausMap make_spin_rotation_map(double alpha, double beta, double p);

/// V0 = [[1, 0], [0, sqrt(1 - gamma^2)]], V1 = [[0, gamma], [0, 0]]. gamma in (0, 1).
KrausMap make_spontaneous_emission_map(double gamma);

/// rho_+ and rho_- of the closed-form spectral contraction of the
/// spontaneous-emission dual on a 2x2 Hermitian X.
struct EmissionShrink {
  double rho_plus = 0.0;
  double rho_minus = 0.0;
};
EmissionShrink spontaneous_emission_shrink(double gamma, const HermitianMatrix& x);

}  // namespace conecons
