#include "conecons/quantum_channel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace conecons {

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

ComplexMatrix gram_sum(const std::vector<ComplexMatrix>& ops) {
  ComplexMatrix s = ComplexMatrix::Zero(ops.front().cols(), ops.front().cols());
  for (const auto& v : ops) s.noalias() += v.adjoint() * v;
  return s;
}

ComplexMatrix outer_sum(const std::vector<ComplexMatrix>& ops) {
  ComplexMatrix s = ComplexMatrix::Zero(ops.front().rows(), ops.front().rows());
  for (const auto& v : ops) s.noalias() += v * v.adjoint();
  return s;
}

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* who) {
  if (a != b) {
    throw std::invalid_argument(std::string(who) + ": dimension mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

KrausMap::KrausMap(std::vector<ComplexMatrix> operators, Normalization normalization)
    : ops_(std::move(operators)) {
  if (ops_.empty()) throw std::invalid_argument("KrausMap: at least one operator is required");
  const Eigen::Index n = ops_.front().rows();
  if (n == 0) throw std::invalid_argument("KrausMap: operators must be non-empty");
  for (std::size_t k = 0; k < ops_.size(); ++k) {
    if (ops_[k].rows() != n || ops_[k].cols() != n) {
      throw std::invalid_argument("KrausMap: operator " + std::to_string(k) + " is " +
                                  std::to_string(ops_[k].rows()) + "x" +
                                  std::to_string(ops_[k].cols()) + ", expected " +
                                  std::to_string(n) + "x" + std::to_string(n));
    }
    if (!ops_[k].allFinite()) {
      throw std::invalid_argument("KrausMap: operator " + std::to_string(k) +
                                  " has a non-finite entry");
    }
  }

  if (normalization == Normalization::kPolar) {
    const ComplexMatrix s = gram_sum(ops_);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s);
    if (es.eigenvalues()[0] <= 0.0) {
      throw std::invalid_argument("KrausMap: sum V^*V is singular; cannot renormalize");
    }
    const ComplexMatrix inv_sqrt = es.eigenvectors() *
                                   es.eigenvalues().array().rsqrt().matrix().asDiagonal() *
                                   es.eigenvectors().adjoint();
    for (auto& v : ops_) v = v * inv_sqrt;
  }

  const double defect = completeness_defect();
  if (defect > kCompletenessTolerance) {
    throw std::invalid_argument("KrausMap: sum_i V_i^* V_i deviates from I by " +
                                format_double(defect) + " (tolerance 1e-10)");
  }
  unital_channel_ =
      max_abs(outer_sum(ops_) - ComplexMatrix::Identity(n, n)) <= kCompletenessTolerance;
}

double KrausMap::completeness_defect() const {
  return max_abs(gram_sum(ops_) - ComplexMatrix::Identity(dim(), dim()));
}

KrausMap KrausMap::then(const KrausMap& next) const {
  require_same_dim(dim(), next.dim(), "KrausMap::then");
  // next(this(X)) = sum_j W_j^* (sum_i V_i^* X V_i) W_j = sum (V_i W_j)^* X (V_i W_j).
  std::vector<ComplexMatrix> ops;
  ops.reserve(ops_.size() * next.ops_.size());
  for (const auto& v : ops_) {
    for (const auto& w : next.ops_) ops.push_back(v * w);
  }
  return KrausMap(std::move(ops));
}

KrausMap KrausMap::power(unsigned k) const {
  if (k == 0) throw std::invalid_argument("KrausMap::power: k must be >= 1");
  KrausMap result = *this;
  for (unsigned i = 1; i < k; ++i) result = result.then(*this);
  return result;
}

KrausMap KrausMap::identity(Eigen::Index n) {
  return KrausMap({ComplexMatrix::Identity(n, n)});
}

KrausMap compose(std::span<const KrausMap> maps_in_order) {
  if (maps_in_order.empty()) throw std::invalid_argument("compose: no maps");
  KrausMap result = maps_in_order.front();
  for (std::size_t k = 1; k < maps_in_order.size(); ++k) result = result.then(maps_in_order[k]);
  return result;
}

HermitianMatrix apply_dual(const KrausMap& phi, const HermitianMatrix& x) {
  require_same_dim(phi.dim(), x.dim(), "apply_dual");
  ComplexMatrix out = ComplexMatrix::Zero(x.dim(), x.dim());
  for (const auto& v : phi.operators()) out.noalias() += v.adjoint() * x.matrix() * v;
  return HermitianMatrix(out);
}

HermitianMatrix apply_channel(const KrausMap& psi, const HermitianMatrix& z) {
  require_same_dim(psi.dim(), z.dim(), "apply_channel");
  ComplexMatrix out = ComplexMatrix::Zero(z.dim(), z.dim());
  for (const auto& v : psi.operators()) out.noalias() += v * z.matrix() * v.adjoint();
  return HermitianMatrix(out);
}

DensityMatrix::DensityMatrix(HermitianMatrix m) : m_(std::move(m)) {
  const double tr = m_.trace();
  if (std::abs(tr - 1.0) > kTolerance) {
    throw std::invalid_argument("DensityMatrix: trace is " + format_double(tr) +
                                " (expected 1 within 1e-12)");
  }
  const double lmin = spectral_interval(m_).lambda_min;
  if (lmin < -kTolerance) {
    throw std::invalid_argument("DensityMatrix: not positive semidefinite (lambda_min = " +
                                format_double(lmin) + ")");
  }
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index n) {
  return DensityMatrix(HermitianMatrix::identity(n) * (1.0 / static_cast<double>(n)));
}

KrausSequence::KrausSequence(std::vector<KrausMap> maps, bool cyclic)
    : maps_(std::move(maps)), cyclic_(cyclic) {
  if (maps_.empty()) throw std::invalid_argument("KrausSequence: empty list");
  dim_ = maps_.front().dim();
  for (std::size_t k = 1; k < maps_.size(); ++k) {
    if (maps_[k].dim() != dim_) {
      throw std::invalid_argument("KrausSequence: map " + std::to_string(k) +
                                  " has a different dimension");
    }
  }
}

KrausSequence::KrausSequence(Eigen::Index n, Generator generator,
                             std::optional<std::size_t> length)
    : dim_(n), generator_(std::move(generator)), generated_length_(length) {
  if (n < 1) throw std::invalid_argument("KrausSequence: dimension must be >= 1");
  if (!generator_) throw std::invalid_argument("KrausSequence: empty generator");
}

KrausSequence KrausSequence::finite(std::vector<KrausMap> maps) {
  return KrausSequence(std::move(maps), false);
}

KrausSequence KrausSequence::periodic(std::vector<KrausMap> maps) {
  return KrausSequence(std::move(maps), true);
}

KrausSequence KrausSequence::constant(KrausMap map) {
  std::vector<KrausMap> maps;
  maps.push_back(std::move(map));
  return KrausSequence(std::move(maps), true);
}

KrausSequence KrausSequence::generated(Eigen::Index n, Generator generator,
                                       std::optional<std::size_t> length) {
  return KrausSequence(n, std::move(generator), length);
}

std::optional<std::size_t> KrausSequence::length() const {
  if (generator_) return generated_length_;
  if (cyclic_) return std::nullopt;
  return maps_.size();
}

std::optional<KrausMap> KrausSequence::at(std::size_t t) const {
  if (generator_) {
    if (generated_length_ && t >= *generated_length_) return std::nullopt;
    auto map = generator_(t);
    if (map && map->dim() != dim_) {
      throw std::invalid_argument("KrausSequence: generated map has dimension " +
                                  std::to_string(map->dim()) + ", expected " +
                                  std::to_string(dim_));
    }
    return map;
  }
  if (cyclic_) return maps_[t % maps_.size()];
  if (t < maps_.size()) return maps_[t];
  return std::nullopt;
}

QuantumRun run_noncommutative_consensus(const KrausSequence& phis, const HermitianMatrix& x0,
                                        const StoppingRule& stop,
                                        const std::optional<HermitianMatrix>& limit) {
  require_same_dim(phis.dim(), x0.dim(), "run_noncommutative_consensus");
  if (limit) require_same_dim(phis.dim(), limit->dim(), "run_noncommutative_consensus (limit)");

  const bool hilbert = is_positive_definite(x0);
  QuantumRun run;
  run.trace = SimulationTrace(hilbert ? LyapunovKind::kHilbert : LyapunovKind::kSpectralSpread);
  HermitianMatrix x = x0;
  for (std::size_t t = 0;; ++t) {
    const SpectralInterval s = spectral_interval(x);
    TraceRecord rec;
    rec.t = t;
    rec.lambda_min = s.lambda_min;
    rec.lambda_max = s.lambda_max;
    rec.lyapunov = hilbert ? std::log(s.lambda_max) - std::log(s.lambda_min) : s.spread();
    if (limit) rec.dist_to_limit = (x.matrix() - limit->matrix()).norm();
    const double scale = hilbert ? 1.0 : std::max(std::abs(s.lambda_min), std::abs(s.lambda_max));
    run.trace.append(rec, scale);

    if (s.spread() < stop.tolerance) {
      run.trace.set_status(TerminalStatus::kConverged);
      break;
    }
    if (t >= stop.max_iterations) {
      run.trace.set_status(TerminalStatus::kMaxIterations);
      break;
    }
    const std::optional<KrausMap> phi = phis.at(t);
    if (!phi) {
      run.trace.set_status(TerminalStatus::kIncompleteSequence);
      break;
    }
    x = apply_dual(*phi, x);
  }
  run.final_state = std::move(x);
  return run;
}

QuantumRun run_channel(const KrausMap& psi, const HermitianMatrix& z0, const StoppingRule& stop,
                       const std::optional<HermitianMatrix>& limit) {
  require_same_dim(psi.dim(), z0.dim(), "run_channel");
  if (limit) require_same_dim(psi.dim(), limit->dim(), "run_channel (limit)");

  QuantumRun run;
  run.trace = SimulationTrace(LyapunovKind::kIncrementNorm);
  HermitianMatrix z = z0;
  for (std::size_t t = 0;; ++t) {
    HermitianMatrix next = apply_channel(psi, z);
    const SpectralInterval s = spectral_interval(z);
    TraceRecord rec;
    rec.t = t;
    rec.lambda_min = s.lambda_min;
    rec.lambda_max = s.lambda_max;
    rec.lyapunov = trace_norm(next - z);
    if (limit) rec.dist_to_limit = (z.matrix() - limit->matrix()).norm();
    run.trace.append(rec, trace_norm(z));

    if (rec.lyapunov < stop.tolerance) {
      run.trace.set_status(TerminalStatus::kConverged);
      break;
    }
    if (t >= stop.max_iterations) {
      run.trace.set_status(TerminalStatus::kMaxIterations);
      break;
    }
    z = std::move(next);
  }
  run.final_state = std::move(z);
  return run;
}

Lemma1Report lemma1_bounds_check(const KrausMap& phi, const HermitianMatrix& x) {
  constexpr double kSlack = 1e-10;
  const SpectralInterval before = spectral_interval(x);
  const SpectralInterval after = spectral_interval(apply_dual(phi, x));
  Lemma1Report r;
  r.lambda_min_before = before.lambda_min;
  r.lambda_max_before = before.lambda_max;
  r.lambda_min_after = after.lambda_min;
  r.lambda_max_after = after.lambda_max;
  r.min_margin = after.lambda_min - before.lambda_min;
  r.max_margin = before.lambda_max - after.lambda_max;
  r.holds = r.min_margin >= -kSlack && r.max_margin >= -kSlack;
  return r;
}

Eigen::MatrixXd ClassicalEmbedding::permutation_matrix(std::size_t i) const {
  const auto n = static_cast<Eigen::Index>(perms[i].size());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) s(r, perms[i][static_cast<std::size_t>(r)]) = 1.0;
  return s;
}

KrausMap ClassicalEmbedding::to_kraus() const {
  std::vector<ComplexMatrix> ops;
  ops.reserve(perms.size());
  for (std::size_t i = 0; i < perms.size(); ++i) {
    const Eigen::MatrixXd v = permutation_matrix(i) * weights[i].asDiagonal();
    ops.push_back(v.cast<Complex>());
  }
  return KrausMap(std::move(ops));
}

ClassicalEmbedding build_classical_embedding(const StochasticMatrix& a) {
  const Eigen::Index n = a.dim();
  ClassicalEmbedding e;
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    Eigen::VectorXd w(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      // Row k of S_i has its 1 in column k + i: x_jj lands at (j + i, j + i).
      perm[static_cast<std::size_t>(k)] = (k + i) % n;
      w[k] = std::sqrt(a(k, ((k - i) % n + n) % n));
    }
    e.perms.push_back(std::move(perm));
    e.weights.push_back(std::move(w));
  }
  return e;
}

RationalPi make_rational_pi(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("rational multiple of pi: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

RationalPi parse_rational_pi(const std::string& text) {
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const std::int64_t num = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument("trailing characters");
      return make_rational_pi(num, 1);
    }
    const std::string a = text.substr(0, slash);
    const std::string b = text.substr(slash + 1);
    const std::int64_t num = std::stoll(a, &used);
    if (used != a.size()) throw std::invalid_argument("trailing characters");
    const std::int64_t den = std::stoll(b, &used);
    if (used != b.size()) throw std::invalid_argument("trailing characters");
    return make_rational_pi(num, den);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("rational multiple of pi: cannot parse \"" + text +
                                "\" (expected \"p/q\" or \"p\")");
  }
}

std::string to_string(const RationalPi& r) {
  if (r.den == 1) return std::to_string(r.num);
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

Angle Angle::radians(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("Angle: non-finite value");
  return Angle(value);
}

Angle Angle::pi_multiple(RationalPi value) {
  return Angle(make_rational_pi(value.num, value.den));
}

double Angle::value() const {
  if (const auto* r = exact()) {
    return std::numbers::pi * static_cast<double>(r->num) / static_cast<double>(r->den);
  }
  return std::get<double>(repr_);
}

namespace {

// Quarter turns k when the angle equals k pi/2 exactly.
std::optional<std::int64_t> quarter_turns(const RationalPi& r) {
  if ((2 * r.num) % r.den != 0) return std::nullopt;
  return (((2 * r.num) / r.den) % 4 + 4) % 4;
}

}  // namespace

double Angle::cos() const {
  if (const auto* r = exact()) {
    if (const auto q = quarter_turns(*r)) {
      static constexpr double kCos[4] = {1.0, 0.0, -1.0, 0.0};
      return kCos[*q];
    }
  }
  return std::cos(value());
}

double Angle::sin() const {
  if (const auto* r = exact()) {
    if (const auto q = quarter_turns(*r)) {
      static constexpr double kSin[4] = {0.0, 1.0, 0.0, -1.0};
      return kSin[*q];
    }
  }
  return std::sin(value());
}

std::optional<bool> Angle::multiple_of(RationalPi step) const {
  const auto* r = exact();
  if (r == nullptr) return std::nullopt;
  const RationalPi s = make_rational_pi(step.num, step.den);
  if (s.num == 0) return r->num == 0;
  // (r.num / r.den) / (s.num / s.den) is an integer.
  return (r->num * s.den) % (r->den * s.num) == 0;
}

std::optional<bool> SpinRotationDegeneracy::generic() const {
  const std::optional<bool> flags[] = {alpha_zero_mod_pi, beta_zero_mod_pi,
                                       double_angles_zero_mod_pi};
  bool undecided = false;
  for (const auto& f : flags) {
    if (!f) {
      undecided = true;
    } else if (*f) {
      return false;
    }
  }
  if (undecided) return std::nullopt;
  return true;
}

SpinRotationDegeneracy classify_spin_rotation(const Angle& alpha, const Angle& beta) {
  SpinRotationDegeneracy d;
  d.alpha_zero_mod_pi = alpha.multiple_of({1, 1});
  d.beta_zero_mod_pi = beta.multiple_of({1, 1});
  const auto a_half = alpha.multiple_of({1, 2});
  const auto b_half = beta.multiple_of({1, 2});
  if (a_half && b_half) {
    d.double_angles_zero_mod_pi = *a_half && *b_half;
  } else if ((a_half && !*a_half) || (b_half && !*b_half)) {
    d.double_angles_zero_mod_pi = false;
  }
  return d;
}

KrausMap make_spin_rotation_map(const Angle& alpha, const Angle& beta, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("make_spin_rotation_map: p must lie in (0, 1), got " +
                                format_double(p));
  }
  const double sp = std::sqrt(p);
  const double sq = std::sqrt(1.0 - p);
  const Complex phase(alpha.cos(), alpha.sin());
  ComplexMatrix v0 = ComplexMatrix::Zero(2, 2);
  v0(0, 0) = sp * phase;
  v0(1, 1) = sp * std::conj(phase);
  const Complex c(beta.cos(), 0.0);
  const Complex is(0.0, beta.sin());
  ComplexMatrix v1(2, 2);
  v1 << sq * c, sq * is, sq * is, sq * c;
  return KrausMap({v0, v1});
}

KrausMap make_spin_rotation_map(double alpha, double beta, double p) {
  return make_spin_rotation_map(Angle::radians(alpha), Angle::radians(beta), p);
}

KrausMap make_spontaneous_emission_map(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("make_spontaneous_emission_map: gamma must lie in (0, 1), got " +
                                format_double(gamma));
  }
  ComplexMatrix v0 = ComplexMatrix::Zero(2, 2);
  v0(0, 0) = 1.0;
  v0(1, 1) = std::sqrt(1.0 - gamma * gamma);
  ComplexMatrix v1 = ComplexMatrix::Zero(2, 2);
  v1(0, 1) = gamma;
  return KrausMap({v0, v1});
}

EmissionShrink spontaneous_emission_shrink(double gamma, const HermitianMatrix& x) {
  if (x.dim() != 2) throw std::invalid_argument("spontaneous_emission_shrink: X must be 2x2");
  const double half_gap = (x(0, 0).real() - x(1, 1).real()) / 2.0;
  const double radius = std::sqrt(half_gap * half_gap + std::norm(x(0, 1)));
  const double g2 = gamma * gamma;
  return {g2 * (radius + half_gap), g2 * (radius - half_gap)};
}

}  // namespace conecons
