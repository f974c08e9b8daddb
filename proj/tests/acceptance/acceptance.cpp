// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "conecons/classical_consensus.hpp"
#include "conecons/cone_core.hpp"
#include "conecons/hermitian_cone.hpp"
#include "conecons/quantum_channel.hpp"
#include "conecons/random.hpp"
#include "conecons/scenario.hpp"

#include "../oracles.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace conecons;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

PositiveVector log_uniform(Eigen::Index n, Rng& rng) {
  std::uniform_real_distribution<double> u(-6 * std::log(10.0), 6 * std::log(10.0));
  Eigen::VectorXd v(n);
  for (auto& x : v) x = std::exp(u(rng));
  return PositiveVector(v);
}

double tsitsiklis(const Eigen::VectorXd& x) { return x.maxCoeff() - x.minCoeff(); }

std::pair<double, double> oracle_interval(const HermitianMatrix& x) {
  const auto ev = oracle::hermitian_eigenvalues(x.matrix());
  return {ev.front(), ev.back()};
}

Eigen::Matrix2d diagonal_restriction(const KrausMap& phi) {
  Eigen::Matrix2d m;
  for (Eigen::Index j = 0; j < 2; ++j) {
    const HermitianMatrix y = apply_dual(phi, HermitianMatrix::diagonal(Eigen::Vector2d::Unit(j)));
    for (Eigen::Index i = 0; i < 2; ++i) m(i, j) = y(i, i).real();
  }
  return m;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli_status(const std::string& args) {
  const std::string cmd = std::string(CONECONS_CLI) + " " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

void criterion1(Outcome& o) {
  Rng rng = make_rng(101);
  std::uniform_int_distribution<int> dim(1, 10);
  std::uniform_real_distribution<double> u(-6 * std::log(10.0), 6 * std::log(10.0));
  std::size_t asym = 0, triangle = 0, projective = 0;
  double worst_proj = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const Eigen::Index n = dim(rng);
    const PositiveVector x = log_uniform(n, rng);
    const PositiveVector y = log_uniform(n, rng);
    const PositiveVector z = log_uniform(n, rng);
    const double dxy = hilbert_distance_orthant(x, y);
    if (dxy != hilbert_distance_orthant(y, x)) ++asym;
    if (dxy > hilbert_distance_orthant(x, z) + hilbert_distance_orthant(z, y) + 1e-10) ++triangle;
    const double a = std::exp(u(rng));
    const double b = std::exp(u(rng));
    const double gap = std::abs(
        hilbert_distance_orthant(PositiveVector(a * x.values()), PositiveVector(b * y.values())) - dxy);
    worst_proj = std::max(worst_proj, gap);
    if (gap > 1e-12) ++projective;
  }
  o.require(asym == 0, "symmetry");
  o.require(triangle == 0, "triangle");
  o.require(projective == 0, "projective invariance");
  o.detail << "10000 triples: asymmetric=" << asym << " triangle=" << triangle
           << " projective=" << projective << " max|d(ax,by)-d(x,y)|=" << worst_proj;
}

void criterion2(Outcome& o) {
  Rng rng = make_rng(102);
  std::uniform_int_distribution<int> dim(2, 10);
  std::uniform_real_distribution<double> density(0.2, 1.0);
  std::normal_distribution<double> g;
  std::size_t violations = 0;
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Index n = dim(rng);
    const RandomStochasticOptions opts{true, density(rng)};
    Eigen::VectorXd x(n);
    for (auto& v : x) v = 10.0 * g(rng);
    double prev = tsitsiklis(x);
    for (int t = 0; t < 100; ++t) {
      x = consensus_step(StochasticMatrix(random_stochastic_matrix(n, rng, opts)), x);
      const double v = tsitsiklis(x);
      worst = std::max(worst, v - prev);
      if (v > prev + 1e-13) ++violations;
      prev = v;
    }
  }
  o.require(violations == 0, "monotone");
  o.detail << "1000 sequences x 100 steps: violations=" << violations << " max increase=" << worst;
}

void criterion3(Outcome& o) {
  Rng rng = make_rng(103);
  std::uniform_int_distribution<int> dim(2, 8);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::size_t violations = 0, mismatched = 0;
  double worst_ratio = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Index n = dim(rng);
    Eigen::MatrixXd a(n, n);
    for (auto& v : a.reshaped()) v = std::exp(u(rng));
    const ExtendedNonnegReal delta = projective_diameter(a);
    if (!delta.is_finite() || std::abs(delta.value() - oracle::diameter_bruteforce(a)) > 1e-12) {
      ++mismatched;
    }
    const double factor = contraction_ratio(delta);
    for (int p = 0; p < 10; ++p) {
      const PositiveVector x = log_uniform(n, rng);
      const PositiveVector y = log_uniform(n, rng);
      const double before = hilbert_distance_orthant(x, y);
      const double after =
          hilbert_distance_orthant(PositiveVector(a * x.values()), PositiveVector(a * y.values()));
      if (after > factor * before + 1e-9) ++violations;
      if (before > 0.0) worst_ratio = std::max(worst_ratio, after / before / factor);
    }
  }
  Eigen::Matrix2d two;
  two << 2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0;
  const BirkhoffReport report = check_birkhoff_contraction(two, {});
  const double cert_err = std::abs(report.certified_factor - 1.0 / 3.0);
  o.require(violations == 0, "contraction bound");
  o.require(mismatched == 0, "diameter vs brute force");
  o.require(cert_err <= 1e-12, "2x2 certified factor");
  o.detail << "10000 pairs: violations=" << violations << " max ratio/factor=" << worst_ratio
           << " diameter mismatches=" << mismatched << "; 2x2 factor=" << format_double(report.certified_factor)
           << " (err " << cert_err << ")";
}

void criterion4(Outcome& o) {
  const double g2 = 0.25;
  Eigen::Matrix2d a;
  a << 1.0, 0.0, g2, 1.0 - g2;
  Eigen::VectorXd x(2);
  x << 1.0, 2.0;
  int reached = -1;
  for (int t = 0; t <= 100; ++t) {
    if ((x.array() - 1.0).abs().maxCoeff() < 1e-8) {
      reached = t;
      break;
    }
    x = consensus_step(StochasticMatrix(a), x);
  }
  bool all_inf = true;
  Eigen::Matrix2d power = Eigen::Matrix2d::Identity();
  for (int k = 1; k <= 10; ++k) {
    power = power * a;
    all_inf = all_inf && projective_diameter(power).is_infinite() &&
              std::isinf(oracle::diameter_bruteforce(power));
  }
  o.require(reached >= 0, "sup-norm within 100 steps");
  o.require(all_inf, "Delta(A^k) = +inf");
  o.detail << "||x(t)-(1,1)||_inf < 1e-8 at t=" << reached << "; Delta(A^k)=+inf for k<=10: "
           << (all_inf ? "yes" : "no");
}

void criterion5(Outcome& o) {
  Rng rng = make_rng(105);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_int_distribution<int> ops(1, 4);
  std::size_t violations = 0;
  double worst = -INFINITY;
  for (int k = 0; k < 1000; ++k) {
    const KrausMap phi = random_kraus_map(dim(rng), static_cast<std::size_t>(ops(rng)), rng);
    for (int j = 0; j < 10; ++j) {
      const HermitianMatrix x = random_hermitian(phi.dim(), rng);
      const auto [lo, hi] = oracle_interval(x);
      const auto [lo2, hi2] = oracle_interval(apply_dual(phi, x));
      worst = std::max({worst, lo - lo2, hi2 - hi});
      if (lo2 < lo - 1e-10 || hi2 > hi + 1e-10) ++violations;
      if (!lemma1_bounds_check(phi, x).holds) ++violations;
    }
  }
  o.require(violations == 0, "nesting");
  o.detail << "10000 states: violations=" << violations << " max outward excursion=" << worst;
}

void criterion6(Outcome& o) {
  Rng rng = make_rng(106);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_int_distribution<int> ops(1, 4);
  std::size_t violations = 0, steps = 0;
  double worst = -INFINITY;
  for (int k = 0; k < 1000; ++k) {
    const KrausMap phi = random_kraus_map(dim(rng), static_cast<std::size_t>(ops(rng)), rng);
    HermitianMatrix x = random_positive_definite(phi.dim(), rng);
    auto v_of = [](const HermitianMatrix& m) {
      const SpectralInterval s = spectral_interval(m);
      return std::log(s.lambda_max / s.lambda_min);
    };
    double prev = v_of(x);
    for (int t = 0; t < 100 && prev > 1e-12; ++t) {
      x = apply_dual(phi, x);
      const double v = v_of(x);
      worst = std::max(worst, v - prev);
      if (v > prev + 1e-12) ++violations;
      prev = v;
      ++steps;
    }
    const auto run = run_noncommutative_consensus(KrausSequence::constant(phi),
                                                  random_positive_definite(phi.dim(), rng),
                                                  {1e-12, 100});
    const auto& recs = run.trace.records();
    for (std::size_t t = 1; t < recs.size(); ++t) {
      if (recs[t].lyapunov > recs[t - 1].lyapunov + 1e-12) ++violations;
    }
  }
  o.require(violations == 0, "monotone");
  o.detail << steps << " steps over 1000 runs: violations=" << violations
           << " max increase=" << worst;
}

void criterion7(Outcome& o) {
  const KrausMap psi = make_spin_rotation_map(0.7, 1.1, 0.3);
  const HermitianMatrix target = HermitianMatrix::identity(2) * 0.5;
  HermitianMatrix z = HermitianMatrix::diagonal(Eigen::Vector2d(1.0, 0.0));
  int reached = -1;
  for (int t = 0; t <= 500; ++t) {
    if (is_positive_definite(z) && hilbert_distance_psd(z, target) < 1e-8) {
      reached = t;
      break;
    }
    z = apply_channel(psi, z);
  }
  const REstimate est = estimate_R(psi.power(2), 10000, 1);

  const double p = 0.3;
  const KrausMap quarter =
      make_spin_rotation_map(Angle::radians(0.7), Angle::pi_multiple(make_rational_pi(1, 2)), p);
  Eigen::Matrix2d expected;
  expected << p, 1 - p, 1 - p, p;
  const double diag_err = (diagonal_restriction(quarter) - expected).cwiseAbs().maxCoeff();
  double offdiag = 0.0;
  for (double a : {1.0, -2.0}) {
    const HermitianMatrix y = apply_dual(quarter, HermitianMatrix::diagonal(Eigen::Vector2d(a, 3.0)));
    offdiag = std::max(offdiag, std::abs(y(0, 1)));
  }
  o.require(reached >= 0, "Hilbert distance within 500 iterations");
  o.require(est.r_hat.is_finite(), "R_hat(Phi^2) finite");
  o.require(diag_err <= 1e-13 && offdiag <= 1e-13, "beta = pi/2 diagonal restriction");
  o.detail << "d_H(Z(t), I/2) < 1e-8 at t=" << reached << "; R_hat(Phi^2)=" << est.r_hat.to_string()
           << "; beta=pi/2 restriction err=" << diag_err << " offdiag=" << offdiag;
}

void criterion8(Outcome& o) {
  Rng rng = make_rng(108);
  std::normal_distribution<double> n01;
  double worst_general = 0.0, worst_diagonal = 0.0, worst_restriction = 0.0;
  std::size_t failures = 0;
  bool converged = true;
  for (double g : {0.1, 0.5, 0.9}) {
    const KrausMap phi = make_spontaneous_emission_map(g);
    for (int k = 0; k < 1000; ++k) {
      const HermitianMatrix x = random_hermitian(2, rng);
      const auto [lo, hi] = oracle_interval(x);
      const auto [lo2, hi2] = oracle_interval(apply_dual(phi, x));
      const EmissionShrink rho = spontaneous_emission_shrink(g, x);
      const double err = std::max(std::abs(lo2 - (lo + rho.rho_plus)), std::abs(hi2 - (hi - rho.rho_minus)));
      worst_general = std::max(worst_general, err);
      if (err > 1e-12) ++failures;

      const HermitianMatrix d = HermitianMatrix::diagonal(Eigen::Vector2d(n01(rng), n01(rng)));
      const auto [dlo, dhi] = oracle_interval(d);
      const auto [dlo2, dhi2] = oracle_interval(apply_dual(phi, d));
      const EmissionShrink drho = spontaneous_emission_shrink(g, d);
      worst_diagonal = std::max({worst_diagonal, std::abs(dlo2 - (dlo + drho.rho_plus)),
                                 std::abs(dhi2 - (dhi - drho.rho_minus))});
    }
    const auto run = run_noncommutative_consensus(
        KrausSequence::constant(phi), HermitianMatrix::diagonal(Eigen::Vector2d(1.0, 0.0)));
    const double dist = (run.final_state.matrix() - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff();
    converged = converged && run.trace.status() == TerminalStatus::kConverged && dist < 1e-8;

    Eigen::Matrix2d example1;
    example1 << 1.0, 0.0, g * g, 1.0 - g * g;
    worst_restriction =
        std::max(worst_restriction, (diagonal_restriction(phi) - example1).cwiseAbs().maxCoeff());
  }
  o.require(failures == 0, "closed-form spectral interval on random Hermitian X");
  o.require(converged, "iteration from diag(1,0) to I");
  o.require(worst_restriction <= 1e-15, "diagonal restriction");
  o.detail << "closed form: " << failures << "/3000 random X off by >1e-12 (max err " << worst_general
           << "), diagonal X max err " << worst_diagonal << "; diag(1,0) -> I: "
           << (converged ? "yes" : "no") << "; restriction err " << worst_restriction;
}

void criterion9(Outcome& o) {
  struct Case {
    const char* name;
    KrausMap psi;
    HermitianMatrix expected;
  };
  const std::vector<Case> cases{
      {"spin(0.7,1.1,0.3)", make_spin_rotation_map(0.7, 1.1, 0.3), HermitianMatrix::identity(2) * 0.5},
      {"emission(0.5)", make_spontaneous_emission_map(0.5),
       HermitianMatrix::diagonal(Eigen::Vector2d(1.0, 0.0))}};
  Rng rng = make_rng(109);
  for (const Case& c : cases) {
    const FixedPointResult fp = channel_fixed_point(c.psi);
    const double state_err = (fp.state.matrix().matrix() - c.expected.matrix()).cwiseAbs().maxCoeff();
    double pair_gap = 0.0, limit_gap = 0.0;
    for (int k = 0; k < 20; ++k) {
      const DensityMatrix z0 = random_density_matrix(2, rng);
      const HermitianMatrix x0 = random_hermitian(2, rng);
      HermitianMatrix z = z0.matrix();
      HermitianMatrix x = x0;
      double pairing = 0.0;
      for (int t = 0; t <= 200; ++t) {
        pairing = (z.matrix() * x0.matrix()).trace().real();
        const double dual = (z0.matrix().matrix() * x.matrix()).trace().real();
        pair_gap = std::max(pair_gap, std::abs(pairing - dual));
        z = apply_channel(c.psi, z);
        x = apply_dual(c.psi, x);
      }
      limit_gap = std::max(limit_gap, std::abs(pairing - (c.expected.matrix() * x0.matrix()).trace().real()));
      const DualityReport report = duality_invariant_check(c.psi, z0, x0, 200, fp.state.matrix());
      o.require(report.pairing_holds, std::string(c.name) + " library pairing");
    }
    o.require(fp.residual <= 1e-10 && state_err <= 1e-10, std::string(c.name) + " fixed point");
    o.require(pair_gap <= 1e-10, std::string(c.name) + " pairing");
    o.require(limit_gap <= 1e-7, std::string(c.name) + " limit");
    o.detail << c.name << ": residual=" << fp.residual << " state err=" << state_err
             << " pairing gap=" << pair_gap << " limit gap=" << limit_gap << "; ";
  }
}

void criterion10(Outcome& o) {
  Rng rng = make_rng(110);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<double> density(0.3, 1.0);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  double worst_traj = 0.0, worst_offdiag = 0.0, worst_complete = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = dim(rng);
    const Eigen::MatrixXd a = random_stochastic_matrix(n, rng, {k % 2 == 0, density(rng)});
    const KrausMap phi = build_classical_embedding(StochasticMatrix(a)).to_kraus();
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    for (const auto& v : phi.operators()) sum += v.adjoint() * v;
    worst_complete = std::max(worst_complete, (sum - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff());

    Eigen::VectorXd x(n);
    for (auto& v : x) v = u(rng);
    HermitianMatrix big = HermitianMatrix::diagonal(x);
    for (int t = 0; t < 100; ++t) {
      x = a * x;
      big = apply_dual(phi, big);
      worst_traj = std::max(worst_traj, (big.diagonal_entries() - x).cwiseAbs().maxCoeff());
      ComplexMatrix off = big.matrix();
      off.diagonal().setZero();
      worst_offdiag = std::max(worst_offdiag, off.cwiseAbs().maxCoeff());
    }
  }
  o.require(worst_traj <= 1e-11 && worst_offdiag <= 1e-11, "trajectory");
  o.require(worst_complete <= 1e-12, "completeness");
  o.detail << "100 matrices x 100 steps: max diag err=" << worst_traj << " max offdiag=" << worst_offdiag
           << " completeness defect=" << worst_complete;
}

void criterion11(Outcome& o) {
  const fs::path root = fs::temp_directory_path() / "conecons_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  std::ostringstream err;
  for (const auto& name : canonical_example_names()) {
    const fs::path file = root / (name + ".json");
    std::ofstream(file) << serialize_scenario(canonical_example(name));
    const int a = cli_status("run " + file.string() + " --out-dir " + (root / (name + "_a")).string());
    const int b = cli_status("run " + file.string() + " --out-dir " + (root / (name + "_b")).string());
    const bool same = slurp(root / (name + "_a") / "trace.csv") == slurp(root / (name + "_b") / "trace.csv") &&
                      slurp(root / (name + "_a") / "summary.json") ==
                          slurp(root / (name + "_b") / "summary.json") &&
                      !slurp(root / (name + "_a") / "trace.csv").empty();
    o.require(same, name + " byte-identical");
    o.require(a == 0 && b == 0, name + " exit 0");
    o.detail << name << ": exit " << a << "/" << b << (same ? " identical; " : " DIFFER; ");
  }
  std::ofstream(root / "identity.json") << R"({"kind": "classical", "dimension": 2,
    "dynamics": {"stochastic": {"matrices": [[[1, 0], [0, 1]]]}},
    "initial_state": [1, 2], "stopping": {"max_iterations": 50}})";
  std::ofstream(root / "invalid.json") << R"({"kind": "classical", "dimension": 2,
    "dynamics": {"stochastic": {"matrices": [[[1, 0], [0.5, 0.4]]]}},
    "initial_state": [1, 2]})";
  const int not_conv = cli_status("run " + (root / "identity.json").string() + " --out-dir " + (root / "id").string());
  const int invalid = cli_status("run " + (root / "invalid.json").string() + " --out-dir " + (root / "bad").string());
  o.require(not_conv == 2, "non-converged exit 2");
  o.require(invalid == 1, "invalid exit 1");
  o.detail << "identity exit " << not_conv << ", invalid exit " << invalid;
  fs::remove_all(root);
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"metric axioms and projective invariance", criterion1},
      {"Tsitsiklis monotonicity", criterion2},
      {"Birkhoff contraction", criterion3},
      {"lower-triangular consensus example", criterion4},
      {"spectral nesting under unital maps", criterion5},
      {"Hilbert Lyapunov monotonicity", criterion6},
      {"spin-rotation example", criterion7},
      {"spontaneous-emission closed form", criterion8},
      {"channel fixed point and duality", criterion9},
      {"classical embedding", criterion10},
      {"harness determinism and exit codes", criterion11},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("Criterion %zu %s: %s (%.2fs) %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                secs, o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
