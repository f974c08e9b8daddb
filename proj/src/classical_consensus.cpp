#include "conecons/classical_consensus.hpp"

#include "conecons/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace conecons {

namespace {

void require_dim(Eigen::Index expected, Eigen::Index got, const char* who) {
  if (expected != got) {
    throw std::invalid_argument(std::string(who) + ": dimension mismatch (matrix " +
                                std::to_string(expected) + ", vector " + std::to_string(got) +
                                ")");
  }
}

double sup_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

StochasticMatrix::StochasticMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("StochasticMatrix: matrix must be square and non-empty (got " +
                                std::to_string(entries_.rows()) + "x" +
                                std::to_string(entries_.cols()) + ")");
  }
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
      const double v = entries_(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument("StochasticMatrix: entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") = " + format_double(v) +
                                    " is not a finite nonnegative number");
      }
    }
    const double sum = entries_.row(i).sum();
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw std::invalid_argument("StochasticMatrix: row " + std::to_string(i) + " sums to " +
                                  format_double(sum) + " (expected 1 within 1e-12)");
    }
  }
}

StochasticMatrixSequence StochasticMatrixSequence::finite(std::vector<StochasticMatrix> matrices) {
  if (matrices.empty()) throw std::invalid_argument("StochasticMatrixSequence: empty list");
  const Eigen::Index n = matrices.front().dim();
  for (std::size_t k = 0; k < matrices.size(); ++k) {
    if (matrices[k].dim() != n) {
      throw std::invalid_argument("StochasticMatrixSequence: matrix " + std::to_string(k) +
                                  " has dimension " + std::to_string(matrices[k].dim()) +
                                  ", expected " + std::to_string(n));
    }
  }
  return StochasticMatrixSequence(n, Listed{std::move(matrices), false});
}

StochasticMatrixSequence StochasticMatrixSequence::periodic(
    std::vector<StochasticMatrix> matrices) {
  auto seq = finite(std::move(matrices));
  std::get<Listed>(seq.source_).cyclic = true;
  return seq;
}

StochasticMatrixSequence StochasticMatrixSequence::constant(StochasticMatrix matrix) {
  std::vector<StochasticMatrix> one;
  one.push_back(std::move(matrix));
  return periodic(std::move(one));
}

StochasticMatrixSequence StochasticMatrixSequence::random(Eigen::Index n, std::uint64_t seed,
                                                          RandomStochasticOptions options) {
  if (n < 1) throw std::invalid_argument("StochasticMatrixSequence: dimension must be >= 1");
  if (!(options.density >= 0.0 && options.density <= 1.0)) {
    throw std::invalid_argument("StochasticMatrixSequence: density must lie in [0, 1]");
  }
  return StochasticMatrixSequence(n, Generated{seed, options});
}

std::optional<std::size_t> StochasticMatrixSequence::length() const {
  if (const auto* listed = std::get_if<Listed>(&source_); listed && !listed->cyclic) {
    return listed->matrices.size();
  }
  return std::nullopt;
}

bool StochasticMatrixSequence::is_constant() const {
  const auto* listed = std::get_if<Listed>(&source_);
  return listed && listed->cyclic && listed->matrices.size() == 1;
}

std::optional<StochasticMatrix> StochasticMatrixSequence::at(std::size_t t) const {
  if (const auto* listed = std::get_if<Listed>(&source_)) {
    const auto& ms = listed->matrices;
    if (listed->cyclic) return ms[t % ms.size()];
    if (t >= ms.size()) return std::nullopt;
    return ms[t];
  }
  const auto& gen = std::get<Generated>(source_);
  Rng rng = make_rng(gen.seed, t);
  return StochasticMatrix(random_stochastic_matrix(dim_, rng, gen.options));
}

Eigen::VectorXd consensus_step(const StochasticMatrix& a, const Eigen::VectorXd& x) {
  require_dim(a.dim(), x.size(), "consensus_step");
  return a.matrix() * x;
}

Eigen::VectorXd dual_consensus_step(const StochasticMatrix& a, const Eigen::VectorXd& z) {
  require_dim(a.dim(), z.size(), "dual_consensus_step");
  return a.matrix().transpose() * z;
}

ClassicalRun run_consensus(const StochasticMatrixSequence& seq, const Eigen::VectorXd& x0,
                           const StoppingRule& stop, const std::optional<Eigen::VectorXd>& limit) {
  require_dim(seq.dim(), x0.size(), "run_consensus");
  if (limit) require_dim(seq.dim(), limit->size(), "run_consensus (limit)");

  ClassicalRun run;
  Eigen::VectorXd x = x0;
  for (std::size_t t = 0;; ++t) {
    TraceRecord rec;
    rec.t = t;
    rec.lyapunov = tsitsiklis_lyapunov(x);
    rec.lambda_min = x.minCoeff();
    rec.lambda_max = x.maxCoeff();
    if (limit) rec.dist_to_limit = sup_distance(x, *limit);
    if (rec.lambda_min > 0.0) rec.birkhoff = birkhoff_lyapunov(PositiveVector(x));
    run.trace.append(rec, x.cwiseAbs().maxCoeff());

    if (rec.lyapunov < stop.tolerance) {
      run.trace.set_status(TerminalStatus::kConverged);
      break;
    }
    if (t >= stop.max_iterations) {
      run.trace.set_status(TerminalStatus::kMaxIterations);
      break;
    }
    const auto a = seq.at(t);
    if (!a) {
      run.trace.set_status(TerminalStatus::kIncompleteSequence);
      break;
    }
    x = consensus_step(*a, x);
  }
  run.final_state = std::move(x);
  return run;
}

ClassicalRun run_dual_consensus(const StochasticMatrix& a, const Eigen::VectorXd& z0,
                                const StoppingRule& stop,
                                const std::optional<Eigen::VectorXd>& limit) {
  require_dim(a.dim(), z0.size(), "run_dual_consensus");
  if (limit) require_dim(a.dim(), limit->size(), "run_dual_consensus (limit)");

  ClassicalRun run;
  run.trace = SimulationTrace(LyapunovKind::kIncrementNorm);
  Eigen::VectorXd z = z0;
  for (std::size_t t = 0;; ++t) {
    Eigen::VectorXd next = dual_consensus_step(a, z);
    TraceRecord rec;
    rec.t = t;
    rec.lyapunov = (next - z).lpNorm<1>();
    rec.lambda_min = z.minCoeff();
    rec.lambda_max = z.maxCoeff();
    if (limit) rec.dist_to_limit = sup_distance(z, *limit);
    run.trace.append(rec, z.lpNorm<1>());

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

Eigen::MatrixXd sequence_product(const StochasticMatrixSequence& seq, std::size_t t0,
                                 std::size_t count) {
  Eigen::MatrixXd product = Eigen::MatrixXd::Identity(seq.dim(), seq.dim());
  for (std::size_t k = 0; k < count; ++k) {
    const auto a = seq.at(t0 + k);
    if (!a) {
      throw std::out_of_range("sequence_product: sequence ends before t = " +
                              std::to_string(t0 + k));
    }
    product = a->matrix() * product;
  }
  return product;
}

BirkhoffReport check_birkhoff_contraction(
    const Eigen::MatrixXd& a, const std::vector<std::pair<PositiveVector, PositiveVector>>& pairs) {
  BirkhoffReport report;
  report.diameter = projective_diameter(a);
  report.certified_factor = contraction_ratio(report.diameter);
  report.bound_checked = report.diameter.is_finite();

  constexpr double kSlack = 1e-9;
  for (const auto& [x, y] : pairs) {
    require_dim(a.cols(), x.size(), "check_birkhoff_contraction");
    require_dim(a.cols(), y.size(), "check_birkhoff_contraction");
    const double before = hilbert_distance_orthant(x, y);
    if (before == 0.0) {
      ++report.pairs_skipped;
      continue;
    }
    const double after =
        hilbert_distance_orthant(PositiveVector(a * x.values()), PositiveVector(a * y.values()));
    ++report.pairs_checked;
    report.worst_ratio = std::max(report.worst_ratio, after / before);
    if (report.bound_checked && after > report.certified_factor * before + kSlack) {
      ++report.violations;
    }
  }
  return report;
}

bool ConnectivityReport::all_windows_rooted() const {
  return std::all_of(windows.begin(), windows.end(),
                     [](const WindowRoot& w) { return w.root_exists(); });
}

ConnectivityReport check_theorem1_hypotheses(const StochasticMatrixSequence& seq,
                                             std::size_t t0_first, std::size_t t0_last,
                                             std::size_t horizon, EdgeConvention convention) {
  if (t0_last < t0_first) {
    throw std::invalid_argument("check_theorem1_hypotheses: empty window range");
  }
  if (const auto len = seq.length(); len && t0_last + horizon >= *len) {
    throw std::invalid_argument("check_theorem1_hypotheses: window [" + std::to_string(t0_last) +
                                ", " + std::to_string(t0_last + horizon) +
                                "] runs past the end of a sequence of length " +
                                std::to_string(*len));
  }

  const Eigen::Index n = seq.dim();
  ConnectivityReport report;
  report.horizon = horizon;
  report.min_positive_entry = std::numeric_limits<double>::infinity();

  for (std::size_t t0 = t0_first; t0 <= t0_last; ++t0) {
    // reach(u, v): edge u -> v in the union graph.
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> edge =
        Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, false);
    for (std::size_t t = t0; t <= t0 + horizon; ++t) {
      const StochasticMatrix a = *seq.at(t);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!(a(i, i) > 0.0)) report.diagonal_positive = false;
        for (Eigen::Index j = 0; j < n; ++j) {
          const double v = a(i, j);
          if (v > 0.0) {
            report.min_positive_entry = std::min(report.min_positive_entry, v);
            if (convention == EdgeConvention::kInfluence) {
              edge(j, i) = true;
            } else {
              edge(i, j) = true;
            }
          }
        }
      }
    }

    WindowRoot window{t0, std::nullopt};
    for (Eigen::Index root = 0; root < n && !window.root; ++root) {
      std::vector<bool> seen(static_cast<std::size_t>(n), false);
      std::vector<Eigen::Index> stack{root};
      seen[static_cast<std::size_t>(root)] = true;
      Eigen::Index reached = 1;
      while (!stack.empty()) {
        const Eigen::Index u = stack.back();
        stack.pop_back();
        for (Eigen::Index v = 0; v < n; ++v) {
          if (edge(u, v) && !seen[static_cast<std::size_t>(v)]) {
            seen[static_cast<std::size_t>(v)] = true;
            ++reached;
            stack.push_back(v);
          }
        }
      }
      if (reached == n) window.root = root;
    }
    report.windows.push_back(window);
  }
  if (!std::isfinite(report.min_positive_entry)) report.min_positive_entry = 0.0;
  return report;
}

}  // namespace conecons
