#pragma once

#include "conecons/cone_core.hpp"
#include "conecons/trace.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace conecons {

/// Nonnegative square matrix with unit row sums (A 1 = 1).
class StochasticMatrix {
 public:
  static constexpr double kRowSumTolerance = 1e-12;

  /// Rows are not renormalized. Throws std::invalid_argument naming the
  /// offending entry or row.
  explicit StochasticMatrix(Eigen::MatrixXd entries);

  Eigen::Index dim() const { return entries_.rows(); }
  const Eigen::MatrixXd& matrix() const { return entries_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

 private:
  Eigen::MatrixXd entries_;
};

struct RandomStochasticOptions {
  bool positive_diagonal = true;
  // Probability that an off-diagonal entry is kept nonzero.
  double density = 1.0;
};

/// A(0), A(1), ... backed by an explicit list or by a seeded generator.
class StochasticMatrixSequence {
 public:
  /// Exhausted after the last matrix.
  static StochasticMatrixSequence finite(std::vector<StochasticMatrix> matrices);
  /// Cycles through the list forever.
  static StochasticMatrixSequence periodic(std::vector<StochasticMatrix> matrices);
  static StochasticMatrixSequence constant(StochasticMatrix matrix);
  /// Unbounded; A(t) depends only on (seed, t).
  static StochasticMatrixSequence random(Eigen::Index n, std::uint64_t seed,
                                         RandomStochasticOptions options = {});

  Eigen::Index dim() const { return dim_; }
  /// nullopt when unbounded.
  std::optional<std::size_t> length() const;
  bool is_constant() const;

  /// nullopt past the end of a finite sequence.
  std::optional<StochasticMatrix> at(std::size_t t) const;

 private:
  struct Listed {
    std::vector<StochasticMatrix> matrices;
    bool cyclic;
  };
  struct Generated {
    std::uint64_t seed;
    RandomStochasticOptions options;
  };

  StochasticMatrixSequence(Eigen::Index dim, std::variant<Listed, Generated> source)
      : dim_(dim), source_(std::move(source)) {}

  Eigen::Index dim_;
  std::variant<Listed, Generated> source_;
};

/// A x.
Eigen::VectorXd consensus_step(const StochasticMatrix& a, const Eigen::VectorXd& x);

/// A^T z; preserves sum_i z_i.
Eigen::VectorXd dual_consensus_step(const StochasticMatrix& a, const Eigen::VectorXd& z);

struct ClassicalRun {
  SimulationTrace trace{LyapunovKind::kTsitsiklis};
  Eigen::VectorXd final_state;
};

/// Iterates x(t+1) = A(t) x(t). Stops when the Tsitsiklis value drops below
/// the tolerance, after stop.max_iterations steps, or when a finite sequence
/// runs out. `limit`, when given, fills the dist_to_limit column (sup norm).
ClassicalRun run_consensus(const StochasticMatrixSequence& seq, const Eigen::VectorXd& x0,
                           const StoppingRule& stop = {},
                           const std::optional<Eigen::VectorXd>& limit = std::nullopt);

/// Iterates z(t+1) = A^T z(t) for a fixed A. The lyapunov column holds the
/// l1 increment ||z(t+1) - z(t)||_1, which column-stochastic maps cannot
/// increase; the run stops when it drops below the tolerance.
ClassicalRun run_dual_consensus(const StochasticMatrix& a, const Eigen::VectorXd& z0,
                                const StoppingRule& stop = {},
                                const std::optional<Eigen::VectorXd>& limit = std::nullopt);

/// sup over (i,j,p,q) of log(a_ij a_pq / (a_iq a_pj)), +inf when a positive
/// numerator meets a zero denominator. Exact O(n^4) enumeration, OpenMP
/// parallel over (i,p). Requires a square, entrywise nonnegative matrix with
/// no all-zero row.
ExtendedNonnegReal projective_diameter(const Eigen::MatrixXd& a);

namespace reference {
/// Serial enumeration kept as the oracle for the parallel kernel.
ExtendedNonnegReal projective_diameter(const Eigen::MatrixXd& a);
}  // namespace reference

/// A(t0 + count - 1) ... A(t0 + 1) A(t0). Throws if the sequence ends early.
Eigen::MatrixXd sequence_product(const StochasticMatrixSequence& seq, std::size_t t0,
                                 std::size_t count);

struct BirkhoffReport {
  ExtendedNonnegReal diameter;
  double certified_factor = 1.0;
  // False when the diameter is infinite (the bound is vacuous).
  bool bound_checked = false;
  std::size_t pairs_checked = 0;
  std::size_t pairs_skipped = 0;
  std::size_t violations = 0;
  // max over checked pairs of d(Ax,Ay)/d(x,y); 0 if nothing was checked.
  double worst_ratio = 0.0;
};

/// Checks d(Ax, Ay) <= tanh(Delta(A)/4) d(x, y) + 1e-9 on each pair.
/// Pairs with d(x, y) = 0 are skipped and counted.
BirkhoffReport check_birkhoff_contraction(
    const Eigen::MatrixXd& a, const std::vector<std::pair<PositiveVector, PositiveVector>>& pairs);

/// Edge orientation for the union communication graph.
enum class EdgeConvention {
  kInfluence,   // j -> i iff a_ij > 0 (node j informs node i)
  kTransposed,  // i -> j iff a_ij > 0
};

struct WindowRoot {
  std::size_t t0 = 0;
  // A node reaching every other node in the union graph over [t0, t0 + T].
  std::optional<Eigen::Index> root;
  bool root_exists() const { return root.has_value(); }
};

struct ConnectivityReport {
  std::size_t horizon = 0;
  std::vector<WindowRoot> windows;
  // Smallest nonzero entry seen over all windows (alpha).
  double min_positive_entry = 0.0;
  bool diagonal_positive = true;

  bool all_windows_rooted() const;
};

/// Measures the connectivity hypotheses over the windows [t0, t0 + horizon]
/// for t0 = t0_first .. t0_last. Throws on an empty range or a window that
/// runs past the end of a finite sequence.
ConnectivityReport check_theorem1_hypotheses(const StochasticMatrixSequence& seq,
                                             std::size_t t0_first, std::size_t t0_last,
                                             std::size_t horizon,
                                             EdgeConvention convention = EdgeConvention::kInfluence);

}  // namespace conecons
