#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace conecons {

struct StoppingRule {
  double tolerance = 1e-10;
  std::size_t max_iterations = 100000;
  friend bool operator==(const StoppingRule&, const StoppingRule&) = default;
};

enum class TerminalStatus { kConverged, kMaxIterations, kIncompleteSequence };

std::string to_string(TerminalStatus status);

/// Which quantity the lyapunov column of a trace holds.
enum class LyapunovKind {
  kTsitsiklis,      // max x_i - min x_i
  kHilbert,         // log(lambda_max / lambda_min), positive definite runs
  kSpectralSpread,  // lambda_max - lambda_min, indefinite Hermitian runs
  kIncrementNorm,   // ||s(t+1) - s(t)||_1 (trace norm for matrices), dual runs
};

std::string to_string(LyapunovKind kind);

struct TraceRecord {
  std::size_t t = 0;
  double lyapunov = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::optional<double> dist_to_limit;
  // Birkhoff Lyapunov value for classical runs with a positive state.
  std::optional<double> birkhoff;
};

/// Raised when a recorded Lyapunov value increases beyond rounding slack.
class LyapunovIncrease : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-iteration record of a consensus run. The lyapunov column is checked
/// to be non-increasing on every append and again when written.
class SimulationTrace {
 public:
  static constexpr double kMonotoneSlack = 1e-12;

  explicit SimulationTrace(LyapunovKind kind) : kind_(kind) {}

  /// `scale` bounds the magnitude of the state; the allowed increase is
  /// kMonotoneSlack * max(1, |previous|, scale).
  void append(const TraceRecord& record, double scale = 1.0);

  LyapunovKind kind() const { return kind_; }
  const std::vector<TraceRecord>& records() const { return records_; }
  const TraceRecord& back() const { return records_.back(); }
  bool empty() const { return records_.empty(); }

  TerminalStatus status() const { return status_; }
  void set_status(TerminalStatus s) { status_ = s; }

  /// Number of map applications performed.
  std::size_t iterations() const { return records_.empty() ? 0 : records_.back().t; }

  std::optional<double> certified_contraction_factor;

  /// CSV with header t,lyapunov,lambda_min,lambda_max,dist_to_limit and
  /// 17 significant digits. Re-validates monotonicity first.
  void write_csv(std::ostream& out) const;

 private:
  LyapunovKind kind_;
  std::vector<TraceRecord> records_;
  std::vector<double> scales_;
  TerminalStatus status_ = TerminalStatus::kMaxIterations;
};

/// "%.17g" formatting shared by the CSV and summary writers.
std::string format_double(double v);

}  // namespace conecons
