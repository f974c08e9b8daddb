#include "conecons/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace conecons {

namespace {

void check_step(const TraceRecord& prev, const TraceRecord& next, double scale) {
  const double slack =
      SimulationTrace::kMonotoneSlack * std::max({1.0, std::abs(prev.lyapunov), scale});
  if (next.lyapunov > prev.lyapunov + slack) {
    throw LyapunovIncrease("Lyapunov value increased at t=" + std::to_string(next.t) + ": " +
                           format_double(prev.lyapunov) + " -> " +
                           format_double(next.lyapunov) + " (slack " + format_double(slack) +
                           ")");
  }
}

}  // namespace

std::string to_string(TerminalStatus status) {
  switch (status) {
    case TerminalStatus::kConverged: return "converged";
    case TerminalStatus::kMaxIterations: return "max_iters";
    case TerminalStatus::kIncompleteSequence: return "incomplete_sequence";
  }
  return "unknown";
}

std::string to_string(LyapunovKind kind) {
  switch (kind) {
    case LyapunovKind::kTsitsiklis: return "tsitsiklis";
    case LyapunovKind::kHilbert: return "hilbert";
    case LyapunovKind::kSpectralSpread: return "spectral_spread";
    case LyapunovKind::kIncrementNorm: return "increment_norm";
  }
  return "unknown";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void SimulationTrace::append(const TraceRecord& record, double scale) {
  if (!records_.empty()) check_step(records_.back(), record, scale);
  records_.push_back(record);
  scales_.push_back(scale);
}

void SimulationTrace::write_csv(std::ostream& out) const {
  for (std::size_t i = 1; i < records_.size(); ++i) {
    check_step(records_[i - 1], records_[i], scales_[i]);
  }
  out << "t,lyapunov,lambda_min,lambda_max,dist_to_limit\n";
  for (const auto& r : records_) {
    out << r.t << ',' << format_double(r.lyapunov) << ',' << format_double(r.lambda_min) << ','
        << format_double(r.lambda_max) << ',';
    if (r.dist_to_limit) out << format_double(*r.dist_to_limit);
    out << '\n';
  }
}

}  // namespace conecons
