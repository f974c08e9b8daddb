#include "conecons/cone_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace conecons {

namespace {

void require_same_size(const PositiveVector& x, const PositiveVector& y, const char* who) {
  if (x.size() != y.size()) {
    throw std::invalid_argument(std::string(who) + ": dimension mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + ")");
  }
}

Eigen::VectorXd log_ratios(const PositiveVector& x, const PositiveVector& y) {
  return x.log() - y.log();
}

}  // namespace

PositiveVector::PositiveVector(Eigen::VectorXd entries) : entries_(std::move(entries)) {
  if (entries_.size() == 0) {
    throw std::invalid_argument("PositiveVector: empty vector");
  }
  for (Eigen::Index i = 0; i < entries_.size(); ++i) {
    const double v = entries_[i];
    if (!std::isfinite(v) || v <= 0.0) {
      throw std::invalid_argument("PositiveVector: entry " + std::to_string(i) +
                                  " is not strictly positive (" + std::to_string(v) + ")");
    }
  }
}

PositiveVector PositiveVector::ones(Eigen::Index n) {
  return PositiveVector(Eigen::VectorXd::Ones(n));
}

ExtendedNonnegReal::ExtendedNonnegReal(double value) : value_(value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw std::invalid_argument("ExtendedNonnegReal: finite value must be >= 0, got " +
                                std::to_string(value));
  }
}

ExtendedNonnegReal ExtendedNonnegReal::infinity() {
  ExtendedNonnegReal r;
  r.infinite_ = true;
  return r;
}

double ExtendedNonnegReal::value() const {
  if (infinite_) throw std::domain_error("ExtendedNonnegReal: value is +inf");
  return value_;
}

double ExtendedNonnegReal::to_double() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

std::string ExtendedNonnegReal::to_string() const {
  if (infinite_) return "+inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value_);
  return buf;
}

ExtendedNonnegReal operator+(ExtendedNonnegReal a, ExtendedNonnegReal b) {
  if (a.infinite_ || b.infinite_) return ExtendedNonnegReal::infinity();
  return ExtendedNonnegReal(a.value_ + b.value_);
}

ExtendedNonnegReal operator*(double factor, ExtendedNonnegReal a) {
  if (!(factor >= 0.0) || !std::isfinite(factor)) {
    throw std::invalid_argument("ExtendedNonnegReal: scale factor must be finite and >= 0");
  }
  if (a.infinite_) return factor == 0.0 ? ExtendedNonnegReal(0.0) : a;
  return ExtendedNonnegReal(factor * a.value_);
}

ExtendedNonnegReal max(ExtendedNonnegReal a, ExtendedNonnegReal b) {
  return (a < b) ? b : a;
}

bool operator==(const ExtendedNonnegReal& a, const ExtendedNonnegReal& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

std::partial_ordering operator<=>(const ExtendedNonnegReal& a, const ExtendedNonnegReal& b) {
  if (a.infinite_ && b.infinite_) return std::partial_ordering::equivalent;
  if (a.infinite_) return std::partial_ordering::greater;
  if (b.infinite_) return std::partial_ordering::less;
  return a.value_ <=> b.value_;
}

double hilbert_distance_orthant(const PositiveVector& x, const PositiveVector& y) {
  require_same_size(x, y, "hilbert_distance_orthant");
  const Eigen::VectorXd r = log_ratios(x, y);
  return r.maxCoeff() - r.minCoeff();
}

double thompson_distance_orthant(const PositiveVector& x, const PositiveVector& y) {
  require_same_size(x, y, "thompson_distance_orthant");
  const Eigen::VectorXd r = log_ratios(x, y);
  return std::max(r.maxCoeff(), -r.minCoeff());
}

double tsitsiklis_lyapunov(const Eigen::VectorXd& x) {
  if (x.size() == 0) throw std::invalid_argument("tsitsiklis_lyapunov: empty vector");
  return x.maxCoeff() - x.minCoeff();
}

double birkhoff_lyapunov(const PositiveVector& x) {
  return tsitsiklis_lyapunov(x.log());
}

double contraction_ratio(ExtendedNonnegReal diameter) {
  if (diameter.is_infinite()) return 1.0;
  return std::tanh(diameter.value() / 4.0);
}

}  // namespace conecons
