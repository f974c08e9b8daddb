#pragma once

#include <Eigen/Core>

#include <compare>
#include <string>

namespace conecons {

/// Element of the open positive orthant. Every entry is strictly positive.
class PositiveVector {
 public:
  /// Throws std::invalid_argument on an empty vector or any entry that is
  /// not a finite, strictly positive number.
  explicit PositiveVector(Eigen::VectorXd entries);

  static PositiveVector ones(Eigen::Index n);

  Eigen::Index size() const { return entries_.size(); }
  double operator[](Eigen::Index i) const { return entries_[i]; }
  const Eigen::VectorXd& values() const { return entries_; }

  /// Entrywise natural logarithm.
  Eigen::VectorXd log() const { return entries_.array().log().matrix(); }

 private:
  Eigen::VectorXd entries_;
};

/// A nonnegative real or +inf. Infinite diameters are constructed on purpose
/// via infinity(); the finite constructor rejects IEEE infinities and NaN.
class ExtendedNonnegReal {
 public:
  ExtendedNonnegReal() = default;
  explicit ExtendedNonnegReal(double value);

  static ExtendedNonnegReal infinity();

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  /// Throws std::domain_error when infinite.
  double value() const;
  /// IEEE view: +inf maps to std::numeric_limits<double>::infinity().
  double to_double() const;

  /// "+inf" or the value with 17 significant digits.
  std::string to_string() const;

  friend ExtendedNonnegReal operator+(ExtendedNonnegReal a, ExtendedNonnegReal b);
  friend ExtendedNonnegReal operator*(double factor, ExtendedNonnegReal a);
  friend ExtendedNonnegReal max(ExtendedNonnegReal a, ExtendedNonnegReal b);

  friend bool operator==(const ExtendedNonnegReal& a, const ExtendedNonnegReal& b);
  friend std::partial_ordering operator<=>(const ExtendedNonnegReal& a,
                                           const ExtendedNonnegReal& b);

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

/// log(max_i x_i/y_i) - log(min_i x_i/y_i), evaluated on log-ratios.
double hilbert_distance_orthant(const PositiveVector& x, const PositiveVector& y);

/// log max{ max_i x_i/y_i, 1 / min_i x_i/y_i }. Zero iff x == y.
double thompson_distance_orthant(const PositiveVector& x, const PositiveVector& y);

/// max_i x_i - min_i x_i. Defined on all of R^n; throws on an empty vector.
double tsitsiklis_lyapunov(const Eigen::VectorXd& x);

/// Hilbert distance from x to the all-ones ray.
double birkhoff_lyapunov(const PositiveVector& x);

/// tanh(diameter / 4); 1 for an infinite diameter.
double contraction_ratio(ExtendedNonnegReal diameter);

}  // namespace conecons
