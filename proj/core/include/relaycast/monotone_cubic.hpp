#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace relaycast {

/// Shape-preserving piecewise-cubic Hermite interpolant (Fritsch-Carlson
/// slopes with the weighted harmonic mean at interior knots). Monotone data
/// yields a monotone interpolant; local extrema are not overshot.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  /// Evaluates inside [front(), back()]; values outside are clamped to the range.
  double operator()(double x) const;
  double derivative(double x) const;
  /// Exact integral of the interpolant over [a, b] (both inside the knot range).
  double integral(double a, double b) const;

  double front() const noexcept { return x_.front(); }
  double back() const noexcept { return x_.back(); }
  std::span<const double> x() const noexcept { return x_; }
  std::span<const double> y() const noexcept { return y_; }

 private:
  std::size_t segment(double x) const;
  double integral_from_knot(std::size_t k, double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> slope_;
  std::vector<double> cumulative_;
};

}  // namespace relaycast
