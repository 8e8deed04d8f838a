#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace sts {

// Natural cubic spline (zero second derivative at both ends) through
// strictly increasing abscissae.
class NaturalCubicSpline {
 public:
  NaturalCubicSpline(std::span<const double> x, std::span<const double> y);

  double operator()(double t) const;
  double derivative(double t) const;

  std::size_t size() const noexcept { return x_.size(); }
  std::span<const double> knots() const noexcept { return x_; }
  std::span<const double> second_derivatives() const noexcept { return m_; }

  // Value on the piece [x_k, x_{k+1}].
  double evaluate_on(std::size_t k, double t) const;

  /**
   * Smallest t >= x[first] where the spline equals level, scanning pieces
   * rightwards from knot `first`. Empty when the spline never reaches level.
   */
  std::optional<double> first_crossing(double level, std::size_t first) const;

 private:
  std::size_t locate(double t) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;
};

}  // namespace sts
