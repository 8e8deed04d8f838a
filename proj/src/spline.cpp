#include "sts/spline.hpp"

#include <algorithm>
#include <cmath>

#include "sts/errors.hpp"

namespace sts {

NaturalCubicSpline::NaturalCubicSpline(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()), m_(x.size(), 0.0) {
  const std::size_t n = x_.size();
  if (n != y_.size()) throw InvalidArgument("spline: abscissa and ordinate sizes differ");
  if (n < 2) throw InvalidArgument("spline: need at least two knots");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw InvalidArgument("spline: knots must be strictly increasing");
  }
  if (n == 2) return;

  // Thomas algorithm on the interior second derivatives.
  const std::size_t k = n - 2;
  std::vector<double> diag(k), upper(k), rhs(k);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hl = x_[i] - x_[i - 1];
    const double hr = x_[i + 1] - x_[i];
    diag[i - 1] = 2.0 * (hl + hr);
    upper[i - 1] = hr;
    rhs[i - 1] = 6.0 * ((y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl);
  }
  for (std::size_t i = 1; i < k; ++i) {
    const double lower = x_[i + 1] - x_[i];  // h_{i} multiplies M_{i}
    const double w = lower / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  m_[k] = rhs[k - 1] / diag[k - 1];
  for (std::size_t i = k - 1; i-- > 0;) {
    m_[i + 1] = (rhs[i] - upper[i] * m_[i + 2]) / diag[i];
  }
}

std::size_t NaturalCubicSpline::locate(double t) const {
  if (t <= x_.front()) return 0;
  if (t >= x_.back()) return x_.size() - 2;
  const auto it = std::upper_bound(x_.begin(), x_.end(), t);
  return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double NaturalCubicSpline::evaluate_on(std::size_t k, double t) const {
  const double h = x_[k + 1] - x_[k];
  const double a = x_[k + 1] - t;
  const double b = t - x_[k];
  return m_[k] * a * a * a / (6.0 * h) + m_[k + 1] * b * b * b / (6.0 * h) +
         (y_[k] / h - m_[k] * h / 6.0) * a + (y_[k + 1] / h - m_[k + 1] * h / 6.0) * b;
}

double NaturalCubicSpline::operator()(double t) const { return evaluate_on(locate(t), t); }

double NaturalCubicSpline::derivative(double t) const {
  const std::size_t k = locate(t);
  const double h = x_[k + 1] - x_[k];
  const double a = x_[k + 1] - t;
  const double b = t - x_[k];
  return -m_[k] * a * a / (2.0 * h) + m_[k + 1] * b * b / (2.0 * h) - (y_[k] / h - m_[k] * h / 6.0) +
         (y_[k + 1] / h - m_[k + 1] * h / 6.0);
}

std::optional<double> NaturalCubicSpline::first_crossing(double level, std::size_t first) const {
  for (std::size_t k = first; k + 1 < x_.size(); ++k) {
    const double f0 = y_[k] - level;
    const double f1 = y_[k + 1] - level;
    if (f0 == 0.0) return x_[k];
    if ((f0 > 0.0) == (f1 > 0.0) && f1 != 0.0) continue;
    if (f1 == 0.0) return x_[k + 1];

    // Bracketed bisection down to adjacent doubles.
    double lo = x_[k], hi = x_[k + 1];
    const bool lo_positive = f0 > 0.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double fm = evaluate_on(k, mid) - level;
      if (fm == 0.0) return mid;
      if ((fm > 0.0) == lo_positive) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }
  return std::nullopt;
}

}  // namespace sts
