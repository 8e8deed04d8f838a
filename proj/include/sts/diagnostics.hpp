#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sts/grid.hpp"

namespace sts {

/**
 * Smallest x > 0 where the cubic spline through f equals half of max f,
 * searched rightwards from the node at x = 0. Empty when there is no such
 * crossing (e.g. a constant field).
 */
std::optional<double> half_width(const Field& f);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square deviation in log space
  std::size_t count = 0;
};

// Least-squares line through (log x, log y). Needs >= 5 points, all positive.
LineFit loglog_slope(std::span<const double> xs, std::span<const double> ys);

// Same fit restricted to points with x_lo <= x <= x_hi.
LineFit loglog_slope(std::span<const double> xs, std::span<const double> ys, double x_lo, double x_hi);

struct CollapseProfile {
  std::vector<double> eta;
  std::vector<double> rescaled;
  double x_half = 0.0;
};

CollapseProfile collapse_profile(const Field& f);

// (1 + eta^2 (2^{p-1} - 1))^{-1/(p-1)}
double collapse_reference(double eta, double p);

// max |u/max - reference(eta)| over nodes with |eta| <= eta_max.
double collapse_deviation(const Field& f, double p, double eta_max = 2.0);

/**
 * Remaining blow-up time of u' = u^p from value u: u^{1-p} / (p-1). Added to
 * the last simulated time, it estimates T* when the run stops short of it.
 */
double residual_blowup_time(double u, double p);

struct ConeSlope {
  double value = 0.0;   // median |dr/dz| across the window
  double spread = 0.0;  // (max - min) / median over the window
  std::size_t samples = 0;
  bool low_confidence = true;
};

/**
 * Forward-difference |dr/dz| for intervals with both ends at
 * |z| in [lo_factor * min r, hi_factor * min r], measured from the node of
 * minimum radius. Flags low confidence for fewer than 3 samples or a relative
 * spread above 20%.
 */
ConeSlope cone_slope(const Field& f, double lo_factor = 5.0, double hi_factor = 50.0);

// Fit of log|dv/dt| against log v; expected slope -3 near pinch-off.
LineFit pinch_rate_check(std::span<const double> values, std::span<const double> rates);
LineFit pinch_rate_check(std::span<const double> values, std::span<const double> rates, double v_lo, double v_hi);

inline constexpr double kPinchRateConstant = 0.060575684;
// Far-field cone slope of the first similarity solution (tan 46.0444 deg is 1.03714).
inline constexpr double kConeSlope = 1.0373;

}  // namespace sts
