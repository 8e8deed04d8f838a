#include "sts/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "sts/errors.hpp"
#include "sts/spline.hpp"

namespace sts {

std::optional<double> half_width(const Field& f) {
  const auto vals = f.values();
  const double peak = *std::max_element(vals.begin(), vals.end());
  if (!(peak > 0.0)) return std::nullopt;
  const std::vector<double> xs = f.grid().coordinates();
  const NaturalCubicSpline spline(xs, vals);
  const auto x = spline.first_crossing(0.5 * peak, f.grid().center_index());
  if (!x || !(*x > 0.0)) return std::nullopt;
  return x;
}

LineFit loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidArgument("loglog_slope: size mismatch");
  if (xs.size() < 5) {
    throw InvalidArgument("loglog_slope: need at least 5 points, got " + std::to_string(xs.size()));
  }
  const std::size_t n = xs.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw InvalidArgument("loglog_slope: data must be positive");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("loglog_slope: abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.count = n;
  return fit;
}

LineFit loglog_slope(std::span<const double> xs, std::span<const double> ys, double x_lo, double x_hi) {
  if (xs.size() != ys.size()) throw InvalidArgument("loglog_slope: size mismatch");
  std::vector<double> wx, wy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] >= x_lo && xs[i] <= x_hi) {
      wx.push_back(xs[i]);
      wy.push_back(ys[i]);
    }
  }
  return loglog_slope(wx, wy);
}

CollapseProfile collapse_profile(const Field& f) {
  const auto xh = half_width(f);
  if (!xh) throw InvalidArgument("collapse_profile: half-width undefined");
  const auto vals = f.values();
  const double peak = *std::max_element(vals.begin(), vals.end());
  CollapseProfile out;
  out.x_half = *xh;
  out.eta.resize(f.size());
  out.rescaled.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    out.eta[i] = f.grid().x(i) / *xh;
    out.rescaled[i] = vals[i] / peak;
  }
  return out;
}

double collapse_reference(double eta, double p) {
  return std::pow(1.0 + eta * eta * (std::pow(2.0, p - 1.0) - 1.0), -1.0 / (p - 1.0));
}

double collapse_deviation(const Field& f, double p, double eta_max) {
  const CollapseProfile prof = collapse_profile(f);
  double dev = 0.0;
  for (std::size_t i = 0; i < prof.eta.size(); ++i) {
    if (std::abs(prof.eta[i]) <= eta_max) {
      dev = std::max(dev, std::abs(prof.rescaled[i] - collapse_reference(prof.eta[i], p)));
    }
  }
  return dev;
}

double residual_blowup_time(double u, double p) {
  if (!(p > 1.0) || !(u > 0.0)) throw InvalidArgument("residual_blowup_time: needs p > 1 and u > 0");
  return std::pow(u, 1.0 - p) / (p - 1.0);
}

ConeSlope cone_slope(const Field& f, double lo_factor, double hi_factor) {
  const auto r = f.values();
  const std::size_t m = static_cast<std::size_t>(std::min_element(r.begin(), r.end()) - r.begin());
  const double rmin = r[m];
  const double z0 = f.grid().x(m);
  const double lo = lo_factor * rmin, hi = hi_factor * rmin;
  std::vector<double> slopes;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    const double za = std::abs(f.grid().x(i) - z0);
    const double zb = std::abs(f.grid().x(i + 1) - z0);
    if (za < lo || zb < lo || za > hi || zb > hi) continue;
    slopes.push_back(std::abs((r[i + 1] - r[i]) / (f.grid().x(i + 1) - f.grid().x(i))));
  }
  ConeSlope out;
  out.samples = slopes.size();
  if (slopes.empty()) return out;
  std::sort(slopes.begin(), slopes.end());
  const std::size_t k = slopes.size();
  out.value = k % 2 ? slopes[k / 2] : 0.5 * (slopes[k / 2 - 1] + slopes[k / 2]);
  if (out.value > 0.0) out.spread = (slopes.back() - slopes.front()) / out.value;
  out.low_confidence = k < 3 || !(out.value > 0.0) || out.spread > 0.2;
  return out;
}

LineFit pinch_rate_check(std::span<const double> values, std::span<const double> rates) {
  std::vector<double> mag(rates.size());
  std::transform(rates.begin(), rates.end(), mag.begin(), [](double v) { return std::abs(v); });
  return loglog_slope(values, mag);
}

LineFit pinch_rate_check(std::span<const double> values, std::span<const double> rates, double v_lo, double v_hi) {
  std::vector<double> mag(rates.size());
  std::transform(rates.begin(), rates.end(), mag.begin(), [](double v) { return std::abs(v); });
  return loglog_slope(values, mag, v_lo, v_hi);
}

}  // namespace sts
