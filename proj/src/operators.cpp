#include "sts/operators.hpp"

#include <algorithm>
#include <cmath>

#include "sts/errors.hpp"

namespace sts {

namespace {

// Weights w with sum w_k f(x_k) = f''(x_2) + O(h^3) for nodes
// x_0 < ... < x_4 with the given consecutive spacings.
void five_point_second_derivative(double hll, double hl, double hr, double hrr, double w[5]) {
  const double h = std::min({hll, hl, hr, hrr});
  const double d[5] = {-(hll + hl) / h, -hl / h, 0.0, hr / h, (hr + hrr) / h};
  // Vandermonde rows sum_k w_k d_k^p = p! [p == 2], scaled by h.
  double a[5][6];
  for (int p = 0; p < 5; ++p) {
    for (int k = 0; k < 5; ++k) a[p][k] = std::pow(d[k], p);
    a[p][5] = p == 2 ? 2.0 : 0.0;
  }
  for (int c = 0; c < 5; ++c) {
    int piv = c;
    for (int r = c + 1; r < 5; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    for (int k = 0; k < 6; ++k) std::swap(a[c][k], a[piv][k]);
    for (int r = c + 1; r < 5; ++r) {
      const double m = a[r][c] / a[c][c];
      for (int k = c; k < 6; ++k) a[r][k] -= m * a[c][k];
    }
  }
  for (int c = 4; c >= 0; --c) {
    double v = a[c][5];
    for (int k = c + 1; k < 5; ++k) v -= a[c][k] * w[k];
    w[c] = v / a[c][c];
  }
  for (int k = 0; k < 5; ++k) w[k] /= h * h;
}

}  // namespace

RhsEvaluator::RhsEvaluator(RhsKind kind, GridPtr grid) : kind_(kind), grid_(std::move(grid)) {
  if (!grid_) throw InvalidArgument("RhsEvaluator: null grid");
  if (grid_->size() < 3) throw InvalidArgument("RhsEvaluator: need at least three nodes");
  periodic_ = grid_->periodic();
  build_stencils();
}

RhsEvaluator RhsEvaluator::heat(GridPtr grid, double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidArgument("heat: alpha must be >= 0");
  RhsEvaluator r(RhsKind::heat_laplacian, std::move(grid));
  r.alpha_ = alpha;
  return r;
}

RhsEvaluator RhsEvaluator::semilinear(GridPtr grid, double alpha, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("semilinear: exponent p must exceed 1");
  RhsEvaluator r = heat(std::move(grid), alpha);
  r.kind_ = RhsKind::semilinear_reaction;
  r.p_ = p;
  return r;
}

RhsEvaluator RhsEvaluator::surface_diffusion(GridPtr grid, double pinch_threshold) {
  if (!grid || !grid->periodic()) {
    throw InvalidArgument("surface_diffusion: requires a periodic grid");
  }
  RhsEvaluator r(RhsKind::surface_diffusion, std::move(grid));
  r.pinch_threshold_ = pinch_threshold;
  const std::size_t n = r.grid_->size();
  r.scratch_g_.resize(n);
  r.scratch_h_.resize(n);
  r.scratch_f_.resize(n);
  return r;
}

void RhsEvaluator::build_stencils() {
  const Grid1D& g = *grid_;
  const std::size_t n = g.size();
  nodes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Node& nd = nodes_[i];
    const bool edge = i == 0 || i + 1 == n;
    if (edge && !periodic_) {
      nd = Node{};
      nd.im = nd.ip = nd.imm = nd.ipp = i;
      nd.uniform = true;
      continue;
    }
    nd.im = i == 0 ? n - 1 : i - 1;
    nd.ip = i + 1 == n ? 0 : i + 1;
    nd.hl = g.spacing_right(nd.im);
    nd.hr = g.spacing_right(i);
    if (!(nd.hl > 0.0) || !(nd.hr > 0.0)) {
      throw InvalidArgument("RhsEvaluator: repeated or unordered nodes near index " + std::to_string(i));
    }
    nd.uniform = nd.hl == nd.hr;
    const double hl = nd.hl, hr = nd.hr, hs = hl + hr;
    nd.d1m = -hr / (hl * hs);
    nd.d1p = hl / (hr * hs);
    nd.imm = nd.im == 0 ? n - 1 : nd.im - 1;
    nd.ipp = nd.ip + 1 == n ? 0 : nd.ip + 1;
    if (periodic_ && !nd.uniform && n >= 5) {
      const double hll = g.spacing_right(nd.imm);
      const double hrr = g.spacing_right(nd.ip);
      five_point_second_derivative(hll, hl, hr, hrr, nd.w2);
    }
  }
}

void RhsEvaluator::operator()(std::span<const double> u, std::span<double> rates) const {
  if (u.size() != nodes_.size() || rates.size() != nodes_.size()) {
    throw InvalidArgument("RhsEvaluator: size mismatch");
  }
  switch (kind_) {
    case RhsKind::heat_laplacian:
      laplacian(u, rates);
      break;
    case RhsKind::semilinear_reaction: {
      laplacian(u, rates);
      const std::size_t lo = periodic_ ? 0 : 1;
      const std::size_t hi = periodic_ ? u.size() : u.size() - 1;
      for (std::size_t i = lo; i < hi; ++i) {
        const double v = u[i];
        rates[i] += p_ == 2.0 ? v * v : p_ == 3.0 ? v * v * v : std::pow(v, p_);
      }
      break;
    }
    case RhsKind::surface_diffusion:
      surface(u, rates);
      break;
  }
}

std::vector<double> RhsEvaluator::operator()(std::span<const double> u) const {
  std::vector<double> out(u.size());
  (*this)(u, out);
  return out;
}

void RhsEvaluator::laplacian(std::span<const double> u, std::span<double> rates) const {
  const std::size_t n = u.size();
  const std::size_t lo = periodic_ ? 0 : 1;
  const std::size_t hi = periodic_ ? n : n - 1;
  if (!periodic_) {
    rates[0] = 0.0;
    rates[n - 1] = 0.0;
  }
  const double a = alpha_;
  for (std::size_t i = lo; i < hi; ++i) {
    const Node& nd = nodes_[i];
    const double um = u[nd.im], uc = u[i], up = u[nd.ip];
    if (nd.uniform) {
      rates[i] = a * (up - 2.0 * uc + um) / (nd.hr * nd.hr);
    } else {
      const double num = (up - uc) * nd.hl + (um - uc) * nd.hr;
      const double den = 0.5 * (nd.hl + nd.hr) * nd.hr * nd.hl;
      rates[i] = a * num / den;
    }
  }
}

void RhsEvaluator::surface(std::span<const double> r, std::span<double> rates) const {
  const std::size_t n = r.size();
  double* G = scratch_g_.data();
  double* H = scratch_h_.data();
  double* F = scratch_f_.data();
  for (std::size_t i = 0; i < n; ++i) {
    const Node& nd = nodes_[i];
    const double rc = r[i];
    if (!(rc > pinch_threshold_)) {
      throw PinchOffReached("surface_diffusion: radius " + std::to_string(rc) + " at node " +
                                std::to_string(i) + " is at or below the pinch threshold",
                            i);
    }
    const double rm = r[nd.im], rp = r[nd.ip];
    double dr, d2r;
    if (nd.uniform) {
      dr = (rp - rm) / (2.0 * nd.hr);
      d2r = (rp - 2.0 * rc + rm) / (nd.hr * nd.hr);
    } else {
      dr = nd.d1m * (rm - rc) + nd.d1p * (rp - rc);
      const double* w = nd.w2;
      d2r = w[0] * (r[nd.imm] - rc) + w[1] * (rm - rc) + w[3] * (rp - rc) + w[4] * (r[nd.ipp] - rc);
    }
    const double q = 1.0 + dr * dr;
    const double sq = std::sqrt(q);
    G[i] = rc / sq;
    H[i] = 1.0 / (rc * sq) - d2r / (q * sq);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Node& nd = nodes_[i];
    const double dh = nd.uniform ? (H[nd.ip] - H[nd.im]) / (2.0 * nd.hr)
                                 : nd.d1m * (H[nd.im] - H[i]) + nd.d1p * (H[nd.ip] - H[i]);
    F[i] = G[i] * dh;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Node& nd = nodes_[i];
    rates[i] = (F[nd.ip] - F[nd.im]) / ((nd.hl + nd.hr) * r[i]);
  }
}

double RhsEvaluator::max_eigenvalue(std::span<const double> u) const {
  if (kind_ != RhsKind::surface_diffusion) {
    const double h = grid_->min_spacing();
    return 4.0 * alpha_ / (h * h);
  }
  if (u.size() != nodes_.size()) throw InvalidArgument("max_eigenvalue: size mismatch");
  double best = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& nd = nodes_[i];
    if (!(u[i] > 0.0)) {
      throw InvalidArgument("max_eigenvalue: surface diffusion needs positive radii");
    }
    const double dr = nd.uniform ? (u[nd.ip] - u[nd.im]) / (2.0 * nd.hr)
                                 : nd.d1m * (u[nd.im] - u[i]) + nd.d1p * (u[nd.ip] - u[i]);
    const double q = 1.0 + dr * dr;
    const double h = std::min(nd.hl, nd.hr);
    const double h2 = h * h;
    best = std::max(best, 4.0 / (q * q * h2 * h2));
  }
  return 2.0 * best;
}

std::vector<double> laplacian_nonuniform(const Field& f, double alpha) {
  return RhsEvaluator::heat(f.grid_ptr(), alpha)(f.values());
}

std::vector<double> surface_diffusion_rhs(const Field& f) {
  return RhsEvaluator::surface_diffusion(f.grid_ptr())(f.values());
}

double max_eigenvalue_estimate(const Field& f, const RhsEvaluator& rhs) {
  return rhs.max_eigenvalue(f.values());
}

}  // namespace sts
