#include "sts/implicit.hpp"

#include <algorithm>
#include <cmath>

#include "sts/errors.hpp"

namespace sts {

BandedMatrix::BandedMatrix(std::size_t n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ld_(static_cast<std::size_t>(2 * kl + ku + 1)), ab_(ld_ * n, 0.0) {
  if (n == 0 || kl < 0 || ku < 0) throw InvalidArgument("BandedMatrix: bad dimensions");
}

bool BandedMatrix::in_band(std::size_t i, std::size_t j) const noexcept {
  const long d = static_cast<long>(j) - static_cast<long>(i);
  return i < n_ && j < n_ && d >= -kl_ && d <= ku_;
}

double& BandedMatrix::at(std::size_t i, std::size_t j) {
  if (!in_band(i, j)) {
    throw InvalidArgument("BandedMatrix: (" + std::to_string(i) + ", " + std::to_string(j) + ") outside band");
  }
  if (factorized_) throw InvalidArgument("BandedMatrix: already factorized");
  return raw(i, j);
}

double BandedMatrix::get(std::size_t i, std::size_t j) const { return in_band(i, j) ? raw(i, j) : 0.0; }

void BandedMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j0 = i > static_cast<std::size_t>(kl_) ? i - kl_ : 0;
    const std::size_t j1 = std::min(n_ - 1, i + ku_);
    double acc = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) acc += raw(i, j) * x[j];
    y[i] = acc;
  }
}

void BandedMatrix::factorize() {
  if (factorized_) return;
  piv_.resize(n_);
  const std::size_t kl = kl_;
  std::size_t ju = 0;
  for (std::size_t j = 0; j < n_; ++j) {
    const std::size_t km = std::min(kl, n_ - 1 - j);
    std::size_t jp = 0;
    double best = std::abs(raw(j, j));
    for (std::size_t r = 1; r <= km; ++r) {
      const double v = std::abs(raw(j + r, j));
      if (v > best) {
        best = v;
        jp = r;
      }
    }
    piv_[j] = j + jp;
    if (best == 0.0) throw SingularMatrix("BandedMatrix: zero pivot in column " + std::to_string(j));
    ju = std::max(ju, std::min(j + ku_ + jp, n_ - 1));
    if (jp != 0) {
      for (std::size_t c = j; c <= ju; ++c) std::swap(raw(j, c), raw(j + jp, c));
    }
    if (km > 0) {
      const double inv = 1.0 / raw(j, j);
      for (std::size_t r = 1; r <= km; ++r) raw(j + r, j) *= inv;
      for (std::size_t c = j + 1; c <= ju; ++c) {
        const double ujc = raw(j, c);
        if (ujc == 0.0) continue;
        for (std::size_t r = 1; r <= km; ++r) raw(j + r, c) -= raw(j + r, j) * ujc;
      }
    }
  }
  factorized_ = true;
}

void BandedMatrix::solve(std::span<double> b) const {
  if (!factorized_) throw InvalidArgument("BandedMatrix: solve before factorize");
  if (b.size() != n_) throw InvalidArgument("BandedMatrix: rhs size mismatch");
  const std::size_t kl = kl_;
  for (std::size_t j = 0; j + 1 < n_; ++j) {
    const std::size_t lm = std::min(kl, n_ - 1 - j);
    if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
    const double bj = b[j];
    if (bj == 0.0) continue;
    for (std::size_t r = 1; r <= lm; ++r) b[j + r] -= raw(j + r, j) * bj;
  }
  const std::size_t kv = kl_ + ku_;
  for (std::size_t j = n_; j-- > 0;) {
    b[j] /= raw(j, j);
    const double bj = b[j];
    if (bj == 0.0) continue;
    const std::size_t i0 = j > kv ? j - kv : 0;
    for (std::size_t i = i0; i < j; ++i) b[i] -= raw(i, j) * bj;
  }
}

// ---------------------------------------------------------------------------

namespace {

// In-place LU with partial pivoting of a small dense row-major matrix.
void dense_lu(std::vector<double>& a, std::vector<std::size_t>& piv, std::size_t k) {
  piv.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < k; ++r) {
      if (std::abs(a[r * k + c]) > std::abs(a[p * k + c])) p = r;
    }
    piv[c] = p;
    if (a[p * k + c] == 0.0) throw SingularMatrix("cyclic solve: singular capacitance matrix");
    if (p != c) {
      for (std::size_t j = 0; j < k; ++j) std::swap(a[c * k + j], a[p * k + j]);
    }
    for (std::size_t r = c + 1; r < k; ++r) {
      const double m = a[r * k + c] /= a[c * k + c];
      for (std::size_t j = c + 1; j < k; ++j) a[r * k + j] -= m * a[c * k + j];
    }
  }
}

void dense_solve(const std::vector<double>& a, const std::vector<std::size_t>& piv, std::size_t k, double* b) {
  for (std::size_t c = 0; c < k; ++c) {
    if (piv[c] != c) std::swap(b[c], b[piv[c]]);
    for (std::size_t r = c + 1; r < k; ++r) b[r] -= a[r * k + c] * b[c];
  }
  for (std::size_t c = k; c-- > 0;) {
    for (std::size_t j = c + 1; j < k; ++j) b[c] -= a[c * k + j] * b[j];
    b[c] /= a[c * k + c];
  }
}

}  // namespace

CyclicBandedMatrix::CyclicBandedMatrix(std::size_t n, int bw) : n_(n), bw_(bw), band_(n, bw, bw) {
  if (bw < 1 || n < static_cast<std::size_t>(2 * bw + 2)) {
    throw InvalidArgument("CyclicBandedMatrix: need n >= 2 bw + 2");
  }
  const std::size_t b = bw;
  for (std::size_t i = 0; i < b; ++i) corner_rows_.push_back(i);
  for (std::size_t i = n - b; i < n; ++i) corner_rows_.push_back(i);
  corner_cols_ = corner_rows_;
  corner_vals_.assign(corner_rows_.size(), std::vector<double>(corner_cols_.size(), 0.0));
}

double& CyclicBandedMatrix::at(std::size_t i, std::size_t j) {
  if (i >= n_ || j >= n_) throw InvalidArgument("CyclicBandedMatrix: index out of range");
  const long d = static_cast<long>(j) - static_cast<long>(i);
  if (std::abs(d) <= bw_) return band_.at(i, j);
  if (static_cast<long>(n_) - std::abs(d) > bw_) {
    throw InvalidArgument("CyclicBandedMatrix: (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") outside cyclic band");
  }
  if (factorized_) throw InvalidArgument("CyclicBandedMatrix: already factorized");
  const std::size_t b = bw_;
  const std::size_t ri = i < b ? i : b + (i - (n_ - b));
  const std::size_t cj = j < b ? j : b + (j - (n_ - b));
  return corner_vals_[ri][cj];
}

void CyclicBandedMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  band_.multiply(x, y);
  for (std::size_t r = 0; r < corner_rows_.size(); ++r) {
    for (std::size_t c = 0; c < corner_cols_.size(); ++c) y[corner_rows_[r]] += corner_vals_[r][c] * x[corner_cols_[c]];
  }
}

void CyclicBandedMatrix::factorize() {
  if (factorized_) return;
  band_.factorize();
  const std::size_t k = corner_rows_.size();
  z_.assign(n_ * k, 0.0);
  std::vector<double> col(n_);
  for (std::size_t c = 0; c < k; ++c) {
    std::fill(col.begin(), col.end(), 0.0);
    col[corner_rows_[c]] = 1.0;
    band_.solve(col);
    for (std::size_t i = 0; i < n_; ++i) z_[i * k + c] = col[i];
  }
  // capacitance I + C V^T Z
  capacity_.assign(k * k, 0.0);
  for (std::size_t r = 0; r < k; ++r) {
    capacity_[r * k + r] = 1.0;
    for (std::size_t c = 0; c < k; ++c) {
      double acc = 0.0;
      for (std::size_t m = 0; m < k; ++m) acc += corner_vals_[r][m] * z_[corner_cols_[m] * k + c];
      capacity_[r * k + c] += acc;
    }
  }
  dense_lu(capacity_, cap_piv_, k);
  factorized_ = true;
}

void CyclicBandedMatrix::solve(std::span<double> b) const {
  if (!factorized_) throw InvalidArgument("CyclicBandedMatrix: solve before factorize");
  band_.solve(b);
  const std::size_t k = corner_rows_.size();
  std::vector<double> t(k, 0.0);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t m = 0; m < k; ++m) t[r] += corner_vals_[r][m] * b[corner_cols_[m]];
  }
  dense_solve(capacity_, cap_piv_, k, t.data());
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < k; ++c) acc += z_[i * k + c] * t[c];
    b[i] -= acc;
  }
}

// ---------------------------------------------------------------------------

namespace {

struct LaplacianRow {
  double wm, wc, wp;
};

LaplacianRow laplacian_row(const Grid1D& g, std::size_t i) {
  const std::size_t n = g.size();
  const double hl = g.spacing_right(i == 0 ? n - 1 : i - 1);
  const double hr = g.spacing_right(i);
  if (hl == hr) {
    const double inv = 1.0 / (hr * hr);
    return {inv, -2.0 * inv, inv};
  }
  const double den = 0.5 * (hl + hr) * hr * hl;
  return {hr / den, -(hl + hr) / den, hl / den};
}

}  // namespace

Field semiimplicit_heat_step(const Field& f, double p, double alpha, double dt, bool reaction) {
  if (!(dt > 0.0)) throw InvalidArgument("semiimplicit_heat_step: dt must be positive");
  if (reaction && !(p > 1.0)) throw InvalidArgument("semiimplicit_heat_step: p must exceed 1");
  const Grid1D& g = f.grid();
  const std::size_t n = g.size();
  std::vector<double> rhs(f.values().begin(), f.values().end());
  if (reaction) {
    for (double& v : rhs) v += dt * (p == 2.0 ? v * v : p == 3.0 ? v * v * v : std::pow(v, p));
  }
  const double s = dt * alpha;
  if (g.periodic()) {
    CyclicBandedMatrix a(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
      const LaplacianRow w = laplacian_row(g, i);
      a.at(i, i == 0 ? n - 1 : i - 1) = -s * w.wm;
      a.at(i, i) = 1.0 - s * w.wc;
      a.at(i, i + 1 == n ? 0 : i + 1) = -s * w.wp;
    }
    a.factorize();
    a.solve(rhs);
  } else {
    BandedMatrix a(n, 1, 1);
    a.at(0, 0) = 1.0;
    a.at(n - 1, n - 1) = 1.0;
    rhs.front() = 0.0;
    rhs.back() = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const LaplacianRow w = laplacian_row(g, i);
      a.at(i, i - 1) = -s * w.wm;
      a.at(i, i) = 1.0 - s * w.wc;
      a.at(i, i + 1) = -s * w.wp;
    }
    a.factorize();
    a.solve(rhs);
  }
  return f.with_values(std::move(rhs), f.time() + dt);
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kSurfBand = RhsEvaluator::kSurfaceCoupling;

// Columns j mod 9 share a colour; the up to eight columns past the last full
// block of 9 get colours of their own so no two same-colour columns sit
// within cyclic distance 8.
std::vector<std::vector<std::size_t>> colour_groups(std::size_t n) {
  const std::size_t width = 2 * kSurfBand + 1;
  const std::size_t full = n - n % width;
  std::vector<std::vector<std::size_t>> groups(width + n % width);
  for (std::size_t j = 0; j < n; ++j) groups[j < full ? j % width : width + (j - full)].push_back(j);
  return groups;
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// One backward Euler solve without retries; returns false on divergence.
bool newton_solve(const RhsEvaluator& rhs, std::span<const double> r0, double dt, const NewtonOptions& opts,
                  std::vector<double>& r, int& iterations) {
  const std::size_t n = r0.size();
  const auto groups = colour_groups(n);
  const double scale = std::max(1.0, inf_norm(r0));
  r.assign(r0.begin(), r0.end());
  std::vector<double> f0(n), fp(n), res(n), rp(n);
  double last = INFINITY;
  for (int it = 0; it <= opts.max_iterations; ++it) {
    try {
      rhs(r, f0);
    } catch (const PinchOffReached&) {
      return false;
    }
    for (std::size_t i = 0; i < n; ++i) res[i] = r[i] - r0[i] - dt * f0[i];
    const double norm = inf_norm(res);
    ++iterations;
    if (!std::isfinite(norm)) return false;
    if (norm <= opts.tolerance * scale) return true;
    if (it == opts.max_iterations || norm > 1e3 * last) return false;
    last = norm;

    CyclicBandedMatrix jac(n, kSurfBand);
    for (std::size_t i = 0; i < n; ++i) jac.at(i, i) = 1.0;
    for (const auto& group : groups) {
      rp = r;
      for (std::size_t j : group) rp[j] += 1.4901161193847656e-08 * std::abs(r[j]);
      try {
        rhs(rp, fp);
      } catch (const PinchOffReached&) {
        return false;
      }
      for (std::size_t j : group) {
        const double eps = rp[j] - r[j];
        for (int d = -kSurfBand; d <= kSurfBand; ++d) {
          const std::size_t i = (j + n + d) % n;
          jac.at(i, j) -= dt * (fp[i] - f0[i]) / eps;
        }
      }
    }
    try {
      jac.factorize();
    } catch (const SingularMatrix&) {
      return false;
    }
    for (double& v : res) v = -v;
    jac.solve(res);
    for (std::size_t i = 0; i < n; ++i) {
      r[i] += res[i];
      if (!(r[i] > 0.0) || !std::isfinite(r[i])) return false;
    }
  }
  return false;
}

Field be_step(const RhsEvaluator& rhs, const Field& f, double dt, const NewtonOptions& opts, NewtonStats& stats,
              int depth) {
  std::vector<double> r;
  int iterations = 0;
  const bool ok = newton_solve(rhs, f.values(), dt, opts, r, iterations);
  stats.iterations += iterations;
  if (ok) return f.with_values(std::move(r), f.time() + dt);
  if (depth >= opts.max_halvings) {
    throw NewtonDivergence("backward Euler: Newton failed after " + std::to_string(depth) + " halvings of dt");
  }
  ++stats.halvings;
  const Field mid = be_step(rhs, f, 0.5 * dt, opts, stats, depth + 1);
  return be_step(rhs, mid, 0.5 * dt, opts, stats, depth + 1);
}

}  // namespace

Field backward_euler_surfdiff_step(const Field& f, double dt, const NewtonOptions& opts, NewtonStats* stats) {
  if (!(dt > 0.0)) throw InvalidArgument("backward_euler_surfdiff_step: dt must be positive");
  const RhsEvaluator rhs = RhsEvaluator::surface_diffusion(f.grid_ptr());
  NewtonStats local;
  Field out = be_step(rhs, f, dt, opts, local, 0);
  if (stats) {
    stats->iterations += local.iterations;
    stats->halvings += local.halvings;
  }
  return out;
}

}  // namespace sts
