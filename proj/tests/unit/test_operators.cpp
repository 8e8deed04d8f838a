#include <doctest.h>

#include <cmath>
#include <random>

#include "sts/errors.hpp"
#include "sts/grid.hpp"
#include "sts/operators.hpp"

using namespace sts;

namespace {

GridPtr uniform(double a, int n, Boundary bc) { return make_grid(Grid1D::uniform(a, n, bc)); }

GridPtr refined(double a, int n, Boundary bc, int levels) {
  Grid1D g = Grid1D::uniform(a, n, bc);
  for (int i = 0; i < levels; ++i) g = g.refine_middle_half();
  return make_grid(std::move(g));
}

std::vector<double> sample(const Grid1D& g, double (*f)(double)) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(g.x(i));
  return v;
}

// Uniform periodic surface-diffusion rates written straight from the
// three-point formulas:
//   rate_m = [G_{m+1} (H_{m+2} - H_m) / 2h - G_{m-1} (H_m - H_{m-2}) / 2h] / (2 r_m h)
//   G = r / sqrt(1 + dr^2),  H = 1 / (r sqrt(1 + dr^2)) - d2r / (1 + dr^2)^{3/2}
std::vector<double> surface_rates_by_hand(const std::vector<double>& r, double h) {
  const long n = static_cast<long>(r.size());
  auto at = [n](const std::vector<double>& v, long i) { return v[static_cast<std::size_t>(((i % n) + n) % n)]; };
  std::vector<double> G(r.size()), H(r.size()), out(r.size());
  for (long m = 0; m < n; ++m) {
    const double dr = (at(r, m + 1) - at(r, m - 1)) / (2 * h);
    const double ddr = (at(r, m + 1) - 2 * at(r, m) + at(r, m - 1)) / (h * h);
    const double q = 1 + dr * dr;
    G[m] = at(r, m) / std::sqrt(q);
    H[m] = 1 / (at(r, m) * std::sqrt(q)) - ddr / (q * std::sqrt(q));
  }
  for (long m = 0; m < n; ++m) {
    const double plus = at(G, m + 1) * ((at(H, m + 2) - at(H, m)) / (2 * h));
    const double minus = at(G, m - 1) * ((at(H, m) - at(H, m - 2)) / (2 * h));
    out[m] = (plus - minus) / (2 * at(r, m) * h);
  }
  return out;
}

}  // namespace

TEST_SUITE("operators") {
  TEST_CASE("delta on a uniform grid gives the classical stencil") {
    const GridPtr g = uniform(1.0, 16, Boundary::dirichlet_zero);
    const double h = g->min_spacing(), alpha = 0.7;
    std::vector<double> u(g->size(), 0.0);
    u[8] = 1.0;
    const auto r = laplacian_nonuniform(Field(g, u), alpha);
    CHECK(r[8] == alpha * -2.0 / (h * h));
    CHECK(r[7] == alpha / (h * h));
    CHECK(r[9] == alpha / (h * h));
    CHECK(r[6] == 0.0);
  }

  TEST_CASE("uniform laplacian equals the (1,-2,1)/h^2 stencil bit for bit") {
    const GridPtr g = uniform(1.0, 64, Boundary::dirichlet_zero);
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> d(-1, 1);
    std::vector<double> u(g->size());
    for (auto& v : u) v = d(gen);
    const double h = g->min_spacing();
    const auto r = laplacian_nonuniform(Field(g, u), 1.0);
    for (std::size_t i = 1; i + 1 < u.size(); ++i) CHECK(r[i] == (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h));
    CHECK(r.front() == 0.0);
    CHECK(r.back() == 0.0);
  }

  TEST_CASE("laplacian is exact on quadratics across refinement interfaces") {
    const GridPtr g = refined(1.0, 16, Boundary::dirichlet_zero, 4);
    const auto u = sample(*g, [](double x) { return x * x - 0.25 * x + 3.0; });
    const auto r = laplacian_nonuniform(Field(g, u), 1.5);
    for (std::size_t i = 1; i + 1 < u.size(); ++i) CHECK(r[i] == doctest::Approx(3.0).epsilon(1e-9));
  }

  TEST_CASE("laplacian of sin(pi x) at h = 1/64") {
    const GridPtr g = uniform(1.0, 128, Boundary::dirichlet_zero);
    const auto u = sample(*g, [](double x) { return std::sin(M_PI * x); });
    const auto r = laplacian_nonuniform(Field(g, u), 1.0);
    double err = 0.0;
    for (std::size_t i = 1; i + 1 < u.size(); ++i) err = std::max(err, std::abs(r[i] + M_PI * M_PI * u[i]));
    // truncation error pi^4 h^2 / 12
    const double h = 1.0 / 64;
    CHECK(err <= std::pow(M_PI, 4) * h * h / 12 * 1.0001);
    CHECK(err / (M_PI * M_PI) < 1e-3);
  }

  TEST_CASE("heat eigenvalue bounds") {
    const GridPtr g = uniform(1.0, 32, Boundary::dirichlet_zero);
    const double h = g->min_spacing();
    const std::vector<double> u(g->size(), 1.0);
    CHECK(max_eigenvalue_estimate(Field(g, u), RhsEvaluator::heat(g, 1.0)) == 4.0 / (h * h));
    const GridPtr f = make_grid(g->refine_middle_half());
    const std::vector<double> v(f->size(), 1.0);
    CHECK(max_eigenvalue_estimate(Field(f, v), RhsEvaluator::heat(f, 1.0)) == 16.0 / (h * h));
  }

  TEST_CASE("cylinder is an equilibrium") {
    const GridPtr g = refined(2.0 * M_PI, 64, Boundary::periodic, 2);
    const std::vector<double> r(g->size(), 0.8);
    for (double v : surface_diffusion_rhs(Field(g, r))) CHECK(v == 0.0);
  }

  TEST_CASE("uniform surface rates match the hand-written formulas") {
    const GridPtr g = uniform(2.0 * M_PI, 64, Boundary::periodic);
    const auto r = sample(*g, [](double z) { return 1.0 + 0.3 * std::cos(z / 2) + 0.1 * std::sin(z); });
    const auto got = surface_diffusion_rhs(Field(g, r));
    const auto want = surface_rates_by_hand(r, g->min_spacing());
    double scale = 0.0;
    for (double w : want) scale = std::max(scale, std::abs(w));
    double err = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) err = std::max(err, std::abs(got[i] - want[i]));
    CHECK(err <= 1e-14 * scale);
  }

  TEST_CASE("rate error stays bounded at refinement interfaces") {
    auto shape = [](double z) { return 1.0 + 0.3 * std::cos(z / 2) + 0.05 * std::sin(z); };
    double prev = 0.0;
    for (int n : {64, 128, 256, 512}) {
      const GridPtr g = refined(2.0 * M_PI, n, Boundary::periodic, 2);
      const GridPtr ref = uniform(2.0 * M_PI, 16 * n, Boundary::periodic);
      std::vector<double> r(g->size()), rr(ref->size());
      for (std::size_t i = 0; i < r.size(); ++i) r[i] = shape(g->x(i));
      for (std::size_t i = 0; i < rr.size(); ++i) rr[i] = shape(ref->x(i));
      const auto a = surface_diffusion_rhs(Field(g, r));
      const auto b = surface_diffusion_rhs(Field(ref, rr));
      double err = 0.0;
      for (std::size_t i = 0, j = 0; i < r.size(); ++i) {
        while (ref->unit(j) != g->unit(i)) ++j;
        err = std::max(err, std::abs(a[i] - b[j]));
      }
      // second order in the uniform stretches, O(1) with a small constant at interfaces
      CHECK(err < 5e-3);
      if (prev > 0.0) CHECK(err < 1.5 * prev);
      prev = err;
    }
  }

  TEST_CASE("sphere rates vanish at second order") {
    // r^2 + z^2 = 4 on |z| <= 1, sampled periodically; only nodes far from the wrap are checked
    double prev = 0.0;
    for (int n : {32, 64, 128, 256}) {
      const GridPtr g = uniform(1.0, n, Boundary::periodic);
      const auto r = sample(*g, [](double z) { return std::sqrt(4.0 - z * z); });
      const auto rates = surface_diffusion_rhs(Field(g, r));
      double err = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (std::abs(g->x(i)) <= 0.5) err = std::max(err, std::abs(rates[i]));
      }
      if (prev > 0.0) {
        const double order = std::log2(prev / err);
        CHECK(std::abs(order - 2.0) <= 0.1);
      }
      prev = err;
    }
  }

  TEST_CASE("non-positive radius signals pinch-off") {
    const GridPtr g = uniform(2.0 * M_PI, 16, Boundary::periodic);
    std::vector<double> r(g->size(), 1.0);
    r[5] = 0.0;
    try {
      surface_diffusion_rhs(Field(g, r));
      FAIL("expected PinchOffReached");
    } catch (const PinchOffReached& e) {
      CHECK(e.node() == 5);
    }
    r[5] = -0.1;
    CHECK_THROWS_AS(max_eigenvalue_estimate(Field(g, r), RhsEvaluator::surface_diffusion(g)), InvalidArgument);
  }

  TEST_CASE("surface eigenvalue bound is within a factor 4 of the Jacobian spectrum") {
    const GridPtr g = uniform(1.0, 32, Boundary::periodic);
    const std::size_t n = g->size();
    const RhsEvaluator rhs = RhsEvaluator::surface_diffusion(g);
    const std::vector<double> r(n, 1.0);
    // finite-difference Jacobian, then power iteration
    std::vector<std::vector<double>> J(n, std::vector<double>(n));
    const double eps = 1e-7;
    for (std::size_t j = 0; j < n; ++j) {
      auto rp = r, rm = r;
      rp[j] += eps;
      rm[j] -= eps;
      const auto fp = rhs(rp), fm = rhs(rm);
      for (std::size_t i = 0; i < n; ++i) J[i][j] = (fp[i] - fm[i]) / (2 * eps);
    }
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = ((i * 7919) % 13) - 6.0;
    double lam = 0.0;
    for (int it = 0; it < 2000; ++it) {
      std::vector<double> w(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w[i] += J[i][j] * v[j];
      double norm = 0.0;
      for (double x : w) norm += x * x;
      norm = std::sqrt(norm);
      double vn = 0.0;
      for (double x : v) vn += x * x;
      lam = norm / std::sqrt(vn);
      for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
    }
    const double bound = rhs.max_eigenvalue(r);
    CHECK(bound >= lam);
    CHECK(bound <= 4.0 * lam);
  }

  TEST_CASE("periodic enclosed-volume proxy is conserved") {
    auto volume_rate = [](const GridPtr& g) {
      const auto r = sample(*g, [](double z) { return 1.0 + 0.3 * std::cos(z / 2); });
      const auto rates = surface_diffusion_rhs(Field(g, r));
      double dv = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        const double w = 0.5 * (g->spacing_right(i) + g->spacing_right(i == 0 ? r.size() - 1 : i - 1));
        dv += 2.0 * r[i] * rates[i] * w;
      }
      return std::abs(dv);
    };
    // the outer difference telescopes, uniform or not
    CHECK(volume_rate(uniform(2.0 * M_PI, 128, Boundary::periodic)) < 1e-12);
    for (int n : {64, 128, 256}) CHECK(volume_rate(refined(2.0 * M_PI, n, Boundary::periodic, 3)) < 1e-12);
  }

  TEST_CASE("evaluators reject unsupported setups") {
    CHECK_THROWS_AS(RhsEvaluator::surface_diffusion(uniform(1.0, 8, Boundary::dirichlet_zero)), InvalidArgument);
    CHECK_THROWS_AS(RhsEvaluator::semilinear(uniform(1.0, 8, Boundary::dirichlet_zero), 1.0, 1.0), InvalidArgument);
  }
}
