#include <doctest.h>

#include <cmath>
#include <random>

#include "sts/convergence.hpp"
#include "sts/errors.hpp"
#include "sts/schemes.hpp"
#include "../common/dense_scheme.hpp"

using namespace sts;

namespace {

constexpr SchemeFamily kFamilies[] = {SchemeFamily::rkl1, SchemeFamily::rkl2, SchemeFamily::rkg1, SchemeFamily::rkg2};

using namespace sts::testing;

Matrix periodic_heat(std::size_t n, double h) {
  Matrix M(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    M[i][i] = -2.0 / (h * h);
    M[i][(i + 1) % n] += 1.0 / (h * h);
    M[i][(i + n - 1) % n] += 1.0 / (h * h);
  }
  return M;
}

std::vector<double> apply(const SchemeSpec& spec, const Matrix& M, std::vector<double> u, double dt) {
  std::vector<double> out(u.size());
  StageWorkspace ws;
  superstep(spec, u, out, matrix_rhs(M), dt, ws);
  return out;
}

}  // namespace

TEST_SUITE("schemes") {
  TEST_CASE("family names and stage minimums") {
    CHECK(parse_family("RKG2") == SchemeFamily::rkg2);
    CHECK(to_string(SchemeFamily::rkl1) == "rkl1");
    CHECK_THROWS_AS(parse_family("rkc"), InvalidArgument);
    CHECK(min_stages(SchemeFamily::rkl1) == 1);
    CHECK(min_stages(SchemeFamily::rkg2) == 2);
    CHECK_THROWS_AS(SchemeSpec(SchemeFamily::rkg2, 1), InvalidArgument);
    CHECK_THROWS_AS(SchemeSpec(SchemeFamily::rkl2, 1), InvalidArgument);
    CHECK_NOTHROW(SchemeSpec(SchemeFamily::rkg1, 1));
  }

  TEST_CASE("stability limits") {
    const double h = 1.0 / 64, lam = 4.0 / (h * h);
    CHECK(stability_limit(SchemeSpec(SchemeFamily::rkl1, 1), lam) == doctest::Approx(h * h / 2));
    CHECK(stability_cfl_limit(SchemeFamily::rkl2, 2) == 0.5);
    CHECK(stability_cfl_limit(SchemeFamily::rkg1, 2) == 10.0 / 8);
    CHECK(stability_cfl_limit(SchemeFamily::rkg2, 2) == 0.5);
    CHECK(stability_cfl_limit(SchemeFamily::rkl1, 10) == 27.5);
  }

  TEST_CASE("choose_stages") {
    const double lam = 4096.0;
    const double at9 = stability_limit(SchemeSpec(SchemeFamily::rkl2, 9), lam);
    CHECK(choose_stages(SchemeFamily::rkl2, at9, lam, 2, 200).s == 9);
    // 100x the forward Euler limit: c = 50, s^2 + s >= 200
    const double fe = stability_limit(SchemeSpec(SchemeFamily::rkl1, 1), lam);
    const StageChoice c = choose_stages(SchemeFamily::rkl1, 100 * fe, lam, 1, 200);
    CHECK(c.s == 14);
    CHECK_FALSE(c.reduced);
    CHECK(stability_cfl_limit(SchemeFamily::rkl1, 13) < 50.0);
    CHECK(choose_stages(SchemeFamily::rkg1, 1e-12, lam, 3, 200).s == 3);
    const StageChoice cut = choose_stages(SchemeFamily::rkl2, 1.0, lam, 2, 10);
    CHECK(cut.reduced);
    CHECK(cut.s == 10);
    CHECK(cut.dt == stability_limit(SchemeSpec(SchemeFamily::rkl2, 10), lam));
  }

  TEST_CASE("R_s(0) = 1 and the Gegenbauer normalization") {
    for (auto f : kFamilies)
      for (int s = min_stages(f); s <= 64; ++s) CHECK(stability_polynomial_value(SchemeSpec(f, s), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (int s = 1; s <= 10; ++s) {
      const auto c = gegenbauer_normalized(s);
      double sum = 0.0;
      for (double v : c) sum += v;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    }
  }

  TEST_CASE("|R_s| <= 1 across each stability interval") {
    for (auto f : kFamilies) {
      for (int s : {2, 5, 17, 64}) {
        const SchemeSpec spec(f, s);
        const double zmin = -4.0 * stability_cfl_limit(f, s);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
          const double z = zmin * k / 999.0;
          worst = std::max(worst, std::abs(stability_polynomial_value(spec, z)));
        }
        CHECK(worst <= 1.0 + 1e-12);
      }
    }
  }

  TEST_CASE("scalar polynomial agrees with the dense closed form") {
    for (auto f : kFamilies) {
      for (int s = min_stages(f); s <= 8; ++s) {
        for (double z : {-0.3, -2.0, -4.0 * stability_cfl_limit(f, s)}) {
          const Matrix one = {{z}};
          CHECK(stability_polynomial_value(SchemeSpec(f, s), z) == doctest::Approx(dense_scheme(f, s, one, 1.0)[0][0]).epsilon(1e-12));
        }
      }
    }
  }

  TEST_CASE("superstep equals the dense polynomial of a circulant matrix") {
    std::mt19937 gen(2024);
    std::uniform_real_distribution<double> d(-0.4, 0.4);
    for (std::size_t n = 3; n <= 9; ++n) {
      Matrix M;
      const double lam = random_circulant(n, gen, M);
      std::vector<double> u(n);
      for (auto& v : u) v = d(gen);
      for (auto f : kFamilies) {
        for (int s = min_stages(f); s <= 8; ++s) {
          const double dt = 0.9 * stability_limit(SchemeSpec(f, s), lam);
          CHECK(superstep_dense_error(f, s, M, u, dt) <= 1e-12);
        }
      }
    }
  }

  TEST_CASE("RKL1 with one stage is forward Euler") {
    const Matrix M = periodic_heat(8, 0.25);
    const std::vector<double> u = {1, 2, 0.5, -1, 0.25, 3, 0, 1.5};
    const double dt = 0.01;
    const auto got = apply(SchemeSpec(SchemeFamily::rkl1, 1), M, u, dt);
    std::vector<double> mu(8);
    matrix_rhs(M)(u, mu);
    for (std::size_t i = 0; i < 8; ++i) CHECK(got[i] == doctest::Approx(u[i] + dt * mu[i]).epsilon(1e-15));
  }

  TEST_CASE("RKL1 two-stage stencil") {
    for (double c : {0.25, 0.75, 1.5}) {
      const double h = 0.5;
      const Matrix M = periodic_heat(9, h);
      std::vector<double> delta(9, 0.0);
      delta[4] = 1.0;
      const auto got = apply(SchemeSpec(SchemeFamily::rkl1, 2), M, delta, c * h * h);
      const double expect[] = {c * c / 6, c - 2 * c * c / 3, 1 - 2 * c + c * c, c - 2 * c * c / 3, c * c / 6};
      double sum = 0.0;
      for (int j = 0; j < 5; ++j) {
        CHECK(std::abs(got[2 + j] - expect[j]) <= 1e-14);
        sum += got[2 + j];
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(got[0] == 0.0);
    }
  }

  TEST_CASE("dt = 0 leaves the state unchanged") {
    const Matrix M = periodic_heat(6, 0.1);
    const std::vector<double> u = {0.3, -1.25, 7.0, 1e-3, 2.0, 0.0};
    for (auto f : kFamilies) {
      const auto got = apply(SchemeSpec(f, 7), M, u, 0.0);
      for (std::size_t i = 0; i < u.size(); ++i) CHECK(got[i] == u[i]);
    }
  }

  TEST_CASE("one superstep is a monotone stencil under the CFL limit") {
    const double h = 1.0;
    const std::size_t n = 161;
    const Matrix M = periodic_heat(n, h);
    for (auto f : kFamilies) {
      for (int s : {2, 3, 8, 20}) {
        std::vector<double> delta(n, 0.0);
        delta[n / 2] = 1.0;
        const double dt = stability_limit(SchemeSpec(f, s), 4.0);
        const auto got = apply(SchemeSpec(f, s), M, delta, dt);
        for (double v : got) CHECK(v >= -1e-13);
      }
    }
  }

  TEST_CASE("instability reports the stage") {
    const RhsFunction bad = [](std::span<const double> u, std::span<double> out) {
      for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] > 1.5 ? NAN : 1.0;
    };
    const std::vector<double> u = {1.0, 1.0};
    std::vector<double> out(2);
    StageWorkspace ws;
    try {
      superstep(SchemeSpec(SchemeFamily::rkl1, 6), u, out, bad, 1.0, ws);
      FAIL("expected InstabilityDetected");
    } catch (const InstabilityDetected& e) {
      CHECK(e.stage() >= 1);
    }
  }

  TEST_CASE("temporal convergence orders on the heat eigenmode") {
    for (auto f : kFamilies) {
      const ConvergenceStudy st = heat_convergence(f, 8);
      const double want = is_second_order(f) ? 2.0 : 1.0;
      CHECK(std::abs(st.order - want) <= 0.1);
    }
  }
}
