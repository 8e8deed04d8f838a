#include "sts/convergence.hpp"

#include <cmath>
#include <numbers>

#include "sts/diagnostics.hpp"
#include "sts/errors.hpp"
#include "sts/operators.hpp"

namespace sts {

ConvergenceStudy heat_convergence(SchemeFamily family, int s, int n_intervals, double t_end, double dt0,
                                  int halvings) {
  if (halvings < 4) throw InvalidArgument("heat_convergence: need at least 4 halvings for a fit");
  const SchemeSpec spec(family, s);
  const GridPtr grid = make_grid(Grid1D::uniform(1.0, n_intervals, Boundary::dirichlet_zero));
  const RhsEvaluator heat = RhsEvaluator::heat(grid, 1.0);
  const double h = grid->base_spacing();
  const double sn = std::sin(0.5 * std::numbers::pi * h);
  const double lambda_h = 4.0 * sn * sn / (h * h);
  const std::size_t n = grid->size();

  std::vector<double> u0(n), exact(n);
  for (std::size_t i = 0; i < n; ++i) {
    u0[i] = std::sin(std::numbers::pi * grid->x(i));
    exact[i] = std::exp(-lambda_h * t_end) * u0[i];
  }
  u0.front() = u0.back() = exact.front() = exact.back() = 0.0;

  ConvergenceStudy study{family, s, {}, 0.0};
  std::vector<double> dts, errs;
  StageWorkspace ws;
  const RhsFunction f = [&heat](std::span<const double> v, std::span<double> r) { heat(v, r); };
  for (int k = 0; k <= halvings; ++k) {
    const double dt = dt0 / std::ldexp(1.0, k);
    const long steps = std::lround(t_end / dt);
    if (std::abs(steps * dt - t_end) > 1e-12 * t_end) {
      throw InvalidArgument("heat_convergence: t_end must be a multiple of dt0");
    }
    if (dt > stability_limit(spec, heat.max_eigenvalue(u0))) {
      throw InvalidArgument("heat_convergence: dt0 exceeds the stability limit");
    }
    std::vector<double> u = u0, next(n);
    for (long m = 0; m < steps; ++m) {
      superstep(spec, u, next, f, dt, ws);
      u.swap(next);
    }
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(u[i] - exact[i]));
    study.rows.push_back({dt, err});
    dts.push_back(dt);
    errs.push_back(err);
  }
  study.order = loglog_slope(dts, errs).slope;
  return study;
}

}  // namespace sts
