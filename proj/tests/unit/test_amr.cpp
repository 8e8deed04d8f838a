#include <doctest.h>

#include <cmath>

#include "sts/amr.hpp"
#include "sts/diagnostics.hpp"
#include "sts/errors.hpp"

using namespace sts;

namespace {

// Semilinear state whose half-width is exactly w (u = 1 / (1 + (x/w)^2)).
RunState lorentzian_state(const RunConfig& cfg, double w, double last) {
  RunState st;
  st.grid = make_grid(Grid1D::uniform(cfg.a, cfg.n_intervals, cfg.bc));
  st.u.resize(st.grid->size());
  for (std::size_t i = 0; i < st.u.size(); ++i) {
    const double x = st.grid->x(i) / w;
    st.u[i] = 1.0 / (1.0 + x * x);
  }
  st.dt = cfg.dt0;
  st.s = cfg.s0;
  st.last_trigger_value = last;
  return st;
}

}  // namespace

TEST_SUITE("amr") {
  TEST_CASE("compensated time resolves tiny increments") {
    CompensatedTime t;
    t.add(3e-3);
    CompensatedTime u = t;
    for (int i = 0; i < 1000; ++i) u.add(1e-25);
    CHECK(u.value() == t.value());
    CHECK(u.minus(t) == doctest::Approx(1e-22).epsilon(1e-9));
  }

  TEST_CASE("half-width trigger") {
    const RunConfig cfg = default_config(Problem::semilinear_heat);
    CHECK(check_trigger(lorentzian_state(cfg, 0.19, 0.4), cfg));
    CHECK_FALSE(check_trigger(lorentzian_state(cfg, 0.21, 0.4), cfg));
    const auto v = trigger_value(lorentzian_state(cfg, 0.19, 0.4), cfg);
    REQUIRE(v);
    CHECK(*v == doctest::Approx(0.19).epsilon(1e-4));
  }

  TEST_CASE("undefined half-width never triggers") {
    const RunConfig cfg = default_config(Problem::semilinear_heat);
    RunState st = lorentzian_state(cfg, 0.1, 0.4);
    std::fill(st.u.begin(), st.u.end(), 1.0);
    CHECK_FALSE(trigger_value(st, cfg));
    CHECK_FALSE(check_trigger(st, cfg));
  }

  TEST_CASE("minimum radius trigger") {
    const RunConfig cfg = default_config(Problem::surface_diffusion);
    RunState st = initial_state(cfg);
    const double r0 = st.last_trigger_value;
    CHECK(r0 == doctest::Approx(0.3).epsilon(1e-12));
    CHECK_FALSE(check_trigger(st, cfg));
    for (auto& r : st.u) r = std::max(r * 0.49, 1e-3);
    CHECK(check_trigger(st, cfg));
  }

  TEST_CASE("semilinear schedule") {
    RunConfig cfg = default_config(Problem::semilinear_heat);
    RunState st = initial_state(cfg);
    CHECK(st.s == 200);
    CHECK(st.dt == cfg.dx() / 8);
    const double dt = st.dt;
    apply_refinement(st, cfg);
    CHECK(st.s == 90);
    CHECK(st.refinement_count == 1);
    CHECK(st.grid->finest_level() == 1);
    const double h = st.grid->min_spacing();
    CHECK(st.dt == std::max(dt / 50, cfg.policy.dt_floor_cfl * h * h));
    st.s = 9;
    apply_refinement(st, cfg);
    CHECK(st.s == 5);
    apply_refinement(st, cfg);
    CHECK(st.s == 5);
  }

  TEST_CASE("surface diffusion schedule") {
    const RunConfig cfg = default_config(Problem::surface_diffusion);
    RunState st = initial_state(cfg);
    CHECK(st.s == 70);
    CHECK(st.grid->finest_level() == 1);
    apply_refinement(st, cfg);
    CHECK(st.s == 65);
    CHECK(st.dt == cfg.dt0 / 16);
    for (int i = 0; i < 20; ++i) apply_refinement(st, cfg);
    CHECK(st.s == 5);
  }

  TEST_CASE("initial data") {
    const RunConfig cfg = default_config(Problem::semilinear_heat);
    const RunState st = initial_state(cfg);
    CHECK(st.u[st.grid->center_index()] == doctest::Approx(20.0 - 20.0 / 3.0).epsilon(1e-15));
    CHECK(st.u.front() == 0.0);
    CHECK(st.u.back() == 0.0);
    const RunState sd = initial_state(default_config(Problem::surface_diffusion));
    CHECK(sd.u[sd.grid->center_index()] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(sd.u.front() == doctest::Approx(1.2).epsilon(1e-15));
  }

  TEST_CASE("golden semilinear run to 1e6") {
    RunConfig cfg = default_config(Problem::semilinear_heat);
    cfg.threshold = 1e6;
    const RunReport r = run(cfg);
    CHECK(r.termination == Termination::threshold_reached);
    CHECK(r.final_value >= 1e6);
    CHECK(r.final_value <= 1e6 * (1 + cfg.landing_tolerance));
    CHECK(r.refinements.size() >= 3);
    // frozen from a reference run
    CHECK(r.steps == 4345);
    CHECK(r.refinements.size() == 14);
    CHECK(r.final_time.value() == doctest::Approx(0.0030372076197216712).epsilon(1e-12));
    for (std::size_t i = 1; i < r.refinements.size(); ++i) {
      CHECK(r.refinements[i].trigger_value <= 0.5 * r.refinements[i - 1].trigger_value * (1 + 1e-12));
      CHECK(r.refinements[i].s <= r.refinements[i - 1].s);
    }
    for (std::size_t i = 1; i < r.series.size(); ++i) CHECK(r.series[i].time > r.series[i - 1].time);
  }

  TEST_CASE("pure heat decays and never refines") {
    RunConfig cfg = default_config(Problem::semilinear_heat);
    cfg.reaction = false;
    cfg.n_intervals = 64;
    cfg.dt0 = cfg.dx() / 8;
    cfg.t_final = 0.2;
    const RunReport r = run(cfg);
    CHECK(r.termination == Termination::t_final);
    CHECK(r.refinements.empty());
    for (std::size_t i = 1; i < r.series.size(); ++i) CHECK(r.series[i].value <= r.series[i - 1].value);
    CHECK(r.final_value < r.series.front().value);
  }

  TEST_CASE("fat surface-diffusion neck completes without pinching") {
    RunConfig cfg = default_config(Problem::surface_diffusion);
    cfg.r0_amplitude = 0.2;
    cfg.n_intervals = 64;
    cfg.n_initial_refinements = 0;
    cfg.t_final = 1e-3;
    const RunReport r = run(cfg);
    CHECK(r.termination == Termination::t_final);
    CHECK(r.refinements.empty());
    CHECK(r.final_value > 1.05);
    CHECK(r.final_time.value() == doctest::Approx(1e-3).epsilon(1e-12));
  }

  TEST_CASE("termination names") {
    CHECK(to_string(Termination::pinch_off) == "pinch_off");
    CHECK(is_success(Termination::reaction_blowup));
    CHECK_FALSE(is_success(Termination::instability));
  }
}
