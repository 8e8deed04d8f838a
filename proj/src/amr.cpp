#include "sts/amr.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numbers>

#include "sts/diagnostics.hpp"
#include "sts/errors.hpp"
#include "sts/implicit.hpp"
#include "sts/io.hpp"
#include "sts/operators.hpp"
#include "sts/schemes.hpp"
#include "sts/splitting.hpp"

namespace sts {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::threshold_reached: return "threshold_reached";
    case Termination::reaction_blowup: return "reaction_blowup";
    case Termination::pinch_off: return "pinch_off";
    case Termination::t_final: return "t_final";
    case Termination::max_steps: return "max_steps";
    case Termination::instability: return "instability";
    case Termination::resolution_floor: return "resolution_floor";
    case Termination::newton_failure: return "newton_failure";
  }
  return "?";
}

bool is_success(Termination t) {
  return t == Termination::threshold_reached || t == Termination::reaction_blowup ||
         t == Termination::pinch_off || t == Termination::t_final;
}

void CompensatedTime::add(double dt) {
  const double s = hi + dt;
  const double bp = s - hi;
  const double err = (hi - (s - bp)) + (dt - bp);
  const double l = lo + err;
  hi = s + l;
  lo = l - (hi - s);
}

namespace {

bool semilinear(const RunConfig& cfg) { return cfg.problem == Problem::semilinear_heat; }

double extremum(const RunConfig& cfg, std::span<const double> u) {
  return semilinear(cfg) ? *std::max_element(u.begin(), u.end()) : *std::min_element(u.begin(), u.end());
}

// Progress towards the singularity in decades: log10 max u, or -log10 min r.
double decades(const RunConfig& cfg, double v) { return semilinear(cfg) ? std::log10(v) : -std::log10(v); }

bool reached(const RunConfig& cfg, double v) { return semilinear(cfg) ? v >= cfg.threshold : v <= cfg.threshold; }

bool overshoot(const RunConfig& cfg, double v) {
  if (cfg.landing_tolerance == 0.0) return false;
  return semilinear(cfg) ? v > cfg.threshold * (1.0 + cfg.landing_tolerance)
                         : v < cfg.threshold * (1.0 - cfg.landing_tolerance);
}

std::vector<double> initial_values(const RunConfig& cfg, const Grid1D& g) {
  std::vector<double> u(g.size());
  const double k = std::numbers::pi / cfg.a;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double c = std::cos(k * g.x(i));
    if (semilinear(cfg)) {
      u[i] = cfg.u0_amplitude * (10.0 / (1.0 - 0.5 * c) - 20.0 / 3.0);
    } else {
      u[i] = -cfg.r0_amplitude * (0.25 * c + 0.25) + cfg.r0_offset;
    }
  }
  if (!g.periodic()) {
    u.front() = 0.0;
    u.back() = 0.0;
  }
  return u;
}

// One time integrator bound to the current grid.
class Stepper {
 public:
  virtual ~Stepper() = default;
  virtual void rebuild(const GridPtr& grid) = 0;
  // Spectral bound for stage selection; 0 when the integrator needs none.
  virtual double lambda(std::span<const double> u) const = 0;
  virtual void step(std::vector<double>& u, double dt, int s) = 0;
  long rhs_evaluations = 0;
};

class StsHeatStepper : public Stepper {
 public:
  explicit StsHeatStepper(const RunConfig& cfg) : cfg_(cfg) {}
  void rebuild(const GridPtr& grid) override {
    stepper_ = std::make_unique<StrangStepper>(SchemeSpec(cfg_.family, std::max(cfg_.s0, min_stages(cfg_.family))),
                                               RhsEvaluator::heat(grid, cfg_.alpha), cfg_.p, cfg_.reaction);
  }
  double lambda(std::span<const double> u) const override { return stepper_->diffusion().max_eigenvalue(u); }
  void step(std::vector<double>& u, double dt, int s) override {
    stepper_->set_spec(SchemeSpec(cfg_.family, s));
    stepper_->step(u, dt);
    rhs_evaluations += s;
  }

 private:
  const RunConfig& cfg_;
  std::unique_ptr<StrangStepper> stepper_;
};

class StsSurfaceStepper : public Stepper {
 public:
  explicit StsSurfaceStepper(const RunConfig& cfg) : cfg_(cfg) {}
  void rebuild(const GridPtr& grid) override {
    rhs_ = std::make_unique<RhsEvaluator>(RhsEvaluator::surface_diffusion(grid));
    out_.resize(grid->size());
  }
  double lambda(std::span<const double> u) const override { return rhs_->max_eigenvalue(u); }
  void step(std::vector<double>& u, double dt, int s) override {
    const RhsEvaluator& f = *rhs_;
    superstep(SchemeSpec(cfg_.family, s), u, out_, [&f](std::span<const double> v, std::span<double> r) { f(v, r); },
              dt, ws_);
    u.swap(out_);
    rhs_evaluations += s;
  }

 private:
  const RunConfig& cfg_;
  std::unique_ptr<RhsEvaluator> rhs_;
  StageWorkspace ws_;
  std::vector<double> out_;
};

class SemiImplicitStepper : public Stepper {
 public:
  explicit SemiImplicitStepper(const RunConfig& cfg) : cfg_(cfg) {}
  void rebuild(const GridPtr& grid) override { grid_ = grid; }
  double lambda(std::span<const double>) const override { return 0.0; }
  void step(std::vector<double>& u, double dt, int) override {
    Field next = semiimplicit_heat_step(Field(grid_, u), cfg_.p, cfg_.alpha, dt, cfg_.reaction);
    std::copy(next.values().begin(), next.values().end(), u.begin());
  }

 private:
  const RunConfig& cfg_;
  GridPtr grid_;
};

class BackwardEulerStepper : public Stepper {
 public:
  void rebuild(const GridPtr& grid) override { grid_ = grid; }
  double lambda(std::span<const double>) const override { return 0.0; }
  void step(std::vector<double>& u, double dt, int) override {
    NewtonStats stats;
    Field next = backward_euler_surfdiff_step(Field(grid_, u), dt, NewtonOptions{}, &stats);
    std::copy(next.values().begin(), next.values().end(), u.begin());
    newton_iterations += stats.iterations;
  }
  long newton_iterations = 0;

 private:
  GridPtr grid_;
};

std::unique_ptr<Stepper> make_stepper(const RunConfig& cfg) {
  switch (cfg.integrator) {
    case Integrator::sts:
      if (semilinear(cfg)) return std::make_unique<StsHeatStepper>(cfg);
      return std::make_unique<StsSurfaceStepper>(cfg);
    case Integrator::semi_implicit: return std::make_unique<SemiImplicitStepper>(cfg);
    case Integrator::backward_euler: return std::make_unique<BackwardEulerStepper>();
  }
  return nullptr;
}

// Cheap pre-test for the half-width trigger: the first node right of the
// centre at or below half max brackets the crossing.
bool half_width_may_trigger(const RunState& st) {
  const Grid1D& g = *st.grid;
  const std::size_t c = g.center_index();
  const double half = 0.5 * st.u[c];
  std::size_t k = c;
  while (k + 1 < g.size() && st.u[k] > half) ++k;
  const std::size_t lo = k >= c + 2 ? k - 2 : c;
  return g.x(lo) <= 0.5 * st.last_trigger_value;
}

}  // namespace

RunState initial_state(const RunConfig& cfg) {
  Grid1D g = Grid1D::uniform(cfg.a, cfg.n_intervals, cfg.bc);
  for (int i = 0; i < cfg.n_initial_refinements; ++i) g = g.refine_middle_half(cfg.policy.spacing_floor);
  RunState st;
  st.grid = make_grid(std::move(g));
  st.u = initial_values(cfg, *st.grid);
  st.dt = cfg.dt0;
  st.s = std::max(cfg.s0, min_stages(cfg.family));
  st.last_trigger_value = trigger_value(st, cfg).value_or(NAN);
  return st;
}

std::optional<double> trigger_value(const RunState& st, const RunConfig& cfg) {
  if (semilinear(cfg)) return half_width(st.field());
  return *std::min_element(st.u.begin(), st.u.end());
}

bool check_trigger(const RunState& st, const RunConfig& cfg) {
  if (!std::isfinite(st.last_trigger_value)) return false;
  if (semilinear(cfg) && !half_width_may_trigger(st)) return false;
  const std::optional<double> v = trigger_value(st, cfg);
  return v && *v <= 0.5 * st.last_trigger_value;
}

void apply_refinement(RunState& st, const RunConfig& cfg) {
  const RefinementPolicy& pol = cfg.policy;
  const double vmax = *std::max_element(st.u.begin(), st.u.end());
  GridPtr fine = make_grid(st.grid->refine_middle_half(pol.spacing_floor));
  Field moved = transfer(st.field(), fine);
  st.grid = fine;
  st.u.assign(moved.values().begin(), moved.values().end());
  if (semilinear(cfg)) {
    const double div = vmax < pol.divisor_switch ? pol.dt_divisor_low : pol.dt_divisor_high;
    const double h = fine->min_spacing();
    const double floor = cfg.alpha > 0.0 ? pol.dt_floor_cfl * h * h / cfg.alpha : 0.0;
    st.dt = std::min(st.dt, std::max(st.dt / div, floor));
    st.s = std::max(pol.s_floor, static_cast<int>(std::floor(pol.s_factor * st.s)));
  } else {
    st.dt /= pol.surfdiff_dt_divisor;
    st.s = std::max(pol.s_floor, st.s - pol.s_decrement);
  }
  st.s = std::max(st.s, min_stages(cfg.family));
  st.last_trigger_value = trigger_value(st, cfg).value_or(NAN);
  ++st.refinement_count;
}

namespace {

class Driver {
 public:
  explicit Driver(const RunConfig& cfg) : cfg_(cfg), stepper_(make_stepper(cfg)) {
    report_.config = cfg;
    report_.scheme = cfg.integrator == Integrator::sts ? std::string(to_string(cfg.family))
                                                       : std::string(to_string(cfg.integrator));
  }

  RunReport run() {
    const auto wall0 = std::chrono::steady_clock::now();
    st_ = initial_state(cfg_);
    stepper_->rebuild(st_.grid);
    const double v0 = extremum(cfg_, st_.u);
    next_diag_ = std::floor(decades(cfg_, v0) * cfg_.diag_per_decade) + 1.0;
    next_snap_ = std::floor(decades(cfg_, v0) / cfg_.snapshot_decades) + 1.0;
    push_schedule();
    record_row(v0);
    record_snapshot(v0);

    bool done = false;
    while (!done) {
      if (st_.steps >= cfg_.max_steps) {
        finish(Termination::max_steps, "step budget exhausted");
        break;
      }
      if (st_.t.value() >= cfg_.t_final) {
        finish(Termination::t_final, "final time reached");
        break;
      }
      done = advance();
    }
    report_.final_time = st_.t;
    report_.final_value = extremum(cfg_, st_.u);
    report_.steps = st_.steps;
    report_.rhs_evaluations = stepper_->rhs_evaluations;
    report_.final_field = st_.field();
    for (std::size_t i = 0; i < report_.series.size(); ++i) {
      report_.series[i].time_to_end = st_.t.minus(row_times_[i]);
    }
    report_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    if (!cfg_.output_dir.empty()) write_run_outputs(report_, cfg_.output_dir);
    return std::move(report_);
  }

 private:
  enum class Attempt { ok, escaped, failed };

  // Picks s for a step of length dt, cutting dt (and the scheduled dt,
  // permanently) when no admissible stage count is stable.
  int choose(double& dt) {
    if (cfg_.integrator != Integrator::sts) return 0;
    const double lam = stepper_->lambda(st_.u);
    const int s_min = min_stages(cfg_.family);
    if (!(lam > 0.0)) return s_min;
    const StageChoice c = choose_stages(cfg_.family, dt, lam, s_min, std::max(st_.s, s_min));
    if (c.reduced) {
      dt = c.dt;
      st_.dt = std::min(st_.dt, c.dt);
      if (std::abs(st_.dt - report_.schedule.back().dt) > 0.01 * report_.schedule.back().dt) push_schedule();
    }
    return c.s;
  }

  Attempt attempt(std::vector<double>& u, double dt, int s) {
    try {
      stepper_->step(u, dt, s);
      return Attempt::ok;
    } catch (const ReactionBlowUp& e) {
      message_ = e.what();
      escape_ = Termination::reaction_blowup;
      return Attempt::escaped;
    } catch (const PinchOffReached& e) {
      message_ = e.what();
      escape_ = Termination::pinch_off;
      return Attempt::escaped;
    } catch (const InstabilityDetected& e) {
      message_ = e.what();
      failure_ = Termination::instability;
    } catch (const NewtonDivergence& e) {
      message_ = e.what();
      failure_ = Termination::newton_failure;
    }
    return Attempt::failed;
  }

  // Returns true when the run is over.
  bool advance() {
    double dt = st_.dt;
    if (std::isfinite(cfg_.t_final)) dt = std::min(dt, cfg_.t_final - st_.t.value());
    if (semilinear(cfg_) && cfg_.reaction && cfg_.policy.reaction_dt_fraction > 0.0) {
      const double vmax = extremum(cfg_, st_.u);
      if (vmax > 0.0) dt = std::min(dt, cfg_.policy.reaction_dt_fraction * std::pow(vmax, 1.0 - cfg_.p) / (cfg_.p - 1.0));
    }
    const int s = choose(dt);
    saved_ = st_.u;
    Attempt a = attempt(st_.u, dt, s);
    if (a == Attempt::failed) {
      st_.u = saved_;
      finish(failure_, message_);
      return true;
    }
    double v = a == Attempt::ok ? extremum(cfg_, st_.u) : NAN;
    bool terminal = a == Attempt::escaped || reached(cfg_, v);
    if (terminal && (a == Attempt::escaped || overshoot(cfg_, v)) && cfg_.landing_tolerance > 0.0) {
      // Bisect dt until the step lands inside the tolerance band.
      double lo = 0.0, hi = dt;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        ++report_.rejected_steps;
        st_.u = saved_;
        a = attempt(st_.u, mid, s);
        if (a == Attempt::failed) {
          st_.u = saved_;
          finish(failure_, message_);
          return true;
        }
        v = a == Attempt::ok ? extremum(cfg_, st_.u) : NAN;
        if (a == Attempt::escaped || overshoot(cfg_, v)) {
          hi = mid;
        } else if (!reached(cfg_, v)) {
          lo = mid;
        } else {
          dt = mid;
          terminal = true;
          a = Attempt::ok;
          goto landed;
        }
      }
      // Band too narrow to hit: take the largest step known not to cross.
      st_.u = saved_;
      if (lo > 0.0) {
        a = attempt(st_.u, lo, s);
        if (a != Attempt::ok) {
          st_.u = saved_;
          finish(a == Attempt::escaped ? escape_ : failure_, message_);
          return true;
        }
        dt = lo;
        v = extremum(cfg_, st_.u);
        terminal = false;
      } else {
        finish(a == Attempt::escaped ? escape_ : Termination::threshold_reached, message_);
        return true;
      }
    } else if (a == Attempt::escaped) {
      st_.u = saved_;
      finish(escape_, message_);
      return true;
    }
  landed:
    st_.t.add(dt);
    ++st_.steps;
    const double centre = st_.u[st_.grid->center_index()];
    if (pending_row_) {
      report_.series.back().dvdt = (centre - pending_centre_) / dt;
      pending_row_ = false;
    }
    if (terminal) {
      record_row(v);
      record_snapshot(v, true);
      finish(Termination::threshold_reached, "threshold reached");
      return true;
    }
    if (decades(cfg_, v) >= next_diag_ / cfg_.diag_per_decade) {
      record_row(v);
      next_diag_ = std::floor(decades(cfg_, v) * cfg_.diag_per_decade) + 1.0;
    }
    if (decades(cfg_, v) >= next_snap_ * cfg_.snapshot_decades) {
      record_snapshot(v);
      next_snap_ = std::floor(decades(cfg_, v) / cfg_.snapshot_decades) + 1.0;
    }
    if (check_trigger(st_, cfg_)) {
      const double trigger = trigger_value(st_, cfg_).value_or(NAN);
      try {
        apply_refinement(st_, cfg_);
      } catch (const ResolutionFloorReached& e) {
        finish(Termination::resolution_floor, e.what());
        return true;
      }
      stepper_->rebuild(st_.grid);
      report_.refinements.push_back({st_.steps, st_.t.value(), trigger, st_.grid->finest_level(), st_.grid->size(),
                                     st_.s, st_.dt});
      push_schedule();
    }
    return false;
  }

  void record_row(double v) {
    const Field f = st_.field();
    DiagnosticsRow row;
    row.time = st_.t.value();
    row.value = v;
    row.level = st_.grid->finest_level();
    if (semilinear(cfg_)) {
      row.half_width = half_width(f).value_or(NAN);
    } else {
      row.cone_slope = cone_slope(f).value;
    }
    report_.series.push_back(row);
    row_times_.push_back(st_.t);
    pending_row_ = true;
    pending_centre_ = st_.u[st_.grid->center_index()];
  }

  void record_snapshot(double v, bool terminal = false) {
    if (terminal && !report_.snapshots.empty() && last_snapshot_step_ == st_.steps) return;
    last_snapshot_step_ = st_.steps;
    report_.snapshots.push_back({st_.t.value(), v, st_.field()});
  }

  void push_schedule() { report_.schedule.push_back({st_.steps, st_.t.value(), st_.s, st_.dt}); }

  void finish(Termination t, const std::string& message) {
    report_.termination = t;
    report_.message = message;
    if (t != Termination::threshold_reached) {
      const double v = extremum(cfg_, st_.u);
      if (report_.series.empty() || row_times_.back().hi != st_.t.hi || row_times_.back().lo != st_.t.lo) {
        record_row(v);
      }
      record_snapshot(v, true);
    }
  }

  const RunConfig& cfg_;
  std::unique_ptr<Stepper> stepper_;
  RunReport report_;
  RunState st_;
  std::vector<double> saved_;
  std::vector<CompensatedTime> row_times_;
  double next_diag_ = 0.0, next_snap_ = 0.0;
  long last_snapshot_step_ = -1;
  bool pending_row_ = false;
  double pending_centre_ = 0.0;
  std::string message_;
  Termination escape_ = Termination::reaction_blowup;
  Termination failure_ = Termination::instability;
};

}  // namespace

RunReport run(const RunConfig& cfg) { return Driver(cfg).run(); }

}  // namespace sts
