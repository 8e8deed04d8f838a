#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sts/config.hpp"
#include "sts/grid.hpp"

namespace sts {

enum class Termination {
  threshold_reached,
  reaction_blowup,  // exact reaction flow escaped inside a half step
  pinch_off,        // radius reached zero inside a stage
  t_final,
  max_steps,
  instability,
  resolution_floor,
  newton_failure,
};

std::string_view to_string(Termination t);
// threshold, reaction blow-up, pinch-off and t_final end a run normally.
bool is_success(Termination t);

// Simulation time as an unevaluated sum hi + lo, so that T - t stays
// resolvable when T - t is far below ulp(T).
struct CompensatedTime {
  double hi = 0.0;
  double lo = 0.0;

  void add(double dt);
  double value() const noexcept { return hi + lo; }
  // this - other, rounded once.
  double minus(const CompensatedTime& other) const noexcept { return (hi - other.hi) + (lo - other.lo); }
};

struct DiagnosticsRow {
  double time = 0.0;
  double value = 0.0;       // max u, or min r
  double half_width = NAN;  // NaN when undefined
  double dvdt = NAN;        // forward difference of the centre value; NaN on the last row
  double cone_slope = NAN;  // surface diffusion only
  int level = 0;            // finest refinement level
  double time_to_end = NAN; // final time minus time
};

struct ScheduleEntry {
  long step = 0;
  double time = 0.0;
  int s = 0;
  double dt = 0.0;
};

struct RefinementEvent {
  long step = 0;
  double time = 0.0;
  double trigger_value = 0.0;
  int level = 0;
  std::size_t nodes = 0;
  int s = 0;
  double dt = 0.0;
};

struct Snapshot {
  double time;
  double value;
  Field field;
};

struct RunReport {
  RunConfig config;
  std::string scheme;  // family name, or the baseline integrator
  Termination termination = Termination::max_steps;
  std::string message;
  CompensatedTime final_time;
  double final_value = NAN;
  long steps = 0;
  long rejected_steps = 0;  // landing retries
  long rhs_evaluations = 0;
  double wall_seconds = 0.0;
  std::vector<ScheduleEntry> schedule;  // one entry whenever s or dt changes
  std::vector<RefinementEvent> refinements;
  std::vector<DiagnosticsRow> series;
  std::vector<Snapshot> snapshots;
  std::optional<Field> final_field;
};

// Mutable run state between steps.
struct RunState {
  GridPtr grid;
  std::vector<double> u;
  CompensatedTime t;
  double dt = 0.0;
  int s = 0;  // scheduled stage count (an upper bound for the per-step choice)
  int refinement_count = 0;
  double last_trigger_value = NAN;
  long steps = 0;

  Field field() const { return Field(grid, u, t.value()); }
};

// Initial mesh (after n_initial_refinements) and initial data.
RunState initial_state(const RunConfig& cfg);

// Half-width for the semilinear problem, minimum radius for surface diffusion.
std::optional<double> trigger_value(const RunState& st, const RunConfig& cfg);

// True iff the current trigger value is at most half the last one. An
// undefined half-width never triggers.
bool check_trigger(const RunState& st, const RunConfig& cfg);

/**
 * Refines the mesh around the centre, transfers the solution and applies the
 * dt / s schedules. Semilinear: dt divided by 50 (or 700 once max u exceeds
 * 1000) but not below dt_floor_cfl * h_min^2 / alpha, s <- max(5, 0.45 s).
 * Surface diffusion: dt /= 16, s <- max(5, s - 5). Throws
 * ResolutionFloorReached from the grid.
 */
void apply_refinement(RunState& st, const RunConfig& cfg);

// Runs to termination. Run-level failures end up in report.termination.
RunReport run(const RunConfig& cfg);

}  // namespace sts
