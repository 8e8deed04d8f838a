#pragma once

#include <limits>
#include <map>
#include <string>
#include <string_view>

#include "sts/grid.hpp"
#include "sts/schemes.hpp"

namespace sts {

enum class Problem { semilinear_heat, surface_diffusion };
enum class Integrator { sts, semi_implicit, backward_euler };

std::string_view to_string(Problem p);
std::string_view to_string(Integrator i);

struct RefinementPolicy {
  // semilinear schedule
  double dt_divisor_low = 50.0;
  double dt_divisor_high = 700.0;
  double divisor_switch = 1000.0;  // max u at which the divisor changes
  double s_factor = 0.45;
  // Lower bound on dt after a refinement, as a CFL number alpha dt / h_min^2.
  double dt_floor_cfl = 0.02;
  // Per-step cap dt <= fraction * u_max^{1-p} / (p-1), a fixed fraction of
  // the local blow-up time of u' = u^p. 0 disables the cap.
  double reaction_dt_fraction = 0.01;
  // surface diffusion schedule
  double surfdiff_dt_divisor = 16.0;
  int s_decrement = 5;
  int s_floor = 5;
  double spacing_floor = kDefaultSpacingFloorFraction;
};

struct RunConfig {
  Problem problem = Problem::semilinear_heat;
  Integrator integrator = Integrator::sts;
  SchemeFamily family = SchemeFamily::rkl2;

  double p = 3.0;
  bool reaction = true;
  double alpha = 1.0;
  double u0_amplitude = 1.0;  // multiplies the semilinear initial profile
  double r0_amplitude = 1.8;  // r0 = -A (cos(z/2)/4 + 1/4) + offset
  double r0_offset = 1.2;

  double a = 1.0;
  int n_intervals = 256;
  Boundary bc = Boundary::dirichlet_zero;
  double dt0 = 1.0 / 1024.0;
  int s0 = 200;
  int n_initial_refinements = 0;

  double threshold = 1e30;  // stop at max u >= threshold, or min r <= threshold
  // The final step is retried with smaller dt until it lands within this
  // relative distance of the threshold; 0 accepts the first crossing.
  double landing_tolerance = 1e-3;
  double t_final = std::numeric_limits<double>::infinity();
  long max_steps = 200'000'000;

  std::string output_dir;  // empty: keep everything in memory
  double snapshot_decades = 1.0;
  int diag_per_decade = 20;

  RefinementPolicy policy;

  double dx() const { return 2.0 * a / n_intervals; }
};

// Defaults for a problem before any keys are applied.
RunConfig default_config(Problem problem);

/**
 * Flat "key = value" text, one entry per line, '#' comments. The `problem`
 * key (if present) selects the defaults; `format_version` must be 1.
 * Throws ConfigError naming the offending key.
 */
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// Every key and its current value, in the format parse_config reads.
std::string format_config(const RunConfig& cfg);

}  // namespace sts
