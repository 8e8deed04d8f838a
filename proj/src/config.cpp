#include "sts/config.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "sts/errors.hpp"

namespace sts {

std::string_view to_string(Problem p) {
  return p == Problem::semilinear_heat ? "semilinear_heat" : "surface_diffusion";
}

std::string_view to_string(Integrator i) {
  switch (i) {
    case Integrator::sts: return "sts";
    case Integrator::semi_implicit: return "semi_implicit";
    case Integrator::backward_euler: return "backward_euler";
  }
  return "?";
}

RunConfig default_config(Problem problem) {
  RunConfig c;
  c.problem = problem;
  if (problem == Problem::surface_diffusion) {
    c.a = 2.0 * std::numbers::pi;
    c.n_intervals = 256;
    c.bc = Boundary::periodic;
    c.dt0 = 1e-5;
    c.s0 = 70;
    c.threshold = 1e-10;
    c.n_initial_refinements = 1;
  } else {
    c.dt0 = c.dx() / 8.0;
  }
  return c;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Accepts plain numbers, multiples of pi ("pi", "2pi", "2*pi") and one
// division ("1/128", "4pi/256").
double parse_real(const std::string& key, const std::string& v) {
  auto fail = [&] { return ConfigError(key, "expected a number, got '" + v + "'"); };
  auto term = [&](std::string t) -> double {
    double scale = 1.0;
    const auto pos = t.find("pi");
    if (pos != std::string::npos && pos + 2 == t.size()) {
      scale = std::numbers::pi;
      t = t.substr(0, pos);
      if (!t.empty() && t.back() == '*') t.pop_back();
      if (t.empty()) t = "1";
    }
    if (t == "inf" || t == "infinity") return INFINITY;
    std::size_t used = 0;
    double x;
    try {
      x = std::stod(t, &used);
    } catch (const std::exception&) {
      throw fail();
    }
    if (used != t.size() || !std::isfinite(x * scale)) throw fail();
    return x * scale;
  };
  const auto slash = v.find('/');
  if (slash == std::string::npos) return term(v);
  const double num = term(trim(v.substr(0, slash)));
  const double den = term(trim(v.substr(slash + 1)));
  if (den == 0.0 || !std::isfinite(num / den)) throw fail();
  return num / den;
}

long parse_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long x;
  try {
    x = std::stol(v, &used);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  }
  if (used != v.size()) throw ConfigError(key, "expected an integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
  if (v == "off" || v == "false" || v == "no" || v == "0") return false;
  throw ConfigError(key, "expected on/off, got '" + v + "'");
}

Problem parse_problem(const std::string& v) {
  if (v == "semilinear_heat" || v == "semilinear") return Problem::semilinear_heat;
  if (v == "surface_diffusion" || v == "surfdiff") return Problem::surface_diffusion;
  throw ConfigError("problem", "unknown problem '" + v + "'");
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError("", "line " + std::to_string(lineno) + ": empty key");
    for (const auto& e : entries) {
      if (e.first == key) throw ConfigError(key, "duplicate key");
    }
    entries.emplace_back(key, value);
  }

  Problem problem = Problem::semilinear_heat;
  for (const auto& [k, v] : entries) {
    if (k == "problem") problem = parse_problem(v);
  }
  RunConfig c = default_config(problem);
  bool dt0_given = false;
  double dx = 0.0;

  for (const auto& [k, v] : entries) {
    RefinementPolicy& pol = c.policy;
    if (k == "problem") {
      continue;
    } else if (k == "format_version") {
      if (parse_int(k, v) != 1) throw ConfigError(k, "unsupported format version '" + v + "'");
    } else if (k == "integrator") {
      if (v == "sts") c.integrator = Integrator::sts;
      else if (v == "semi_implicit") c.integrator = Integrator::semi_implicit;
      else if (v == "backward_euler") c.integrator = Integrator::backward_euler;
      else throw ConfigError(k, "unknown integrator '" + v + "'");
    } else if (k == "scheme") {
      try {
        c.family = parse_family(v);
      } catch (const InvalidArgument& e) {
        throw ConfigError(k, e.what());
      }
    } else if (k == "p") {
      c.p = parse_real(k, v);
    } else if (k == "reaction") {
      c.reaction = parse_bool(k, v);
    } else if (k == "alpha") {
      c.alpha = parse_real(k, v);
    } else if (k == "u0_amplitude") {
      c.u0_amplitude = parse_real(k, v);
    } else if (k == "r0_amplitude") {
      c.r0_amplitude = parse_real(k, v);
    } else if (k == "r0_offset") {
      c.r0_offset = parse_real(k, v);
    } else if (k == "a") {
      c.a = parse_real(k, v);
    } else if (k == "n_intervals") {
      c.n_intervals = static_cast<int>(parse_int(k, v));
    } else if (k == "dx") {
      dx = parse_real(k, v);
    } else if (k == "bc") {
      if (v == "dirichlet" || v == "dirichlet_zero") c.bc = Boundary::dirichlet_zero;
      else if (v == "periodic") c.bc = Boundary::periodic;
      else throw ConfigError(k, "unknown boundary condition '" + v + "'");
    } else if (k == "dt0") {
      c.dt0 = parse_real(k, v);
      dt0_given = true;
    } else if (k == "s0") {
      c.s0 = static_cast<int>(parse_int(k, v));
    } else if (k == "n_initial_refinements") {
      c.n_initial_refinements = static_cast<int>(parse_int(k, v));
    } else if (k == "threshold") {
      c.threshold = parse_real(k, v);
    } else if (k == "landing_tolerance") {
      c.landing_tolerance = parse_real(k, v);
    } else if (k == "t_final") {
      c.t_final = parse_real(k, v);
    } else if (k == "max_steps") {
      c.max_steps = parse_int(k, v);
    } else if (k == "output_dir") {
      c.output_dir = v;
    } else if (k == "snapshot_decades") {
      c.snapshot_decades = parse_real(k, v);
    } else if (k == "diag_per_decade") {
      c.diag_per_decade = static_cast<int>(parse_int(k, v));
    } else if (k == "dt_divisor_low") {
      pol.dt_divisor_low = parse_real(k, v);
    } else if (k == "dt_divisor_high") {
      pol.dt_divisor_high = parse_real(k, v);
    } else if (k == "divisor_switch") {
      pol.divisor_switch = parse_real(k, v);
    } else if (k == "s_factor") {
      pol.s_factor = parse_real(k, v);
    } else if (k == "dt_floor_cfl") {
      pol.dt_floor_cfl = parse_real(k, v);
    } else if (k == "reaction_dt_fraction") {
      pol.reaction_dt_fraction = parse_real(k, v);
    } else if (k == "surfdiff_dt_divisor") {
      pol.surfdiff_dt_divisor = parse_real(k, v);
    } else if (k == "s_decrement") {
      pol.s_decrement = static_cast<int>(parse_int(k, v));
    } else if (k == "s_floor") {
      pol.s_floor = static_cast<int>(parse_int(k, v));
    } else if (k == "spacing_floor") {
      pol.spacing_floor = parse_real(k, v);
    } else {
      throw ConfigError(k, "unknown key");
    }
  }

  if (!(c.a > 0.0)) throw ConfigError("a", "half-width must be positive");
  if (dx != 0.0) {
    if (!(dx > 0.0)) throw ConfigError("dx", "must be positive");
    const double ratio = 2.0 * c.a / dx;
    const double n = std::round(ratio);
    if (std::abs(ratio - n) > 1e-9 * n || n < 8 || n > 1 << 30 ||
        !std::has_single_bit(static_cast<unsigned>(n))) {
      throw ConfigError("dx", "must be 2a / 2^k with 2^k >= 8");
    }
    c.n_intervals = static_cast<int>(n);
  }
  if (c.n_intervals < 8 || !std::has_single_bit(static_cast<unsigned>(c.n_intervals))) {
    throw ConfigError("n_intervals", "must be a power of two >= 8");
  }
  if (c.problem == Problem::semilinear_heat && !dt0_given) c.dt0 = c.dx() / 8.0;
  if (c.reaction && !(c.p > 1.0)) throw ConfigError("p", "exponent must exceed 1");
  if (!(c.alpha >= 0.0)) throw ConfigError("alpha", "must be >= 0");
  if (!(c.dt0 > 0.0)) throw ConfigError("dt0", "must be positive");
  if (c.s0 < min_stages(c.family)) {
    throw ConfigError("s0", std::string(to_string(c.family)) + " needs s >= " +
                                std::to_string(min_stages(c.family)));
  }
  if (c.n_initial_refinements < 0) throw ConfigError("n_initial_refinements", "must be >= 0");
  if (!(c.threshold > 0.0)) throw ConfigError("threshold", "must be positive");
  if (!(c.landing_tolerance >= 0.0)) throw ConfigError("landing_tolerance", "must be >= 0");
  if (c.max_steps <= 0) throw ConfigError("max_steps", "must be positive");
  if (!(c.snapshot_decades > 0.0)) throw ConfigError("snapshot_decades", "must be positive");
  if (c.diag_per_decade < 1) throw ConfigError("diag_per_decade", "must be >= 1");
  if (c.problem == Problem::surface_diffusion) {
    if (c.bc != Boundary::periodic) throw ConfigError("bc", "surface diffusion needs periodic boundaries");
    if (c.integrator == Integrator::semi_implicit) {
      throw ConfigError("integrator", "semi_implicit applies to the semilinear problem");
    }
  } else if (c.integrator == Integrator::backward_euler) {
    throw ConfigError("integrator", "backward_euler applies to surface diffusion");
  }
  const RefinementPolicy& pol = c.policy;
  if (!(pol.dt_divisor_low > 1.0)) throw ConfigError("dt_divisor_low", "must exceed 1");
  if (!(pol.dt_divisor_high > 1.0)) throw ConfigError("dt_divisor_high", "must exceed 1");
  if (!(pol.surfdiff_dt_divisor > 1.0)) throw ConfigError("surfdiff_dt_divisor", "must exceed 1");
  if (!(pol.s_factor > 0.0 && pol.s_factor < 1.0)) throw ConfigError("s_factor", "must lie in (0, 1)");
  if (!(pol.dt_floor_cfl >= 0.0)) throw ConfigError("dt_floor_cfl", "must be >= 0");
  if (!(pol.reaction_dt_fraction >= 0.0)) throw ConfigError("reaction_dt_fraction", "must be >= 0");
  if (pol.s_floor < 1) throw ConfigError("s_floor", "must be >= 1");
  if (pol.s_decrement < 0) throw ConfigError("s_decrement", "must be >= 0");
  if (!(pol.spacing_floor > 0.0)) throw ConfigError("spacing_floor", "must be positive");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const RunConfig& c) {
  std::string out;
  char buf[128];
  auto real = [&](const char* k, double v) {
    std::snprintf(buf, sizeof buf, "%s = %.17g\n", k, v);
    out += buf;
  };
  auto integer = [&](const char* k, long v) {
    std::snprintf(buf, sizeof buf, "%s = %ld\n", k, v);
    out += buf;
  };
  auto text = [&](const char* k, std::string_view v) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  };
  integer("format_version", 1);
  text("problem", to_string(c.problem));
  text("integrator", to_string(c.integrator));
  text("scheme", to_string(c.family));
  real("p", c.p);
  text("reaction", c.reaction ? "on" : "off");
  real("alpha", c.alpha);
  real("u0_amplitude", c.u0_amplitude);
  real("r0_amplitude", c.r0_amplitude);
  real("r0_offset", c.r0_offset);
  real("a", c.a);
  integer("n_intervals", c.n_intervals);
  text("bc", c.bc == Boundary::periodic ? "periodic" : "dirichlet");
  real("dt0", c.dt0);
  integer("s0", c.s0);
  integer("n_initial_refinements", c.n_initial_refinements);
  real("threshold", c.threshold);
  real("landing_tolerance", c.landing_tolerance);
  if (std::isfinite(c.t_final)) real("t_final", c.t_final);
  integer("max_steps", c.max_steps);
  if (!c.output_dir.empty()) text("output_dir", c.output_dir);
  real("snapshot_decades", c.snapshot_decades);
  integer("diag_per_decade", c.diag_per_decade);
  real("dt_divisor_low", c.policy.dt_divisor_low);
  real("dt_divisor_high", c.policy.dt_divisor_high);
  real("divisor_switch", c.policy.divisor_switch);
  real("s_factor", c.policy.s_factor);
  real("dt_floor_cfl", c.policy.dt_floor_cfl);
  real("reaction_dt_fraction", c.policy.reaction_dt_fraction);
  real("surfdiff_dt_divisor", c.policy.surfdiff_dt_divisor);
  integer("s_decrement", c.policy.s_decrement);
  integer("s_floor", c.policy.s_floor);
  real("spacing_floor", c.policy.spacing_floor);
  return out;
}

}  // namespace sts
