#include "sts/schemes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "sts/errors.hpp"

namespace sts {

std::string_view to_string(SchemeFamily f) {
  switch (f) {
    case SchemeFamily::rkl1: return "rkl1";
    case SchemeFamily::rkl2: return "rkl2";
    case SchemeFamily::rkg1: return "rkg1";
    case SchemeFamily::rkg2: return "rkg2";
  }
  return "?";
}

SchemeFamily parse_family(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "rkl1") return SchemeFamily::rkl1;
  if (lower == "rkl2") return SchemeFamily::rkl2;
  if (lower == "rkg1") return SchemeFamily::rkg1;
  if (lower == "rkg2") return SchemeFamily::rkg2;
  throw InvalidArgument("unknown scheme family '" + std::string(name) + "'");
}

bool is_second_order(SchemeFamily f) { return f == SchemeFamily::rkl2 || f == SchemeFamily::rkg2; }

int min_stages(SchemeFamily f) { return is_second_order(f) ? 2 : 1; }

SchemeSpec::SchemeSpec(SchemeFamily family_, int s_) : family(family_), s(s_) {
  if (s < min_stages(family)) {
    throw InvalidArgument(std::string(to_string(family)) + " needs s >= " + std::to_string(min_stages(family)) +
                          ", got " + std::to_string(s));
  }
}

double stability_cfl_limit(SchemeFamily f, int s) {
  const double sd = s;
  switch (f) {
    case SchemeFamily::rkl1: return (sd * sd + sd) / 4.0;
    case SchemeFamily::rkl2: return (sd * sd + sd - 2.0) / 8.0;
    case SchemeFamily::rkg1: return (sd * sd + 3.0 * sd) / 8.0;
    case SchemeFamily::rkg2: return (sd + 4.0) * (sd - 1.0) / 12.0;
  }
  return 0.0;
}

double stability_limit(const SchemeSpec& spec, double lambda_max) {
  if (!(lambda_max > 0.0)) throw InvalidArgument("stability_limit: lambda_max must be positive");
  return 4.0 * stability_cfl_limit(spec.family, spec.s) / lambda_max;
}

StageChoice choose_stages(SchemeFamily f, double dt, double lambda_max, int s_min, int s_max) {
  if (s_min > s_max) throw InvalidArgument("choose_stages: s_min > s_max");
  if (!(dt > 0.0)) throw InvalidArgument("choose_stages: dt must be positive");
  if (!(lambda_max > 0.0)) throw InvalidArgument("choose_stages: lambda_max must be positive");
  s_min = std::max(s_min, min_stages(f));
  if (s_max < s_min) throw InvalidArgument("choose_stages: s_max below the family minimum");
  for (int s = s_min; s <= s_max; ++s) {
    if (stability_limit(SchemeSpec(f, s), lambda_max) >= dt) return {s, dt, false};
  }
  return {s_max, stability_limit(SchemeSpec(f, s_max), lambda_max), true};
}

double shift_weight(const SchemeSpec& spec, double dt) {
  const double s = spec.s;
  switch (spec.family) {
    case SchemeFamily::rkl1: return 2.0 * dt / (s * s + s);
    case SchemeFamily::rkl2: return 4.0 * dt / (s * s + s - 2.0);
    case SchemeFamily::rkg1: return 4.0 * dt / (s * s + 3.0 * s);
    case SchemeFamily::rkg2: return 6.0 * dt / ((s + 4.0) * (s - 1.0));
  }
  return 0.0;
}

double blend_weight(const SchemeSpec& spec) {
  const double s = spec.s;
  switch (spec.family) {
    case SchemeFamily::rkl2: return (s * s + s - 2.0) / (2.0 * s * (s + 1.0));
    case SchemeFamily::rkg2: return 2.0 * (s - 1.0) * (s + 4.0) / (3.0 * s * (s + 3.0));
    default: return 1.0;
  }
}

void StageWorkspace::resize(std::size_t n) {
  prev_.resize(n);
  prev2_.resize(n);
  rate_.resize(n);
}

namespace {

void require_finite(std::span<const double> v, int stage) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw InstabilityDetected("superstep: non-finite value at stage " + std::to_string(stage), stage);
    }
  }
}

}  // namespace

void superstep(const SchemeSpec& spec, std::span<const double> u, std::span<double> out, const RhsFunction& f,
               double dt, StageWorkspace& ws) {
  const std::size_t n = u.size();
  if (out.size() != n) throw InvalidArgument("superstep: output size mismatch");
  if (spec.s < min_stages(spec.family)) throw InvalidArgument("superstep: stage count below family minimum");
  if (dt == 0.0) {
    std::copy(u.begin(), u.end(), out.begin());
    return;
  }
  ws.resize(n);
  double* prev = ws.prev_.data();
  double* prev2 = ws.prev2_.data();
  double* rate = ws.rate_.data();
  const double w = shift_weight(spec, dt);
  const bool legendre = spec.family == SchemeFamily::rkl1 || spec.family == SchemeFamily::rkl2;

  f(u, ws.rate_);
  for (std::size_t i = 0; i < n; ++i) {
    prev2[i] = u[i];
    prev[i] = u[i] + w * rate[i];
  }
  require_finite(ws.prev_, 1);

  for (int j = 2; j <= spec.s; ++j) {
    const double jd = j;
    const double mu = legendre ? (2.0 * jd - 1.0) / jd : (2.0 * jd + 1.0) / (jd + 2.0);
    const double nu = legendre ? -(jd - 1.0) / jd : -(jd - 1.0) / (jd + 2.0);
    f(ws.prev_, ws.rate_);
    for (std::size_t i = 0; i < n; ++i) prev2[i] = mu * (prev[i] + w * rate[i]) + nu * prev2[i];
    std::swap(ws.prev_, ws.prev2_);
    std::swap(prev, prev2);
    require_finite(ws.prev_, j);
  }

  const double beta = blend_weight(spec);
  if (beta == 1.0) {
    std::copy(prev, prev + n, out.begin());
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] = (1.0 - beta) * u[i] + beta * prev[i];
  }
}

Field superstep(const SchemeSpec& spec, const Field& f, const RhsEvaluator& rhs, double dt) {
  if (!f.all_finite()) throw InvalidArgument("superstep: input field is not finite");
  StageWorkspace ws;
  std::vector<double> out(f.size());
  superstep(spec, f.values(), out, [&rhs](std::span<const double> v, std::span<double> r) { rhs(v, r); }, dt, ws);
  return f.with_values(std::move(out), f.time() + dt);
}

double stability_polynomial_value(const SchemeSpec& spec, double z) {
  StageWorkspace ws;
  const double one[1] = {1.0};
  double out[1];
  superstep(
      spec, one, out, [z](std::span<const double> v, std::span<double> r) { r[0] = z * v[0]; }, 1.0, ws);
  return out[0];
}

}  // namespace sts
