#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sts/grid.hpp"
#include "sts/operators.hpp"

namespace sts {

enum class SchemeFamily { rkl1, rkl2, rkg1, rkg2 };

std::string_view to_string(SchemeFamily f);
SchemeFamily parse_family(std::string_view name);  // "rkl1", "RKL2", ...
bool is_second_order(SchemeFamily f);
// Smallest admissible stage count: 1 for the first-order schemes, 2 otherwise.
int min_stages(SchemeFamily f);

struct SchemeSpec {
  static constexpr double gegenbauer_lambda = 1.5;

  SchemeFamily family = SchemeFamily::rkl2;
  int s = 1;

  SchemeSpec() = default;
  SchemeSpec(SchemeFamily family, int s);  // validates s
};

/**
 * Largest CFL coefficient c = dt * lambda_max / 4 the scheme tolerates:
 *   RKL1 (s^2+s)/4, RKL2 (s^2+s-2)/8, RKG1 (s^2+3s)/8, RKG2 (s+4)(s-1)/12.
 */
double stability_cfl_limit(SchemeFamily f, int s);
double stability_limit(const SchemeSpec& spec, double lambda_max);

struct StageChoice {
  int s;
  double dt;     // equals the requested dt unless no s in range was stable
  bool reduced;  // true when dt had to be cut to the s_max limit
};

StageChoice choose_stages(SchemeFamily f, double dt, double lambda_max, int s_min, int s_max);

// Shift weight w in R_s(z) = poly(1 + w z / dt) and the final blend weight.
double shift_weight(const SchemeSpec& spec, double dt);
double blend_weight(const SchemeSpec& spec);

using RhsFunction = std::function<void(std::span<const double>, std::span<double>)>;

// The three stage buffers a superstep needs, reusable across steps.
class StageWorkspace {
 public:
  void resize(std::size_t n);
  std::size_t size() const noexcept { return prev_.size(); }

 private:
  friend void superstep(const SchemeSpec&, std::span<const double>, std::span<double>, const RhsFunction&,
                        double, StageWorkspace&);
  std::vector<double> prev_, prev2_, rate_;
};

/**
 * One superstep out = R_s(dt f) u via the Legendre or Gegenbauer three-term
 * recurrence in normalized form (every stage has unit value at z = 0):
 *   Y0 = u, Y1 = u + w f(u),
 *   Yj = mu_j (Y_{j-1} + w f(Y_{j-1})) + nu_j Y_{j-2},
 *   out = (1 - beta) u + beta Ys.
 * Legendre: mu = (2j-1)/j, nu = -(j-1)/j. Gegenbauer (lambda = 3/2, scaled
 * by C_j(1)): mu = (2j+1)/(j+2), nu = -(j-1)/(j+2).
 * Throws InstabilityDetected with the stage index on NaN/Inf.
 */
void superstep(const SchemeSpec& spec, std::span<const double> u, std::span<double> out, const RhsFunction& f,
               double dt, StageWorkspace& ws);

Field superstep(const SchemeSpec& spec, const Field& f, const RhsEvaluator& rhs, double dt);

// R_s(z) through the same recurrence, applied to the scalar problem v' = z v.
double stability_polynomial_value(const SchemeSpec& spec, double z);

}  // namespace sts
