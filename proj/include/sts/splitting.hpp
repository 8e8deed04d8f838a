#pragma once

#include <span>

#include "sts/grid.hpp"
#include "sts/operators.hpp"
#include "sts/schemes.hpp"

namespace sts {

/**
 * Exact flow of u' = u^p over time h, applied in place:
 *   u <- (u^{1-p} - (p-1) h)^{1/(1-p)},  u = 0 stays 0.
 * Throws ReactionBlowUp (with the node index) when the flow escapes to
 * infinity within h. Negative values are accepted only for p = 2 and p = 3.
 */
void reaction_exact(std::span<double> u, double p, double h);

// Strang composition N(dt/2) o D(dt) o N(dt/2) with a reusable workspace.
class StrangStepper {
 public:
  StrangStepper(SchemeSpec spec, RhsEvaluator diffusion, double p, bool reaction = true);

  // Advances u in place by dt. Dirichlet boundary values are re-pinned to 0.
  void step(std::span<double> u, double dt);

  const SchemeSpec& spec() const noexcept { return spec_; }
  void set_spec(const SchemeSpec& spec) { spec_ = spec; }
  const RhsEvaluator& diffusion() const noexcept { return diffusion_; }

 private:
  SchemeSpec spec_;
  RhsEvaluator diffusion_;
  double p_;
  bool reaction_;
  StageWorkspace ws_;
  std::vector<double> buffer_;
};

Field strang_step(const Field& f, const SchemeSpec& spec, double p, double alpha, double dt, bool reaction = true);

}  // namespace sts
