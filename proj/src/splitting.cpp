#include "sts/splitting.hpp"

#include <algorithm>
#include <cmath>

#include "sts/errors.hpp"

namespace sts {

namespace {

[[noreturn]] void blow_up(std::size_t i) {
  throw ReactionBlowUp("reaction substep: solution escapes to infinity at node " + std::to_string(i), i);
}

}  // namespace

void reaction_exact(std::span<double> u, double p, double h) {
  if (!(p > 1.0)) throw InvalidArgument("reaction_exact: p must exceed 1");
  if (h == 0.0) return;
  const std::size_t n = u.size();
  if (p == 2.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double den = 1.0 - h * u[i];
      if (!(den > 0.0)) blow_up(i);
      u[i] /= den;
    }
    return;
  }
  if (p == 3.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double den = 1.0 - 2.0 * h * u[i] * u[i];
      if (!(den > 0.0)) blow_up(i);
      u[i] /= std::sqrt(den);
    }
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double v = u[i];
    if (v == 0.0) continue;
    if (v < 0.0) throw InvalidArgument("reaction_exact: negative value for non-integer exponent");
    const double base = std::pow(v, 1.0 - p) - (p - 1.0) * h;
    if (!(base > 0.0)) blow_up(i);
    u[i] = std::pow(base, 1.0 / (1.0 - p));
  }
}

StrangStepper::StrangStepper(SchemeSpec spec, RhsEvaluator diffusion, double p, bool reaction)
    : spec_(spec), diffusion_(std::move(diffusion)), p_(p), reaction_(reaction) {
  if (reaction_ && !(p_ > 1.0)) throw InvalidArgument("StrangStepper: p must exceed 1");
  buffer_.resize(diffusion_.grid().size());
}

void StrangStepper::step(std::span<double> u, double dt) {
  if (reaction_) reaction_exact(u, p_, 0.5 * dt);
  const RhsEvaluator& d = diffusion_;
  superstep(spec_, u, buffer_, [&d](std::span<const double> v, std::span<double> r) { d(v, r); }, dt, ws_);
  std::copy(buffer_.begin(), buffer_.end(), u.begin());
  if (!diffusion_.grid().periodic()) {
    u.front() = 0.0;
    u.back() = 0.0;
  }
  if (reaction_) reaction_exact(u, p_, 0.5 * dt);
}

Field strang_step(const Field& f, const SchemeSpec& spec, double p, double alpha, double dt, bool reaction) {
  StrangStepper stepper(spec, RhsEvaluator::heat(f.grid_ptr(), alpha), p, reaction);
  std::vector<double> u(f.values().begin(), f.values().end());
  stepper.step(u, dt);
  return f.with_values(std::move(u), f.time() + dt);
}

}  // namespace sts
