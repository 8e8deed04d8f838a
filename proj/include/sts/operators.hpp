#pragma once

#include <span>
#include <vector>

#include "sts/grid.hpp"

namespace sts {

enum class RhsKind { heat_laplacian, semilinear_reaction, surface_diffusion };

/**
 * Method-of-lines right-hand side on a fixed grid.
 *
 * heat_laplacian:      alpha * L u
 * semilinear_reaction: alpha * L u + u^p
 * surface_diffusion:   (1/r) d/dz [ r / sqrt(1 + r_z^2) dH/dz ]
 *
 * L is the non-uniform three-point Laplacian. Dirichlet boundary rates are
 * zero so pinned boundary values stay put. Stencil weights are computed once
 * per grid.
 *
 * Surface diffusion uses the three-point formulas on uniform stretches. At a
 * node with unequal neighbour spacings r_zz comes from a five-point stencil
 * (a three-point one is only first order there, which the two outer
 * derivatives turn into an O(1/h) rate error), and the outer derivative is
 * the telescoping (F_{m+1} - F_{m-1}) / (h_l + h_r), so that
 * sum r_m^2 (h_l + h_r) / 2 is conserved exactly.
 *
 * Not safe to call concurrently on one evaluator: surface diffusion uses
 * mutable scratch buffers. Copies are independent.
 */
class RhsEvaluator {
 public:
  static RhsEvaluator heat(GridPtr grid, double alpha);
  static RhsEvaluator semilinear(GridPtr grid, double alpha, double p);
  // Rates throw PinchOffReached when some r_m <= pinch_threshold.
  static RhsEvaluator surface_diffusion(GridPtr grid, double pinch_threshold = 0.0);

  // Surface-diffusion rates at node m depend on r_{m-4} .. r_{m+4}.
  static constexpr int kSurfaceCoupling = 4;

  RhsKind kind() const noexcept { return kind_; }
  const Grid1D& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  double alpha() const noexcept { return alpha_; }
  double p() const noexcept { return p_; }

  void operator()(std::span<const double> u, std::span<double> rates) const;
  std::vector<double> operator()(std::span<const double> u) const;

  /**
   * Upper bound on the spectral radius of the (frozen-coefficient) Jacobian.
   * heat: 4 alpha / h_min^2. surface diffusion: 2 * max_i 4 K_i / h_i^4 with
   * K_i = (1 + dr_i^2)^-2 and h_i the smaller spacing next to node i.
   */
  double max_eigenvalue(std::span<const double> u) const;

 private:
  RhsEvaluator(RhsKind kind, GridPtr grid);
  void build_stencils();
  void laplacian(std::span<const double> u, std::span<double> rates) const;
  void surface(std::span<const double> r, std::span<double> rates) const;

  // Per-node three-point data. Interior node i has neighbours im[i], ip[i].
  struct Node {
    std::size_t im, ip;
    double hl, hr;
    bool uniform;
    // first derivative weights on differences from the centre
    double d1m, d1p;
    // five-point second derivative over i-2 .. i+2 (surface diffusion, uneven nodes)
    std::size_t imm, ipp;
    double w2[5];
  };

  RhsKind kind_;
  GridPtr grid_;
  double alpha_ = 1.0;
  double p_ = 1.0;
  double pinch_threshold_ = 0.0;
  bool periodic_ = false;
  std::vector<Node> nodes_;
  mutable std::vector<double> scratch_g_, scratch_h_, scratch_f_;
};

// Free-function form of the heat operator: alpha * L u.
std::vector<double> laplacian_nonuniform(const Field& f, double alpha);
std::vector<double> surface_diffusion_rhs(const Field& f);
double max_eigenvalue_estimate(const Field& f, const RhsEvaluator& rhs);

}  // namespace sts
