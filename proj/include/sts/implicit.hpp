#pragma once

#include <span>
#include <vector>

#include "sts/grid.hpp"
#include "sts/operators.hpp"

namespace sts {

/**
 * n x n band matrix with kl sub- and ku super-diagonals, factorized in place
 * by LU with partial pivoting (row interchanges widen the upper band to
 * kl + ku, so storage holds 2 kl + ku + 1 diagonals).
 */
class BandedMatrix {
 public:
  BandedMatrix(std::size_t n, int kl, int ku);

  std::size_t size() const noexcept { return n_; }
  int lower() const noexcept { return kl_; }
  int upper() const noexcept { return ku_; }

  // Entry (i, j) with -kl <= j - i <= ku. Only valid before factorize().
  double& at(std::size_t i, std::size_t j);
  double get(std::size_t i, std::size_t j) const;
  bool in_band(std::size_t i, std::size_t j) const noexcept;

  void factorize();  // throws SingularMatrix
  void solve(std::span<double> b) const;
  bool factorized() const noexcept { return factorized_; }

  void multiply(std::span<const double> x, std::span<double> y) const;  // before factorize()

 private:
  double& raw(std::size_t i, std::size_t j) { return ab_[(kl_ + ku_ + i - j) + j * ld_]; }
  double raw(std::size_t i, std::size_t j) const { return ab_[(kl_ + ku_ + i - j) + j * ld_]; }

  std::size_t n_;
  int kl_, ku_;
  std::size_t ld_;
  std::vector<double> ab_;
  std::vector<std::size_t> piv_;
  bool factorized_ = false;
};

/**
 * Periodic band matrix: entries (i, j) with cyclic distance <= bw. Solved as
 * the non-wrapping band part plus a rank-2bw corner correction (Woodbury).
 */
class CyclicBandedMatrix {
 public:
  CyclicBandedMatrix(std::size_t n, int bw);

  std::size_t size() const noexcept { return n_; }
  int bandwidth() const noexcept { return bw_; }
  double& at(std::size_t i, std::size_t j);
  void factorize();
  void solve(std::span<double> b) const;
  void multiply(std::span<const double> x, std::span<double> y) const;

 private:
  std::size_t n_;
  int bw_;
  BandedMatrix band_;
  // corner rows: row index and the 2bw-wide dense slice of wrapped entries
  std::vector<std::size_t> corner_rows_;
  std::vector<std::vector<double>> corner_vals_;  // indexed by column id
  std::vector<std::size_t> corner_cols_;
  std::vector<double> z_;         // n x k solutions of band * Z = U
  std::vector<double> capacity_;  // k x k LU of (I + C Z)
  std::vector<std::size_t> cap_piv_;
  bool factorized_ = false;
};

/**
 * (I - dt L) u_new = u + dt u^p with L the non-uniform Laplacian (times
 * alpha); Dirichlet rows are pinned to zero. reaction = false drops u^p.
 */
Field semiimplicit_heat_step(const Field& f, double p, double alpha, double dt, bool reaction = true);

struct NewtonOptions {
  double tolerance = 1e-10;  // relative infinity-norm residual
  int max_iterations = 20;
  int max_halvings = 8;
};

struct NewtonStats {
  int iterations = 0;
  int halvings = 0;
};

/**
 * Backward Euler r_new = r + dt F(r_new) for surface diffusion, solved by
 * Newton with a column-coloured finite-difference Jacobian on the cyclic
 * +-3 band. A non-converging step is retried as two half steps, recursively
 * up to max_halvings levels; beyond that NewtonDivergence is thrown.
 */
Field backward_euler_surfdiff_step(const Field& f, double dt, const NewtonOptions& opts = {},
                                   NewtonStats* stats = nullptr);

}  // namespace sts
