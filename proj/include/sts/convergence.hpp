#pragma once

#include <vector>

#include "sts/schemes.hpp"

namespace sts {

struct ConvergenceRow {
  double dt;
  double error;  // max-norm error at t_end
};

struct ConvergenceStudy {
  SchemeFamily family;
  int s;
  std::vector<ConvergenceRow> rows;
  double order;  // least-squares slope of log error against log dt
};

/**
 * Temporal order study on u_t = u_xx, Dirichlet [-1, 1], u0 = sin(pi x).
 * sin(pi x) is an exact eigenvector of the discrete Laplacian, so the
 * reference exp(-lambda_h t) sin(pi x) carries no spatial error and the
 * measured error is purely temporal. dt starts at dt0 and is halved
 * `halvings` times with s fixed.
 */
ConvergenceStudy heat_convergence(SchemeFamily family, int s, int n_intervals = 16, double t_end = 0.5,
                                  double dt0 = 1.0 / 40.0, int halvings = 4);

}  // namespace sts
