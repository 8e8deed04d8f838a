#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "sts/schemes.hpp"

namespace sts::monotone {

// Dense polynomial with exact rational coefficients, index = degree.
struct RationalPoly {
  std::vector<mpq_class> coef;

  int degree() const { return static_cast<int>(coef.size()) - 1; }
  mpq_class operator()(const mpq_class& z) const;
  bool operator==(const RationalPoly& other) const;
};

RationalPoly legendre(int s);
// Gegenbauer C_s^{(3/2)}; C_s^{(1/2)} is legendre(s).
RationalPoly gegenbauer(int s);

/**
 * Symmetric stencil with offsets -m..m; coef[m + j] is the weight of the
 * neighbour at offset j.
 */
struct BandRational {
  std::vector<mpq_class> coef;

  int half_width() const { return static_cast<int>(coef.size() / 2); }
  const mpq_class& at(int j) const { return coef[static_cast<std::size_t>(half_width() + j)]; }
  mpq_class sum() const;
  bool symmetric() const;
};

// Band of q(I + w T) with T = (1, -2, 1), by Horner on bands.
BandRational stencil_of_poly(const RationalPoly& q, const mpq_class& w);

mpq_class binomial(int n, int k);

// sum_{k=j}^{s} C(s,k) C(s+k,k) x^k C(2k, j+k) (-1)^{j+k}
mpq_class rkl1_coefficient_formula(int s, int j, const mpq_class& x);

/**
 * Terminating 3F2(j+1/2, j+s+1, j-s; j+1, 2j+1; 4x) scaled by
 * (s+j)! / (j! j! (s-j)!) x^j; equals rkl1_coefficient_formula(s, j, x).
 */
mpq_class hypergeometric_form(int s, int j, const mpq_class& x);

// 3F2(j+1/2, j+s+1, j-s; j+1, 2j+1; 4x) == 2F1((j+s+1)/2, (j-s)/2; j+1; 4x)^2.
// Rejects s - j odd.
bool clausen_terminating_check(int s, int j, const mpq_class& x);

// C_s^{(3/2)}(z) == z C_{s-1}^{(3/2)}(z) + (s+1) P_s(z) for all 1 <= s <= s_max.
bool gegenbauer_recurrence_check(int s_max);

/**
 * Normalized CFL variable: the superstep acts on a periodic linear heat
 * problem as poly(I + 2x T). x = 1/4 is the family's stability limit.
 */
mpq_class cfl_to_x(SchemeFamily f, int s, const mpq_class& c);
mpq_class x_to_cfl(SchemeFamily f, int s, const mpq_class& x);

// Exact band of one superstep at normalized CFL x. RKL2/RKG2 at s = 1 give {1}.
BandRational scheme_band(SchemeFamily f, int s, const mpq_class& x);

struct Certificate {
  SchemeFamily family;
  int s;
  bool degenerate = false;  // s = 1 for RKL2 / RKG2: identity map
  bool monotone = true;
  bool consistent = true;   // coefficients sum to exactly 1
  // location of the smallest coefficient over all samples
  mpq_class min_coefficient;
  int min_offset = 0;
  mpq_class min_x;
  std::vector<mpq_class> samples;
};

// Samples above 1/4 lie outside the monotone range and are expected to yield
// a counterexample (monotone = false).
Certificate verify_monotone(SchemeFamily f, int s, const std::vector<mpq_class>& x_samples);

// Default sample set {1/16, 1/8, 1/4}.
std::vector<mpq_class> default_samples();

std::string to_string(const mpq_class& q);

}  // namespace sts::monotone
