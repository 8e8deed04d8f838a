#include "sts/monotone.hpp"

#include <algorithm>

#include "sts/errors.hpp"

namespace sts::monotone {

namespace {

mpq_class frac(long n, long d) {
  mpq_class q{mpz_class(n), mpz_class(d)};
  q.canonicalize();
  return q;
}

}  // namespace

mpq_class RationalPoly::operator()(const mpq_class& z) const {
  mpq_class acc = 0;
  for (auto it = coef.rbegin(); it != coef.rend(); ++it) acc = acc * z + *it;
  return acc;
}

bool RationalPoly::operator==(const RationalPoly& other) const {
  const std::size_t n = std::max(coef.size(), other.coef.size());
  for (std::size_t i = 0; i < n; ++i) {
    const mpq_class a = i < coef.size() ? coef[i] : mpq_class(0);
    const mpq_class b = i < other.coef.size() ? other.coef[i] : mpq_class(0);
    if (a != b) return false;
  }
  return true;
}

namespace {

// c_j = (a_j z c_{j-1} - b_j c_{j-2}) / j over exact rationals.
template <class A, class B>
RationalPoly three_term(int s, const RationalPoly& c1, A a, B b) {
  if (s < 0) throw InvalidArgument("polynomial degree must be >= 0");
  RationalPoly prev2{{1}};
  if (s == 0) return prev2;
  RationalPoly prev = c1;
  for (int j = 2; j <= s; ++j) {
    RationalPoly next;
    next.coef.assign(static_cast<std::size_t>(j) + 1, 0);
    const mpq_class aj = a(j), bj = b(j);
    for (std::size_t k = 0; k < prev.coef.size(); ++k) next.coef[k + 1] += aj * prev.coef[k];
    for (std::size_t k = 0; k < prev2.coef.size(); ++k) next.coef[k] -= bj * prev2.coef[k];
    for (auto& c : next.coef) c /= j;
    prev2 = std::move(prev);
    prev = std::move(next);
  }
  return prev;
}

}  // namespace

RationalPoly legendre(int s) {
  return three_term(
      s, RationalPoly{{0, 1}}, [](int j) { return mpq_class(2 * j - 1); }, [](int j) { return mpq_class(j - 1); });
}

RationalPoly gegenbauer(int s) {
  return three_term(
      s, RationalPoly{{0, 3}}, [](int j) { return mpq_class(2 * j + 1); }, [](int j) { return mpq_class(j + 1); });
}

mpq_class BandRational::sum() const {
  mpq_class acc = 0;
  for (const auto& c : coef) acc += c;
  return acc;
}

bool BandRational::symmetric() const {
  for (std::size_t i = 0, j = coef.size() - 1; i < j; ++i, --j) {
    if (coef[i] != coef[j]) return false;
  }
  return true;
}

BandRational stencil_of_poly(const RationalPoly& q, const mpq_class& w) {
  if (w < 0) throw InvalidArgument("stencil_of_poly: w must be >= 0");
  if (q.coef.empty()) return BandRational{{0}};
  const int deg = q.degree();
  const std::size_t width = 2 * static_cast<std::size_t>(deg) + 1;
  const std::size_t mid = deg;
  std::vector<mpq_class> band(width, 0), next(width, 0);
  band[mid] = q.coef.back();
  const mpq_class centre = 1 - 2 * w;
  // after processing degree k from the top, band is supported on |j| <= deg - k
  for (int k = deg - 1; k >= 0; --k) {
    const std::size_t reach = deg - k;
    for (std::size_t i = mid - reach; i <= mid + reach; ++i) {
      mpq_class v = centre * band[i];
      if (i > 0) v += w * band[i - 1];
      if (i + 1 < width) v += w * band[i + 1];
      next[i] = std::move(v);
    }
    next[mid] += q.coef[static_cast<std::size_t>(k)];
    std::swap(band, next);
  }
  return BandRational{std::move(band)};
}

mpq_class binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return mpq_class(r);
}

namespace {

mpq_class power(const mpq_class& x, unsigned long k) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), k);
  mpq_class r(num, den);
  r.canonicalize();
  return r;
}

mpq_class factorial(int n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return mpq_class(r);
}

}  // namespace

mpq_class rkl1_coefficient_formula(int s, int j, const mpq_class& x) {
  if (s < 0 || j < 0 || j > s) throw InvalidArgument("rkl1_coefficient_formula: need 0 <= j <= s");
  mpq_class acc = 0;
  for (int k = j; k <= s; ++k) {
    mpq_class term = binomial(s, k) * binomial(s + k, k) * power(x, k) * binomial(2 * k, j + k);
    if ((j + k) % 2) {
      acc -= term;
    } else {
      acc += term;
    }
  }
  return acc;
}

namespace {

// Terminating generalized hypergeometric sum with rational parameters.
mpq_class hypergeometric(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b, const mpq_class& z,
                         int terms) {
  mpq_class term = 1, acc = 1;
  for (int m = 0; m + 1 < terms; ++m) {
    for (const auto& ai : a) term *= ai + m;
    for (const auto& bi : b) term /= bi + m;
    term *= z;
    term /= m + 1;
    acc += term;
  }
  return acc;
}

mpq_class hyp3f2(int s, int j, const mpq_class& x) {
  const mpq_class half = frac(1, 2);
  return hypergeometric({mpq_class(j) + half, mpq_class(j + s + 1), mpq_class(j - s)},
                        {mpq_class(j + 1), mpq_class(2 * j + 1)}, 4 * x, s - j + 1);
}

}  // namespace

mpq_class hypergeometric_form(int s, int j, const mpq_class& x) {
  if (s < 0 || j < 0 || j > s) throw InvalidArgument("hypergeometric_form: need 0 <= j <= s");
  const mpq_class lead = factorial(s + j) / (factorial(j) * factorial(j) * factorial(s - j));
  return lead * power(x, j) * hyp3f2(s, j, x);
}

bool clausen_terminating_check(int s, int j, const mpq_class& x) {
  if (s < 0 || j < 0 || j > s) throw InvalidArgument("clausen_terminating_check: need 0 <= j <= s");
  if ((s - j) % 2) throw InvalidArgument("clausen_terminating_check: s - j must be even");
  const mpq_class a = frac(j + s + 1, 2), b = frac(j - s, 2);
  const mpq_class f = hypergeometric({a, b}, {mpq_class(j + 1)}, 4 * x, (s - j) / 2 + 1);
  return hyp3f2(s, j, x) == f * f;
}

bool gegenbauer_recurrence_check(int s_max) {
  RationalPoly prev = gegenbauer(0);
  for (int s = 1; s <= s_max; ++s) {
    const RationalPoly cs = gegenbauer(s);
    const RationalPoly ps = legendre(s);
    RationalPoly rhs;
    rhs.coef.assign(static_cast<std::size_t>(s) + 1, 0);
    for (std::size_t k = 0; k < prev.coef.size(); ++k) rhs.coef[k + 1] += prev.coef[k];
    for (std::size_t k = 0; k < ps.coef.size(); ++k) rhs.coef[k] += (s + 1) * ps.coef[k];
    if (!(cs == rhs)) return false;
    prev = cs;
  }
  return true;
}

namespace {

bool has_blend(SchemeFamily f) { return f == SchemeFamily::rkl2 || f == SchemeFamily::rkg2; }

// Denominator d with x = k c / d for the family's shift weight.
void shift_ratio(SchemeFamily f, int s, mpq_class& num, mpq_class& den) {
  switch (f) {
    case SchemeFamily::rkl1: num = 1; den = s * s + s; break;
    case SchemeFamily::rkl2: num = 2; den = s * s + s - 2; break;
    case SchemeFamily::rkg1: num = 2; den = s * s + 3 * s; break;
    case SchemeFamily::rkg2: num = 3; den = (s + 4) * (s - 1); break;
  }
  if (den == 0) throw InvalidArgument("scheme is degenerate at s = 1");
}

}  // namespace

mpq_class cfl_to_x(SchemeFamily f, int s, const mpq_class& c) {
  mpq_class num, den;
  shift_ratio(f, s, num, den);
  return num * c / den;
}

mpq_class x_to_cfl(SchemeFamily f, int s, const mpq_class& x) {
  mpq_class num, den;
  shift_ratio(f, s, num, den);
  return x * den / num;
}

BandRational scheme_band(SchemeFamily f, int s, const mpq_class& x) {
  if (s < 1) throw InvalidArgument("scheme_band: s must be >= 1");
  if (has_blend(f) && s == 1) return BandRational{{1}};
  const mpq_class w = 2 * x;
  switch (f) {
    case SchemeFamily::rkl1: return stencil_of_poly(legendre(s), w);
    case SchemeFamily::rkl2: {
      const mpq_class b = frac(s * s + s - 2, 2 * s * (s + 1));
      BandRational band = stencil_of_poly(legendre(s), w);
      for (auto& c : band.coef) c *= b;
      band.coef[static_cast<std::size_t>(s)] += 1 - b;
      return band;
    }
    case SchemeFamily::rkg1: {
      BandRational band = stencil_of_poly(gegenbauer(s), w);
      const mpq_class scale = frac(2, (s + 1) * (s + 2));
      for (auto& c : band.coef) c *= scale;
      return band;
    }
    case SchemeFamily::rkg2: {
      const mpq_class a = frac(2 * (s - 1) * (s + 4), 3 * s * (s + 3));
      const mpq_class a2 = frac(4 * (s - 1) * (s + 4), 3L * s * (s + 1) * (s + 2) * (s + 3));
      BandRational band = stencil_of_poly(gegenbauer(s), w);
      for (auto& c : band.coef) c *= a2;
      band.coef[static_cast<std::size_t>(s)] += 1 - a;
      return band;
    }
  }
  return {};
}

std::vector<mpq_class> default_samples() { return {frac(1, 16), frac(1, 8), frac(1, 4)}; }

Certificate verify_monotone(SchemeFamily f, int s, const std::vector<mpq_class>& x_samples) {
  if (s < 1) throw InvalidArgument("verify_monotone: s must be >= 1");
  if (x_samples.empty()) throw InvalidArgument("verify_monotone: no samples");
  Certificate cert;
  cert.family = f;
  cert.s = s;
  cert.degenerate = has_blend(f) && s == 1;
  cert.samples = x_samples;
  bool first = true;
  for (const auto& x : x_samples) {
    if (x < 0) throw InvalidArgument("verify_monotone: samples must be >= 0");
    const BandRational band = scheme_band(f, s, x);
    if (band.sum() != 1 || !band.symmetric()) cert.consistent = false;
    const int m = band.half_width();
    for (int j = -m; j <= m; ++j) {
      const mpq_class& c = band.at(j);
      if (first || c < cert.min_coefficient) {
        cert.min_coefficient = c;
        cert.min_offset = j;
        cert.min_x = x;
        first = false;
      }
    }
  }
  cert.monotone = cert.min_coefficient >= 0;
  return cert;
}

std::string to_string(const mpq_class& q) { return q.get_str(); }

}  // namespace sts::monotone
