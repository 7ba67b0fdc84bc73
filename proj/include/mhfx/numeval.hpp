#pragma once

// Truncated numeric summation of MHFs, evaluation of expansions, eps-series
// of Gamma/power prefactors, and a finite-difference oracle in eps.

#include <boost/multiprecision/mpfr.hpp>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mhfx/calculus.hpp"

namespace mhfx {

using BigFloat = boost::multiprecision::mpfr_float;
using Complex = std::complex<double>;

enum class Mode { Exact, Float, Complex };

const char* mode_name(Mode m);

struct PointValue {
  bool is_complex = false;
  Rational exact;  // when !is_complex
  Complex z;       // when is_complex
  static PointValue rational(const Rational& q) { return {false, q, {q.get_d(), 0.0}}; }
  static PointValue complex(Complex c) { return {true, 0, c}; }
};

// Accepts rationals/decimals ("3/10", "0.3") and complex literals such as
// "11.1-1e-12i" or "-2i".
PointValue parse_point_value(const std::string& text);

struct EvalPoint {
  std::map<std::string, PointValue> values;
  bool has_complex() const;
  const PointValue& at(const std::string& var) const;
};

struct EvalOptions {
  Mode mode = Mode::Exact;
  unsigned prec_bits = 53;  // Float mode: <= 53 double, <= 64 long double, else MPFR
  long N = 60;              // uniform truncation
  std::vector<long> per_index;  // overrides N by index position when sized to the fold
  // Stop a summation direction once two successive contributions fall below
  // tail_tol times the running level sum (magnitudes in double, all modes).
  // 0 sums the full box.
  double tail_tol = 0;
  // Direct evaluation at a rational eps; otherwise parameters must be eps-free.
  std::optional<Rational> eps;
};

struct Number {
  Mode mode = Mode::Exact;
  Rational exact;
  BigFloat real;
  Complex cplx;

  double to_double() const;
  Complex to_complex() const;
  // Decimal rendering with `digits` significant digits.
  std::string str(int digits = 20) const;
};

Number eval_mhf(const MHF& m, const EvalPoint& p, const EvalOptions& o);
// sum of coeff(0) * monomial * MHF, with an MHF cache keyed by canonical form
Number eval_terms(const std::vector<Term>& terms, const EvalPoint& p, const EvalOptions& o);
std::map<int, Number> eval_expansion(const EpsExpansion& e, const EvalPoint& p,
                                     const EvalOptions& o);

// Dense numeric Laurent series over C (complex double or BigFloat).
template <class C>
struct NumSeries {
  int min_order = 0;
  std::vector<C> c;
  int truncation() const { return min_order + static_cast<int>(c.size()); }
  C coeff(int k) const;
  static NumSeries constant(const C& v, int truncation);
};
using CSeries = NumSeries<Complex>;
using RSeries = NumSeries<BigFloat>;
template <class C>
NumSeries<C> operator*(const NumSeries<C>& a, const NumSeries<C>& b);
template <class C>
NumSeries<C> series_exp(const NumSeries<C>& s);  // s has no negative orders
template <class C>
NumSeries<C> series_inverse(const NumSeries<C>& s);
template <class C>
NumSeries<C> series_truncated(const NumSeries<C>& s, int truncation);

struct PowerFactor {
  std::string var;  // named input; empty means `value`
  Complex value;
  EpsLinear exponent;
};
struct GammaFactor {
  EpsLinear arg;
  int power = 1;
};
struct PrefactorSpec {
  Rational re = 1, im = 0;
  int eps_power = 0;
  std::vector<PowerFactor> powers;
  std::vector<GammaFactor> gammas;

  // Only a rational constant and an eps power.
  bool is_rational() const { return im == 0 && powers.empty() && gammas.empty(); }
  // Upper bound on the pole depth in eps.
  int pole_depth() const;
};

// Orders min..K of the prefactor (truncation K+1), complex double.
CSeries prefactor_expand(const PrefactorSpec& s, const EvalPoint& p, int K);
// Same at the current BigFloat precision; needs a real constant and positive
// real power bases.
RSeries prefactor_expand_real(const PrefactorSpec& s, const EvalPoint& p, int K);
bool has_real_expansion(const PrefactorSpec& s, const EvalPoint& p);

// Scoped BigFloat default precision in decimal digits.
struct PrecisionScope {
  unsigned old;
  explicit PrecisionScope(unsigned digits10);
  ~PrecisionScope();
};
unsigned digits_for_bits(unsigned bits);
BigFloat big_from_rational(const Rational& q);

// Coefficients of eps^k, k = -pole_depth..K, fitted from direct evaluations of
// eps^pole_depth * F(eps) on a geometric stencil, at `digits10` decimal digits.
struct OracleOptions {
  double h = 1e-3;
  int extra_points = 6;
  unsigned digits10 = 80;
};
std::map<int, BigFloat> fd_oracle(const MHF& m, const EvalPoint& p, long N, int K,
                                  int pole_depth, const OracleOptions& oo = {});

}  // namespace mhfx
