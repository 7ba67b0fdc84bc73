// Numeric eps-series of Gamma functions and powers.

#include <boost/math/special_functions/polygamma.hpp>

#include "mhfx/error.hpp"
#include "mhfx/numeval.hpp"

namespace mhfx {

namespace {

template <class C>
C zero_of() {
  return C(0);
}

template <class C>
C from_big(const BigFloat& x);
template <>
Complex from_big<Complex>(const BigFloat& x) {
  return {x.convert_to<double>(), 0.0};
}
template <>
BigFloat from_big<BigFloat>(const BigFloat& x) {
  return x;
}

}  // namespace

template <class C>
C NumSeries<C>::coeff(int k) const {
  if (k >= truncation())
    fail(ErrorCode::TruncationTooShallow, "numeric series coefficient beyond truncation");
  if (k < min_order) return zero_of<C>();
  return c[static_cast<std::size_t>(k - min_order)];
}

template <class C>
NumSeries<C> NumSeries<C>::constant(const C& v, int truncation) {
  NumSeries s;
  s.c.assign(static_cast<std::size_t>(std::max(0, truncation)), zero_of<C>());
  if (!s.c.empty()) s.c[0] = v;
  return s;
}

template <class C>
NumSeries<C> operator*(const NumSeries<C>& a, const NumSeries<C>& b) {
  NumSeries<C> r;
  r.min_order = a.min_order + b.min_order;
  int hi = std::min(a.min_order + b.truncation(), b.min_order + a.truncation());
  int n = std::max(0, hi - r.min_order);
  r.c.assign(static_cast<std::size_t>(n), zero_of<C>());
  for (int i = 0; i < static_cast<int>(a.c.size()) && i < n; ++i)
    for (int j = 0; j < static_cast<int>(b.c.size()) && i + j < n; ++j)
      r.c[static_cast<std::size_t>(i + j)] +=
          a.c[static_cast<std::size_t>(i)] * b.c[static_cast<std::size_t>(j)];
  return r;
}

template <class C>
NumSeries<C> series_truncated(const NumSeries<C>& s, int truncation) {
  if (truncation > s.truncation())
    fail(ErrorCode::TruncationTooShallow, "numeric series is not known to the requested order");
  NumSeries<C> r = s;
  r.c.resize(static_cast<std::size_t>(std::max(0, truncation - s.min_order)), zero_of<C>());
  return r;
}

template <class C>
NumSeries<C> series_exp(const NumSeries<C>& s) {
  if (s.min_order < 0) fail(ErrorCode::InvalidArgument, "exp of a series with a pole");
  const int T = s.truncation();
  NumSeries<C> out;
  if (T <= 0) return out;
  std::vector<C> a(static_cast<std::size_t>(T));
  for (int k = 0; k < T; ++k) a[static_cast<std::size_t>(k)] = s.coeff(k);
  std::vector<C> e(a.size(), zero_of<C>());
  e[0] = exp(a[0]);
  for (std::size_t n = 1; n < e.size(); ++n) {
    C acc = zero_of<C>();
    for (std::size_t k = 1; k <= n; ++k) acc += C(static_cast<double>(k)) * a[k] * e[n - k];
    e[n] = acc / C(static_cast<double>(n));
  }
  out.c = std::move(e);
  return out;
}

template <class C>
NumSeries<C> series_inverse(const NumSeries<C>& s) {
  std::size_t lead = 0;
  while (lead < s.c.size() && s.c[lead] == zero_of<C>()) ++lead;
  if (lead == s.c.size()) fail(ErrorCode::IdenticallyZero, "cannot invert a zero series");
  std::vector<C> c(s.c.begin() + static_cast<std::ptrdiff_t>(lead), s.c.end());
  std::vector<C> d(c.size(), zero_of<C>());
  d[0] = C(1) / c[0];
  for (std::size_t k = 1; k < c.size(); ++k) {
    C acc = zero_of<C>();
    for (std::size_t j = 1; j <= k; ++j) acc += c[j] * d[k - j];
    d[k] = -acc * d[0];
  }
  NumSeries<C> r;
  r.min_order = -(s.min_order + static_cast<int>(lead));
  r.c = std::move(d);
  return r;
}

namespace {

BigFloat mp_euler() {
  BigFloat r;
  mpfr_const_euler(r.backend().data(), MPFR_RNDN);
  return r;
}
BigFloat mp_log2() {
  BigFloat r;
  mpfr_const_log2(r.backend().data(), MPFR_RNDN);
  return r;
}
BigFloat mp_zeta(unsigned long k) {
  BigFloat r;
  mpfr_zeta_ui(r.backend().data(), k, MPFR_RNDN);
  return r;
}
BigFloat mp_gamma(const BigFloat& x) {
  BigFloat r;
  mpfr_gamma(r.backend().data(), x.backend().data(), MPFR_RNDN);
  return r;
}

// Taylor coefficients of log Gamma(f + z) - log Gamma(f), k = 1..T-1, for
// f in (0, 1].
std::vector<BigFloat> log_gamma_coeffs(const Rational& f, int T) {
  std::vector<BigFloat> l(static_cast<std::size_t>(std::max(T, 1)), BigFloat(0));
  const BigFloat g = mp_euler();
  for (int k = 1; k < T; ++k) {
    BigFloat v;
    if (f == 1) {
      v = k == 1 ? BigFloat(-g) : BigFloat(mp_zeta(static_cast<unsigned long>(k)) / k);
    } else if (f == Rational(1, 2)) {
      if (k == 1) {
        v = -g - 2 * mp_log2();
      } else {
        BigFloat p2 = pow(BigFloat(2), k) - 1;
        v = p2 * mp_zeta(static_cast<unsigned long>(k)) / k;
      }
    } else {
      // psi^(k-1)(f)/k!, double precision only
      double fact = 1;
      for (int j = 2; j <= k; ++j) fact *= j;
      v = boost::math::polygamma(k - 1, f.get_d()) / fact;
    }
    if ((f == 1 || f == Rational(1, 2)) && k >= 2 && k % 2 == 1) v = -v;
    l[static_cast<std::size_t>(k)] = v;
  }
  return l;
}

// Gamma(b0 + b1 eps) through eps^(T-1).
template <class C>
NumSeries<C> gamma_series(const EpsLinear& arg, int T) {
  if (arg.b1 == 0) {
    if (arg.nonpositive_integer_at_zero())
      fail(ErrorCode::GammaPoleUnhandled, "Gamma(" + to_string(arg) + ") is a pole");
    return NumSeries<C>::constant(from_big<C>(mp_gamma(big_from_rational(arg.b0))), T);
  }
  // a = f + n with f in (0, 1]
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), arg.b0.get_num_mpz_t(), arg.b0.get_den_mpz_t());
  Rational f = arg.b0 - Rational(fl);
  if (f == 0) f = 1;
  const long n = to_long(arg.b0 - f);
  const int Tb = T + 2 * static_cast<int>(std::abs(n)) + 2;
  const BigFloat b = big_from_rational(arg.b1);

  auto l = log_gamma_coeffs(f, Tb);
  NumSeries<C> ls;
  ls.c.assign(static_cast<std::size_t>(Tb), zero_of<C>());
  BigFloat bk = 1;
  for (int k = 1; k < Tb; ++k) {
    bk *= b;
    ls.c[static_cast<std::size_t>(k)] = from_big<C>(l[static_cast<std::size_t>(k)] * bk);
  }
  NumSeries<C> g = series_exp(ls);
  const C gf = from_big<C>(mp_gamma(big_from_rational(f)));
  for (auto& v : g.c) v *= gf;

  auto linear = [&](const Rational& c) {
    NumSeries<C> s = NumSeries<C>::constant(from_big<C>(big_from_rational(c)), Tb);
    if (Tb > 1) s.c[1] = from_big<C>(b);
    return s;
  };
  for (long j = 0; j < n; ++j) g = g * linear(f + j);
  for (long j = 1; j <= -n; ++j) g = g * series_inverse(linear(f - j));
  return series_truncated(g, T);
}

template <class C, class LogFn>
NumSeries<C> expand_generic(const PrefactorSpec& s, int K, const C& constant,
                            LogFn log_of) {
  int poles = 0;
  for (const auto& g : s.gammas)
    if (g.arg.b1 != 0 && g.arg.nonpositive_integer_at_zero()) poles += std::abs(g.power);
  const int T = K + 1 + 2 * poles + std::abs(s.eps_power) + 2;
  NumSeries<C> acc = NumSeries<C>::constant(constant, T);
  acc.min_order += s.eps_power;
  for (const auto& pw : s.powers) {
    C lg = log_of(pw);
    NumSeries<C> l = NumSeries<C>::constant(from_big<C>(big_from_rational(pw.exponent.b0)) * lg, T);
    if (T > 1) l.c[1] = from_big<C>(big_from_rational(pw.exponent.b1)) * lg;
    acc = acc * series_exp(l);
  }
  for (const auto& g : s.gammas) {
    if (g.power == 0) continue;
    NumSeries<C> f = gamma_series<C>(g.arg, T);
    if (g.power < 0) f = series_inverse(f);
    for (int i = 0; i < std::abs(g.power); ++i) acc = acc * f;
  }
  return series_truncated(acc, K + 1);
}

PointValue base_value(const PowerFactor& pw, const EvalPoint& p) {
  if (!pw.var.empty()) return p.at(pw.var);
  return PointValue::complex(pw.value);
}

}  // namespace

int PrefactorSpec::pole_depth() const {
  int d = -eps_power;
  for (const auto& g : gammas)
    if (g.arg.b1 != 0 && g.arg.nonpositive_integer_at_zero()) d += g.power;
  return d;
}

CSeries prefactor_expand(const PrefactorSpec& s, const EvalPoint& p, int K) {
  PrecisionScope scope(40);
  return expand_generic<Complex>(s, K, Complex{s.re.get_d(), s.im.get_d()},
                                 [&](const PowerFactor& pw) {
                                   PointValue v = base_value(pw, p);
                                   Complex z = v.is_complex ? v.z : Complex{v.exact.get_d(), 0};
                                   if (z == Complex{})
                                     fail(ErrorCode::InvalidArgument, "zero power base");
                                   return std::log(z);
                                 });
}

bool has_real_expansion(const PrefactorSpec& s, const EvalPoint& p) {
  if (s.im != 0) return false;
  for (const auto& pw : s.powers) {
    if (pw.var.empty()) return false;
    const PointValue& v = p.at(pw.var);
    if (v.is_complex || v.exact <= 0) return false;
  }
  return true;
}

RSeries prefactor_expand_real(const PrefactorSpec& s, const EvalPoint& p, int K) {
  if (!has_real_expansion(s, p))
    fail(ErrorCode::InvalidArgument, "prefactor needs complex arithmetic at this point");
  return expand_generic<BigFloat>(s, K, big_from_rational(s.re), [&](const PowerFactor& pw) {
    return BigFloat(log(big_from_rational(p.at(pw.var).exact)));
  });
}

template struct NumSeries<Complex>;
template struct NumSeries<BigFloat>;
template CSeries operator*(const CSeries&, const CSeries&);
template RSeries operator*(const RSeries&, const RSeries&);
template CSeries series_exp(const CSeries&);
template RSeries series_exp(const RSeries&);
template CSeries series_inverse(const CSeries&);
template RSeries series_inverse(const RSeries&);
template CSeries series_truncated(const CSeries&, int);
template RSeries series_truncated(const RSeries&, int);

}  // namespace mhfx
