#include "mhfx/numeval.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <unordered_map>

#include "mhfx/error.hpp"

namespace mhfx {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Exact: return "exact";
    case Mode::Float: return "float";
    case Mode::Complex: return "complex";
  }
  return "?";
}

PointValue parse_point_value(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  if (s.empty()) fail(ErrorCode::SchemaError, "empty point value");
  if (s.back() != 'i') return PointValue::rational(parse_rational(s));
  std::string body = s.substr(0, s.size() - 1);
  // split at the last sign that is not part of an exponent
  std::size_t cut = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;)
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      cut = i;
      break;
    }
  double re = 0, im = 0;
  std::string im_text = cut == std::string::npos ? body : body.substr(cut);
  if (cut != std::string::npos) re = parse_rational(body.substr(0, cut)).get_d();
  if (im_text == "" || im_text == "+")
    im = 1;
  else if (im_text == "-")
    im = -1;
  else
    im = parse_rational(im_text).get_d();
  return PointValue::complex({re, im});
}

bool EvalPoint::has_complex() const {
  for (const auto& [k, v] : values)
    if (v.is_complex) return true;
  return false;
}

const PointValue& EvalPoint::at(const std::string& var) const {
  auto it = values.find(var);
  if (it == values.end()) fail(ErrorCode::InvalidArgument, "no value given for variable " + var);
  return it->second;
}

// ---------------------------------------------------------------------------
// Value-type plumbing

PrecisionScope::PrecisionScope(unsigned digits10) : old(BigFloat::default_precision()) {
  BigFloat::default_precision(digits10);
}
PrecisionScope::~PrecisionScope() { BigFloat::default_precision(old); }

unsigned digits_for_bits(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

BigFloat big_from_rational(const Rational& q) {
  BigFloat r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

namespace {

template <class V>
struct Num;

template <>
struct Num<Rational> {
  static Rational from(const Rational& q) { return q; }
  static Rational from_int(long v) { return Rational(v); }
  static Rational from_point(const PointValue& p) {
    if (p.is_complex) fail(ErrorCode::InvalidArgument, "complex point value in exact mode");
    return p.exact;
  }
  static double mag(const Rational& v) { return std::fabs(v.get_d()); }
  static Number wrap(const Rational& v) {
    Number n;
    n.mode = Mode::Exact;
    n.exact = v;
    return n;
  }
};

template <>
struct Num<double> {
  static double from(const Rational& q) { return q.get_d(); }
  static double from_int(long v) { return static_cast<double>(v); }
  static double from_point(const PointValue& p) {
    if (p.is_complex) fail(ErrorCode::InvalidArgument, "complex point value in float mode");
    return p.exact.get_d();
  }
  static double mag(double v) { return std::fabs(v); }
  static Number wrap(double v) {
    Number n;
    n.mode = Mode::Float;
    n.real = v;
    return n;
  }
};

template <>
struct Num<long double> {
  static long double from(const Rational& q) {
    PrecisionScope scope(30);
    return big_from_rational(q).convert_to<long double>();
  }
  static long double from_int(long v) { return static_cast<long double>(v); }
  static long double from_point(const PointValue& p) {
    if (p.is_complex) fail(ErrorCode::InvalidArgument, "complex point value in float mode");
    return from(p.exact);
  }
  static double mag(long double v) { return static_cast<double>(std::fabs(v)); }
  static Number wrap(long double v) {
    Number n;
    n.mode = Mode::Float;
    n.real = BigFloat(v);
    return n;
  }
};

template <>
struct Num<BigFloat> {
  static BigFloat from(const Rational& q) { return big_from_rational(q); }
  static BigFloat from_int(long v) { return BigFloat(v); }
  static BigFloat from_point(const PointValue& p) {
    if (p.is_complex) fail(ErrorCode::InvalidArgument, "complex point value in float mode");
    return big_from_rational(p.exact);
  }
  static double mag(const BigFloat& v) { return std::fabs(v.convert_to<double>()); }
  static Number wrap(const BigFloat& v) {
    Number n;
    n.mode = Mode::Float;
    n.real = v;
    return n;
  }
};

template <>
struct Num<Complex> {
  static Complex from(const Rational& q) { return {q.get_d(), 0.0}; }
  static Complex from_int(long v) { return {static_cast<double>(v), 0.0}; }
  static Complex from_point(const PointValue& p) {
    return p.is_complex ? p.z : Complex{p.exact.get_d(), 0.0};
  }
  static double mag(const Complex& v) { return std::abs(v); }
  static Number wrap(const Complex& v) {
    Number n;
    n.mode = Mode::Complex;
    n.cplx = v;
    return n;
  }
};

// ---------------------------------------------------------------------------
// Summation kernel

template <class V>
class Summer {
 public:
  Summer(const MHF& m, const EvalPoint& p, const EvalOptions& o) : tol_(o.tail_tol) {
    r_ = m.folds();
    for (int i = 0; i < r_; ++i) {
      const auto& var = m.variables[static_cast<std::size_t>(i)];
      x_.push_back(Num<V>::from(m.scales[static_cast<std::size_t>(i)]) *
                   Num<V>::from_point(p.at(var)));
      long n = o.N;
      if (o.per_index.size() == static_cast<std::size_t>(r_))
        n = o.per_index[static_cast<std::size_t>(i)];
      if (n < 0) fail(ErrorCode::InvalidArgument, "truncation must be nonnegative");
      limit_.push_back(n);
    }
    for (Side s : {Side::Numerator, Side::Denominator})
      for (const auto& f : m.side(s)) {
        Rational a = f.param.b0;
        if (f.param.b1 != 0) {
          if (!o.eps)
            fail(ErrorCode::InvalidArgument,
                 "parameter " + to_string(f.param) + " depends on eps; supply an eps value");
          a += f.param.b1 * *o.eps;
        }
        Factor fac;
        fac.num = s == Side::Numerator;
        fac.a = Num<V>::from(a);
        fac.is_int = is_integer(a);
        fac.ia = fac.is_int && a.get_num().fits_slong_p() ? a.get_num().get_si() : 0;
        if (fac.is_int && !a.get_num().fits_slong_p()) fac.is_int = false;
        fac.form = f.form;
        factors_.push_back(fac);
      }
    by_depth_.resize(static_cast<std::size_t>(r_));
    monotone_.assign(factors_.size(), std::vector<bool>(static_cast<std::size_t>(r_) + 1, true));
    for (std::size_t j = 0; j < factors_.size(); ++j) {
      for (int d = 0; d < r_; ++d) {
        int c = factors_[j].form[static_cast<std::size_t>(d)];
        if (c != 0) by_depth_[static_cast<std::size_t>(d)].push_back({static_cast<int>(j), c});
      }
      for (int d = r_ - 1; d >= 0; --d)
        monotone_[j][static_cast<std::size_t>(d)] =
            monotone_[j][static_cast<std::size_t>(d) + 1] &&
            factors_[j].form[static_cast<std::size_t>(d)] >= 0;
    }
  }

  V run() {
    State s;
    s.m.assign(static_cast<std::size_t>(r_), 0);
    s.v.assign(factors_.size(), 0);
    s.z.assign(factors_.size(), 0);
    s.prod = Num<V>::from(1);
    if (r_ == 0) return leaf(s);
    return rec(0, s);
  }

 private:
  struct Factor {
    bool num = true;
    V a;
    bool is_int = false;
    long ia = 0;
    IndexForm form;
  };
  struct State {
    std::vector<long> m, v;
    std::vector<int> z;
    V prod;
  };

  void step(State& s, int d) const {
    for (const auto& [j, c] : by_depth_[static_cast<std::size_t>(d)]) {
      const Factor& f = factors_[static_cast<std::size_t>(j)];
      long v = s.v[static_cast<std::size_t>(j)];
      if (c > 0) {
        for (long t = 0; t < c; ++t) {
          if (f.is_int && f.ia + v + t == 0) {
            ++s.z[static_cast<std::size_t>(j)];
            continue;
          }
          V lin = f.a + Num<V>::from_int(v + t);
          if (f.num)
            s.prod *= lin;
          else
            s.prod /= lin;
        }
      } else {
        for (long t = 1; t <= -c; ++t) {
          if (f.is_int && f.ia + v - t == 0) {
            --s.z[static_cast<std::size_t>(j)];
            continue;
          }
          V lin = f.a + Num<V>::from_int(v - t);
          if (f.num)
            s.prod /= lin;
          else
            s.prod *= lin;
        }
      }
      s.v[static_cast<std::size_t>(j)] = v + c;
    }
    long& md = s.m[static_cast<std::size_t>(d)];
    s.prod *= x_[static_cast<std::size_t>(d)];
    s.prod /= Num<V>::from_int(md + 1);
    ++md;
  }

  // The current point and everything reachable by raising indices >= d
  // vanishes.
  bool dead_from(const State& s, int d) const {
    for (std::size_t j = 0; j < factors_.size(); ++j)
      if (factors_[j].num && s.z[j] > 0 && monotone_[j][static_cast<std::size_t>(d)]) return true;
    return false;
  }

  V leaf(const State& s) const {
    bool zero = false, pole = false;
    for (std::size_t j = 0; j < factors_.size(); ++j) {
      int z = factors_[j].num ? s.z[j] : -s.z[j];
      if (z > 0) zero = true;
      if (z < 0) pole = true;
    }
    if (pole) {
      std::string at;
      for (long mi : s.m) at += (at.empty() ? "" : ",") + std::to_string(mi);
      fail(ErrorCode::DenominatorZero, "Pochhammer ratio has a pole at m = (" + at + ")");
    }
    return zero ? Num<V>::from(0) : s.prod;
  }

  V rec(int d, State s) const {
    V total = Num<V>::from(0);
    const long n = limit_[static_cast<std::size_t>(d)];
    int small = 0;
    double prev = std::numeric_limits<double>::infinity();
    for (long md = 0; md <= n; ++md) {
      if (md > 0) step(s, d);
      if (dead_from(s, d)) break;
      V c = d + 1 == r_ ? leaf(s) : rec(d + 1, s);
      total += c;
      if (tol_ > 0) {
        double cm = Num<V>::mag(c);
        ref_ = std::max(ref_, Num<V>::mag(total));
        if (md >= 2 && ref_ > 0 && cm <= tol_ * ref_ && cm <= prev) {
          if (++small >= 2) break;
        } else {
          small = 0;
        }
        prev = cm;
      }
    }
    return total;
  }

  int r_ = 0;
  double tol_ = 0;
  mutable double ref_ = 0;  // largest partial sum seen, the scale for tail_tol
  std::vector<V> x_;
  std::vector<long> limit_;
  std::vector<Factor> factors_;
  std::vector<std::vector<std::pair<int, int>>> by_depth_;
  std::vector<std::vector<bool>> monotone_;
};

template <class V>
V pow_int(const V& x, int e) {
  V r = Num<V>::from(1);
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

template <class V>
V eval_terms_as(const std::vector<Term>& terms, const EvalPoint& p, const EvalOptions& o,
                std::unordered_map<std::string, V>& cache) {
  V total = Num<V>::from(0);
  for (const auto& t : terms) {
    Rational q = t.coeff.coeff(0);
    if (q == 0) continue;
    std::string key = canonical_key(t.mhf);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, Summer<V>(t.mhf, p, o).run()).first;
    V v = Num<V>::from(q) * it->second;
    for (const auto& [var, e] : t.monomial) {
      if (e < 0) fail(ErrorCode::InvalidArgument, "negative monomial exponent on " + var);
      v *= pow_int(Num<V>::from_point(p.at(var)), e);
    }
    total += v;
  }
  return total;
}

// Calls fn(V{}) with the value type selected by the options.
template <class Fn>
auto dispatch(const EvalOptions& o, const EvalPoint& p, Fn&& fn) {
  if (o.mode == Mode::Complex) return fn(Complex{});
  if (p.has_complex())
    fail(ErrorCode::InvalidArgument, "complex point values require complex mode");
  if (o.mode == Mode::Exact) return fn(Rational{});
  if (o.prec_bits <= 53) return fn(double{});
  if (o.prec_bits <= 64) return fn(static_cast<long double>(0));
  PrecisionScope scope(digits_for_bits(o.prec_bits));
  return fn(BigFloat{});
}

}  // namespace

Number eval_mhf(const MHF& m, const EvalPoint& p, const EvalOptions& o) {
  m.validate();
  return dispatch(o, p, [&](auto tag) {
    using V = decltype(tag);
    return Num<V>::wrap(Summer<V>(m, p, o).run());
  });
}

Number eval_terms(const std::vector<Term>& terms, const EvalPoint& p, const EvalOptions& o) {
  return dispatch(o, p, [&](auto tag) {
    using V = decltype(tag);
    std::unordered_map<std::string, V> cache;
    return Num<V>::wrap(eval_terms_as<V>(terms, p, o, cache));
  });
}

std::map<int, Number> eval_expansion(const EpsExpansion& e, const EvalPoint& p,
                                     const EvalOptions& o) {
  return dispatch(o, p, [&](auto tag) {
    using V = decltype(tag);
    std::unordered_map<std::string, V> cache;
    std::map<int, Number> out;
    for (int k = e.min_order(); k < e.truncation; ++k) {
      auto it = e.orders.find(k);
      V v = it == e.orders.end() ? Num<V>::from(0) : eval_terms_as<V>(it->second, p, o, cache);
      out[k] = Num<V>::wrap(v);
    }
    return out;
  });
}

double Number::to_double() const {
  switch (mode) {
    case Mode::Exact: return exact.get_d();
    case Mode::Float: return real.convert_to<double>();
    case Mode::Complex: return cplx.real();
  }
  return 0;
}

Complex Number::to_complex() const {
  return mode == Mode::Complex ? cplx : Complex{to_double(), 0.0};
}

std::string Number::str(int digits) const {
  if (mode == Mode::Complex) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.*e%+.*ei", digits - 1, cplx.real(), digits - 1,
                  cplx.imag());
    return buf;
  }
  if (mode == Mode::Exact) {
    PrecisionScope scope(static_cast<unsigned>(digits) + 10);
    return big_from_rational(exact).str(digits, std::ios_base::scientific);
  }
  return real.str(digits, std::ios_base::scientific);
}



// ---------------------------------------------------------------------------

std::map<int, BigFloat> fd_oracle(const MHF& m, const EvalPoint& p, long N, int K, int d,
                                  const OracleOptions& oo) {
  PrecisionScope scope(oo.digits10);
  const int M = K + d + 1 + oo.extra_points;
  Rational h(oo.h);
  std::vector<Rational> nodes;
  for (int j = 0; static_cast<int>(nodes.size()) < M; ++j) {
    Rational e = h;
    for (int t = 0; t < j / 2; ++t) e /= 2;
    nodes.push_back(j % 2 == 0 ? e : Rational(-e));
  }
  EvalOptions o;
  o.mode = Mode::Float;
  o.N = N;
  // Augmented Vandermonde system [e^k | e^d F(e)]
  std::vector<std::vector<BigFloat>> A(static_cast<std::size_t>(M),
                                       std::vector<BigFloat>(static_cast<std::size_t>(M) + 1));
  for (int j = 0; j < M; ++j) {
    o.eps = nodes[static_cast<std::size_t>(j)];
    BigFloat e = big_from_rational(nodes[static_cast<std::size_t>(j)]);
    BigFloat v = Summer<BigFloat>(m, p, o).run();
    BigFloat pw = 1;
    for (int k = 0; k < M; ++k) {
      A[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = pw;
      pw *= e;
    }
    BigFloat ed = 1;
    for (int k = 0; k < d; ++k) ed *= e;
    A[static_cast<std::size_t>(j)][static_cast<std::size_t>(M)] = v * ed;
  }
  for (int c = 0; c < M; ++c) {
    int piv = c;
    for (int r = c + 1; r < M; ++r)
      if (abs(A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) >
          abs(A[static_cast<std::size_t>(piv)][static_cast<std::size_t>(c)]))
        piv = r;
    std::swap(A[static_cast<std::size_t>(c)], A[static_cast<std::size_t>(piv)]);
    for (int r = 0; r < M; ++r) {
      if (r == c) continue;
      BigFloat f = A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] /
                   A[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
      if (f == 0) continue;
      for (int k = c; k <= M; ++k)
        A[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] -=
            f * A[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
    }
  }
  std::map<int, BigFloat> out;
  for (int k = 0; k <= K + d; ++k)
    out[k - d] = A[static_cast<std::size_t>(k)][static_cast<std::size_t>(M)] /
                 A[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
  return out;
}

}  // namespace mhfx
