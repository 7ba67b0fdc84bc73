#pragma once

// Independent oracles and random generators shared by the test binaries.

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mhfx/problem.hpp"
#include "mhfx/serialize.hpp"
#include "mhfx/verify.hpp"

namespace testing {

using namespace mhfx;

inline Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

// Pochhammer symbol by direct product; negative n via (a)_{-n} = 1/((a-1)...(a-n)).
inline Rational poch(const Rational& a, long n) {
  Rational r = 1;
  if (n >= 0)
    for (long t = 0; t < n; ++t) r *= a + t;
  else
    for (long t = 1; t <= -n; ++t) r /= a - t;
  r.canonicalize();
  return r;
}

inline Rational factorial(long n) {
  Rational r = 1;
  for (long t = 2; t <= n; ++t) r *= t;
  return r;
}

inline Rational rpow(const Rational& x, long n) {
  Rational r = 1;
  for (long t = 0; t < n; ++t) r *= x;
  return r;
}

// Brute-force box sum of an MHF at rational arguments: every term is rebuilt
// from scratch with direct Pochhammer products, no recurrences.
inline Rational brute_sum(const MHF& m, const std::map<std::string, Rational>& x, long N,
                          const Rational& eps = 0) {
  const int r = m.folds();
  std::vector<long> idx(static_cast<std::size_t>(r), 0);
  Rational total = 0;
  for (;;) {
    Rational t = 1;
    for (const auto& f : m.numerator) {
      long n = 0;
      for (int i = 0; i < r; ++i) n += f.form[i] * idx[i];
      t *= poch(f.param.b0 + f.param.b1 * eps, n);
    }
    for (const auto& f : m.denominator) {
      long n = 0;
      for (int i = 0; i < r; ++i) n += f.form[i] * idx[i];
      t /= poch(f.param.b0 + f.param.b1 * eps, n);
    }
    for (int i = 0; i < r; ++i) {
      t *= rpow(m.scales[i] * x.at(m.variables[i]), idx[i]);
      t /= factorial(idx[i]);
    }
    total += t;
    int i = r - 1;
    while (i >= 0 && idx[i] == N) idx[i--] = 0;
    if (i < 0) break;
    ++idx[i];
  }
  total.canonicalize();
  return total;
}

// coeff(eps^0) * monomial * brute_sum
inline Rational brute_term(const Term& t, const std::map<std::string, Rational>& x, long N) {
  Rational v = t.coeff.coeff(0);
  for (const auto& [var, e] : t.monomial) v *= rpow(x.at(var), e);
  return v * brute_sum(t.mhf, x, N);
}

// Li2(x) = sum_k x^k / k^2
inline double li2(double x) {
  double s = 0, p = 1;
  for (int k = 1; k < 400; ++k) {
    p *= x;
    s += p / (static_cast<double>(k) * k);
  }
  return s;
}

inline EvalPoint point(const std::map<std::string, Rational>& x) {
  EvalPoint p;
  for (const auto& [k, v] : x) p.values[k] = PointValue::rational(v);
  return p;
}

inline EvalOptions exact(long N, double tail = 0) {
  EvalOptions o;
  o.mode = Mode::Exact;
  o.N = N;
  o.tail_tol = tail;
  return o;
}

inline EvalOptions floating(long N, unsigned bits = 53, double tail = 0) {
  EvalOptions o;
  o.mode = Mode::Float;
  o.N = N;
  o.prec_bits = bits;
  o.tail_tol = tail;
  return o;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Exact rational of a binary64 value.
inline Rational binary64(double v) {
  Rational r(v);
  r.canonicalize();
  return r;
}

inline MHF appell_f2(const EpsLinear& a1, const EpsLinear& a2, const EpsLinear& a3,
                     const EpsLinear& b1, const EpsLinear& b2) {
  MHF m;
  m.variables = {"x", "y"};
  m.scales = {1, 1};
  m.numerator = {{a1, {1, 1}}, {a2, {1, 0}}, {a3, {0, 1}}};
  m.denominator = {{b1, {1, 0}}, {b2, {0, 1}}};
  return m;
}

inline MHF appell_f1(const EpsLinear& a, const EpsLinear& b1, const EpsLinear& b2,
                     const EpsLinear& c) {
  MHF m;
  m.variables = {"x", "y"};
  m.scales = {1, 1};
  m.numerator = {{a, {1, 1}}, {b1, {1, 0}}, {b2, {0, 1}}};
  m.denominator = {{c, {1, 1}}};
  return m;
}

// Hand-rolled generators over a seeded engine.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  Rational rational(long lo, long hi, long max_den = 6) {
    Rational r(integer(lo * max_den, hi * max_den), integer(1, max_den));
    r.canonicalize();
    return r;
  }

  // A rational that is not an integer and stays away from nonpositive integers.
  Rational safe_param() {
    for (;;) {
      Rational r = rational(-3, 4, 5);
      if (!is_integer(r)) return r;
    }
  }

  EpsSeries series(int lo = -2, int hi = 2, int trunc_extra = 3) {
    const int mo = static_cast<int>(integer(lo, hi));
    const int len = static_cast<int>(integer(1, trunc_extra + 2));
    std::vector<Rational> c;
    for (int i = 0; i < len; ++i) c.push_back(rational(-5, 5, 7));
    return EpsSeries::from_coefficients(mo, c, mo + len);
  }

  EpsSeries series_in(int mo, int trunc) {
    std::vector<Rational> c;
    for (int k = mo; k < trunc; ++k) c.push_back(rational(-5, 5, 7));
    return EpsSeries::from_coefficients(mo, c, trunc);
  }

  // Small convergent MHF with nonnegative unit-ish forms, r <= max_r.
  // eps enters one or two parameters; lower parameters never hit 0, -1, ...
  MHF mhf(int max_r = 2, bool with_eps = true) {
    for (;;) {
      MHF m = raw_mhf(max_r, with_eps);
      // positive radius of convergence in every index
      bool ok = true;
      for (int i = 0; i < m.folds(); ++i) {
        int up = 0, down = 1;
        for (const auto& f : m.numerator) up += f.form[static_cast<std::size_t>(i)];
        for (const auto& f : m.denominator) down += f.form[static_cast<std::size_t>(i)];
        ok = ok && up <= down;
      }
      if (ok) return m;
    }
  }

  MHF raw_mhf(int max_r, bool with_eps) {
    MHF m;
    const int r = static_cast<int>(integer(1, max_r));
    const char* names[] = {"x", "y", "z"};
    for (int i = 0; i < r; ++i) m.variables.push_back(names[i]);
    m.scales.assign(static_cast<std::size_t>(r), 1);
    auto form = [&] {
      IndexForm f(static_cast<std::size_t>(r), 0);
      for (auto& e : f) e = static_cast<int>(integer(0, 1));
      if (std::all_of(f.begin(), f.end(), [](int e) { return e == 0; }))
        f[static_cast<std::size_t>(integer(0, r - 1))] = 1;
      return f;
    };
    const int nu = static_cast<int>(integer(1, 3));
    const int nd = static_cast<int>(integer(1, 2));
    for (int j = 0; j < nu; ++j) m.numerator.push_back({EpsLinear(safe_param()), form()});
    for (int j = 0; j < nd; ++j) {
      Rational b = safe_param();
      if (b < 0) b = -b;
      m.denominator.push_back({EpsLinear(b), form()});
    }
    if (with_eps) {
      const int k = static_cast<int>(integer(1, 2));
      for (int t = 0; t < k; ++t) {
        auto& side = coin() ? m.numerator : m.denominator;
        const long b1s[] = {-2, -1, 1, 2};
        side[static_cast<std::size_t>(integer(0, static_cast<long>(side.size()) - 1))].param.b1 =
            b1s[integer(0, 3)];
      }
    }
    return m;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Reduced step-down operator check: H = d1(eps, x) d/dx + d0(eps, x) applied
// to the Taylor expansion of the secondary function, against laurent_expand
// of the target. Coefficients are ratios of polynomials in eps whose
// coefficients are polynomials in x.
struct ReducedHRow {
  Rational x;
  int order;
  Rational reduced, unreduced;
};

inline EpsSeries poly_eps_at(const Json& coeffs, const Rational& x, int truncation) {
  std::vector<Rational> c;
  for (const auto& px : coeffs) {
    Rational v = 0, xp = 1;
    for (const auto& a : px) {
      v += parse_rational(a.get<std::string>()) * xp;
      xp *= x;
    }
    c.push_back(v);
  }
  while (static_cast<int>(c.size()) < truncation) c.push_back(0);
  c.resize(static_cast<std::size_t>(truncation));
  return EpsSeries::from_coefficients(0, c, truncation);
}

inline std::vector<ReducedHRow> reduced_h_rows(long N = 200, double tail = 1e-30) {
  const Json fx = read_json_file(default_fixture_dir() + "/operators/gauss-reduced-h.json");
  const MHF target = mhf_from_json(fx["target"]["mhf"]);
  const MHF secondary = mhf_from_json(fx["secondary"]["mhf"]);
  const std::string var = fx["variable"].get<std::string>();
  int K = 0;
  for (const auto& k : fx["orders"]) K = std::max(K, k.get<int>());
  const int depth = 1;  // the d1 coefficient carries 1/eps
  const int T = K + 1 + depth;
  EpsExpansion f = taylor_expand(secondary, T - 1);
  EpsExpansion df;
  df.truncation = f.truncation;
  for (const auto& [k, ts] : f.orders)
    for (const auto& t : ts)
      for (const auto& d : arg_derivative(t, var)) df.orders[k].push_back(d);
  EpsExpansion l = laurent_expand(target, K);

  std::vector<ReducedHRow> rows;
  for (const auto& xs : fx["points"]) {
    const Rational x0 = parse_rational(xs.get<std::string>());
    const EvalPoint p = point({{var, x0}});
    auto dense = [&](const EpsExpansion& e) {
      std::vector<Rational> c(static_cast<std::size_t>(T), 0);
      for (const auto& [k, v] : eval_expansion(e, p, exact(N, tail)))
        if (k >= 0 && k < T) c[static_cast<std::size_t>(k)] = v.exact;
      return EpsSeries::from_coefficients(0, c, T);
    };
    const EpsSeries F = dense(f), dF = dense(df);
    const EpsSeries d1 = poly_eps_at(fx["d1"]["num"], x0, T + 2) *
                         laurent_invert(poly_eps_at(fx["d1"]["den"], x0, T + 2));
    const EpsSeries d0 = poly_eps_at(fx["d0"]["num"], x0, T + 2) *
                         laurent_invert(poly_eps_at(fx["d0"]["den"], x0, T + 2));
    const EpsSeries h = d1 * dF + d0 * F;
    const auto lv = eval_expansion(l, p, exact(N, tail));
    for (const auto& kj : fx["orders"]) {
      const int k = kj.get<int>();
      auto it = lv.find(k);
      rows.push_back({x0, k, h.coeff(k), it == lv.end() ? Rational(0) : it->second.exact});
    }
  }
  return rows;
}

}  // namespace testing
