#include "mhfx/laurent.hpp"

#include <cmath>
#include <sstream>

#include "mhfx/error.hpp"

namespace mhfx {

Classification classify_singular(const MHF& m) {
  Classification c;
  for (std::size_t j = 0; j < m.denominator.size(); ++j)
    if (m.denominator[j].param.nonpositive_integer_at_zero()) {
      c.taylor = false;
      c.singular.push_back(j);
    }
  return c;
}

StepDownOperator StepDownOperator::identity(int truncation) {
  StepDownOperator h;
  h.terms[{}] = EpsSeries::constant(1, truncation);
  return h;
}

int StepDownOperator::min_order() const {
  int lo = truncation();
  for (const auto& [k, c] : terms) lo = std::min(lo, c.min_order());
  return lo;
}

int StepDownOperator::truncation() const {
  if (terms.empty()) return 0;
  int t = terms.begin()->second.truncation();
  for (const auto& [k, c] : terms) t = std::min(t, c.truncation());
  return t;
}

StepDownOperator operator*(const StepDownOperator& a, const StepDownOperator& b) {
  StepDownOperator out;
  for (const auto& [ka, ca] : a.terms)
    for (const auto& [kb, cb] : b.terms) {
      ThetaMonomial k = ka;
      for (const auto& [v, e] : kb) k[v] += e;
      EpsSeries p = ca * cb;
      auto it = out.terms.find(k);
      if (it == out.terms.end())
        out.terms.emplace(k, p);
      else
        it->second += p;
    }
  // Drop coefficients that cancelled and bring all to a common truncation.
  int t = out.truncation();
  for (auto it = out.terms.begin(); it != out.terms.end();) {
    it->second = it->second.truncated(t);
    it = it->second.is_zero() ? out.terms.erase(it) : std::next(it);
  }
  return out;
}

bool operator==(const StepDownOperator& a, const StepDownOperator& b) { return a.terms == b.terms; }

std::string to_string(const StepDownOperator& h) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : h.terms) {
    if (!first) os << " + ";
    first = false;
    os << "[" << to_string(c) << "]";
    for (const auto& [v, e] : k) os << "*theta_" << v << (e != 1 ? "^" + std::to_string(e) : "");
  }
  return first ? "0" : os.str();
}

namespace {

std::map<std::string, int> theta_form_of(const MHF& m, const IndexForm& form) {
  std::map<std::string, int> tf;
  std::map<std::string, int> seen;
  for (int i = 0; i < m.folds(); ++i) {
    const auto& v = m.variables[static_cast<std::size_t>(i)];
    int c = form[static_cast<std::size_t>(i)];
    auto [it, fresh] = seen.emplace(v, c);
    if (!fresh && it->second != c)
      fail(ErrorCode::UnsupportedForm,
           "indices sharing variable " + v + " enter the form " + to_string(form) +
               " with different weights");
    if (c != 0) tf[v] = c;
  }
  return tf;
}

}  // namespace

Secondary build_secondary(const MHF& m) {
  Secondary s;
  s.mhf = m;
  for (std::size_t j : classify_singular(m).singular) {
    auto& f = s.mhf.denominator[j];
    StepChain chain;
    chain.theta_form = theta_form_of(m, f.form);
    const long b0 = to_long(f.param.b0);
    for (long k = b0; k <= 0; ++k) chain.steps.push_back({Rational(k), f.param.b1});
    f.param = {Rational(1), f.param.b1};
    s.chains.push_back(std::move(chain));
  }
  return s;
}

StepDownOperator unit_step_down(const EpsLinear& b, const std::map<std::string, int>& tf,
                                int truncation) {
  EpsSeries inv = laurent_invert(EpsSeries::from_linear(b, truncation));
  StepDownOperator h;
  h.terms[{}] = EpsSeries::constant(1, inv.truncation());
  for (const auto& [v, c] : tf) {
    if (c == 0) continue;
    h.terms[{{v, 1}}] = inv.scaled(c);
  }
  return h;
}

int pole_depth(const std::vector<StepChain>& chains) {
  int p = 0;
  for (const auto& c : chains)
    for (const auto& b : c.steps)
      if (b.b0 == 0) ++p;
  return p;
}

StepDownOperator compose_chain(const std::vector<StepChain>& chains, int truncation) {
  StepDownOperator h = StepDownOperator::identity(truncation);
  for (const auto& c : chains)
    for (const auto& b : c.steps) h = h * unit_step_down(b, c.theta_form, truncation);
  return h;
}

namespace {

// Applies theta^alpha to a term list, caching intermediate powers.
class ThetaCache {
 public:
  explicit ThetaCache(const std::vector<Term>& base) { cache_[{}] = base; }

  const std::vector<Term>& get(const ThetaMonomial& alpha) {
    auto it = cache_.find(alpha);
    if (it != cache_.end()) return it->second;
    // peel one theta off the first variable with positive exponent
    ThetaMonomial lower = alpha;
    std::string var;
    for (auto& [v, e] : lower)
      if (e > 0) {
        var = v;
        if (--e == 0) lower.erase(v);
        break;
      }
    const std::vector<Term> prev = get(lower);
    TermSum sum;
    for (const auto& t : prev) sum.add(theta_apply(t, var));
    return cache_[alpha] = sum.take();
  }

 private:
  std::map<ThetaMonomial, std::vector<Term>> cache_;
};

}  // namespace

EpsExpansion apply_operator(const StepDownOperator& h, const EpsExpansion& e, int K) {
  const int hmin = h.min_order();
  const int gmin = e.orders.empty() ? 0 : e.orders.begin()->first;
  const int reach = std::min(e.truncation + hmin, h.truncation() + std::min(gmin, 0));
  if (reach < K + 1)
    fail(ErrorCode::TruncationTooShallow,
         "operator application is only known below eps^" + std::to_string(reach) +
             ", requested eps^" + std::to_string(K));
  std::map<int, TermSum> out;
  for (const auto& [j, terms] : e.orders) {
    ThetaCache cache(terms);
    for (const auto& [alpha, coeff] : h.terms) {
      if (coeff.is_zero()) continue;
      for (int i = coeff.min_order(); i < coeff.truncation() && i + j <= K; ++i) {
        Rational hi = coeff.coeff(i);
        if (hi == 0) continue;
        for (const auto& t : cache.get(alpha)) {
          Term w = t;
          w.coeff = EpsSeries::constant(hi * t.coeff.coeff(0), 1);
          out[i + j].add(w);
        }
      }
    }
  }
  EpsExpansion r;
  r.truncation = K + 1;
  for (auto& [n, sum] : out) {
    auto terms = sum.take();
    if (!terms.empty()) r.orders[n] = std::move(terms);
  }
  return r;
}

EpsExpansion laurent_expand(const MHF& m, int K) {
  if (classify_singular(m).taylor) return taylor_expand(m, K);
  Secondary s = build_secondary(m);
  const int P = pole_depth(s.chains);
  int steps = 0;
  for (const auto& c : s.chains) steps += static_cast<int>(c.steps.size());
  StepDownOperator h = compose_chain(s.chains, K + 1 + 2 * steps);
  EpsExpansion g = taylor_expand(s.mhf, K + P);
  return apply_operator(h, g, K);
}

// ---------------------------------------------------------------------------
// Annihilators

namespace {

ThetaPoly poly_const(const Rational& c, int r) {
  ThetaPoly p;
  if (c != 0) p[std::vector<int>(static_cast<std::size_t>(r), 0)] = c;
  return p;
}

ThetaPoly poly_mul(const ThetaPoly& a, const ThetaPoly& b) {
  ThetaPoly out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) {
      std::vector<int> k = ka;
      for (std::size_t i = 0; i < k.size(); ++i) k[i] += kb[i];
      out[k] += ca * cb;
    }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

// c + form . theta
ThetaPoly poly_linear(const Rational& c, const IndexForm& form) {
  const int r = static_cast<int>(form.size());
  ThetaPoly p = poly_const(c, r);
  for (int i = 0; i < r; ++i)
    if (form[static_cast<std::size_t>(i)] != 0) {
      std::vector<int> k(static_cast<std::size_t>(r), 0);
      k[static_cast<std::size_t>(i)] = 1;
      p[k] += form[static_cast<std::size_t>(i)];
    }
  return p;
}

}  // namespace

Annihilator build_annihilator(const MHF& m, int index, std::optional<Rational> eps) {
  const int r = m.folds();
  Annihilator a;
  if (r == 0 && index == 0) {
    // constant series: L = 1/x, nothing to sum
    a.h = poly_const(1, 0);
    return a;
  }
  if (index < 0 || index >= r) fail(ErrorCode::InvalidArgument, "annihilator index out of range");
  a.index = index;
  a.g = poly_const(m.scales[static_cast<std::size_t>(index)], r);
  IndexForm ei(static_cast<std::size_t>(r), 0);
  ei[static_cast<std::size_t>(index)] = 1;
  a.h = poly_linear(1, ei);
  for (Side s : {Side::Numerator, Side::Denominator})
    for (const auto& f : m.side(s)) {
      Rational p = f.param.b0;
      if (f.param.b1 != 0) {
        if (!eps) fail(ErrorCode::InvalidArgument, "annihilator needs an eps value");
        p += f.param.b1 * *eps;
      }
      const int c = f.form[static_cast<std::size_t>(index)];
      // (p)_{n+c}/(p)_n with n = form.theta
      ThetaPoly& up = (s == Side::Numerator) == (c > 0) ? a.g : a.h;
      for (int t = 0; t < std::abs(c); ++t)
        up = poly_mul(up, poly_linear(c > 0 ? Rational(p + t) : Rational(p - t - 1), f.form));
    }
  return a;
}

Rational eval_theta_poly(const ThetaPoly& p, const std::vector<long>& m) {
  Rational v = 0;
  for (const auto& [k, c] : p) {
    Rational t = c;
    for (std::size_t i = 0; i < k.size(); ++i)
      for (int e = 0; e < k[i]; ++e) t *= m[i];
    v += t;
  }
  return v;
}

namespace {

double poly_double(const ThetaPoly& p, const std::vector<long>& m) {
  double v = 0;
  for (const auto& [k, c] : p) {
    double t = c.get_d();
    for (std::size_t i = 0; i < k.size(); ++i) t *= std::pow(static_cast<double>(m[i]), k[i]);
    v += t;
  }
  return v;
}

long double poch_long(long double a, long n) {
  long double r = 1;
  if (n >= 0)
    for (long t = 0; t < n; ++t) r *= a + static_cast<long double>(t);
  else
    for (long t = 1; t <= -n; ++t) r /= a - static_cast<long double>(t);
  return r;
}

}  // namespace

double annihilator_residual(const MHF& m, const Annihilator& a, const EvalPoint& p, long N) {
  const int r = m.folds();
  // long double keeps the direct products finite for N up to several hundred
  std::vector<long double> x(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i)
    x[static_cast<std::size_t>(i)] = m.scales[static_cast<std::size_t>(i)].get_d() *
                                     p.at(m.variables[static_cast<std::size_t>(i)]).exact.get_d();
  std::vector<long> idx(static_cast<std::size_t>(r), 0);
  long double sum = 0;
  for (;;) {
    long double term = 1;
    for (Side s : {Side::Numerator, Side::Denominator})
      for (const auto& f : m.side(s)) {
        long double v = poch_long(f.param.b0.get_d(), form_value(f.form, idx));
        term = s == Side::Numerator ? term * v : term / v;
      }
    for (int i = 0; i < r; ++i) {
      const long n = idx[static_cast<std::size_t>(i)];
      term *= std::pow(x[static_cast<std::size_t>(i)], static_cast<long double>(n));
      term /= std::tgamma(static_cast<long double>(n) + 1);
    }
    std::vector<long> shifted = idx;
    shifted[static_cast<std::size_t>(a.index)] -= 1;
    const long double xi = p.at(m.variables[static_cast<std::size_t>(a.index)]).exact.get_d();
    sum += term * (poly_double(a.h, shifted) / xi - poly_double(a.g, idx));
    int d = r - 1;
    while (d >= 0 && ++idx[static_cast<std::size_t>(d)] > N) idx[static_cast<std::size_t>(d--)] = 0;
    if (d < 0) break;
  }
  return static_cast<double>(std::fabs(sum));
}

}  // namespace mhfx
