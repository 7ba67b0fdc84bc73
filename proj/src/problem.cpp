#include "mhfx/problem.hpp"

#include <unordered_map>

#include "mhfx/error.hpp"

namespace mhfx {

bool Problem::is_rational() const {
  for (const auto& t : terms)
    if (!t.prefactor.is_rational()) return false;
  return true;
}

namespace {

bool is_zero_weight(const Weight& w, WeightKind k) {
  switch (k) {
    case WeightKind::Rational: return w.q == 0;
    case WeightKind::Real: return w.r == 0;
    case WeightKind::Complex: return w.z == Complex{};
  }
  return true;
}

class WeightedSum {
 public:
  explicit WeightedSum(WeightKind k) : kind_(k) {}
  void add(const Term& t, const Weight& w) {
    Term c = canonicalize_term(t);
    c.coeff = EpsSeries::constant(1, 1);
    auto [it, fresh] = index_.try_emplace(term_key(c), items_.size());
    if (fresh) {
      items_.push_back({w, std::move(c)});
      return;
    }
    Weight& acc = items_[it->second].w;
    acc.q += w.q;
    acc.r += w.r;
    acc.z += w.z;
  }
  std::vector<WeightedTerm> take() {
    std::vector<WeightedTerm> out;
    for (auto& it : items_)
      if (!is_zero_weight(it.w, kind_)) out.push_back(std::move(it));
    return out;
  }

 private:
  WeightKind kind_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<WeightedTerm> items_;
};

}  // namespace

ProblemExpansion expand_problem(const Problem& p, const EvalPoint& pt, int K, unsigned digits10) {
  PrecisionScope scope(digits10);
  ProblemExpansion out;
  out.kind = WeightKind::Rational;
  if (!p.is_rational()) {
    out.kind = WeightKind::Real;
    for (const auto& t : p.terms)
      if (!has_real_expansion(t.prefactor, pt)) out.kind = WeightKind::Complex;
  }
  out.truncation = K + 1;
  std::map<int, WeightedSum> sums;
  auto sum_at = [&](int n) -> WeightedSum& {
    return sums.try_emplace(n, out.kind).first->second;
  };

  for (const auto& term : p.terms) {
    const PrefactorSpec& pre = term.prefactor;
    const int pre_lo = -pre.pole_depth();
    EpsExpansion e = laurent_expand(term.mhf, K - std::min(pre_lo, K));
    const int e_lo = e.min_order();
    const int need = K - std::min(e_lo, K);  // prefactor orders up to `need`

    RSeries rs;
    CSeries cs;
    if (out.kind == WeightKind::Real) rs = prefactor_expand_real(pre, pt, need);
    if (out.kind == WeightKind::Complex) cs = prefactor_expand(pre, pt, need);

    for (const auto& [j, terms] : e.orders) {
      for (int n = j + pre_lo; n <= K; ++n) {
        const int i = n - j;
        Weight w{0, BigFloat(0), Complex{}};
        bool zero = false;
        switch (out.kind) {
          case WeightKind::Rational:
            if (i != pre.eps_power) zero = true;
            w.q = pre.re;
            break;
          case WeightKind::Real:
            if (i < rs.min_order) zero = true;
            else w.r = rs.coeff(i);
            zero = zero || w.r == 0;
            break;
          case WeightKind::Complex:
            if (i < cs.min_order) zero = true;
            else w.z = cs.coeff(i);
            zero = zero || w.z == Complex{};
            break;
        }
        if (zero) continue;
        for (const auto& t : terms) {
          Weight tw = w;
          const Rational q = t.coeff.coeff(0);
          tw.q *= q;
          tw.r *= big_from_rational(q);
          tw.z *= q.get_d();
          sum_at(n).add(t, tw);
        }
      }
    }
  }
  out.min_order = out.truncation;
  for (auto& [n, s] : sums) {
    auto items = s.take();
    if (items.empty()) continue;
    out.min_order = std::min(out.min_order, n);
    out.orders[n] = std::move(items);
  }
  return out;
}

namespace {

template <class V>
V monomial_value(const Monomial& mono, const EvalPoint& pt, V one,
                 V (*conv)(const PointValue&)) {
  V v = one;
  for (const auto& [var, e] : mono)
    for (int k = 0; k < e; ++k) v *= conv(pt.at(var));
  return v;
}

}  // namespace

std::map<int, Number> eval_problem(const ProblemExpansion& e, const EvalPoint& pt,
                                   const EvalOptions& o) {
  std::map<int, Number> out;
  if (e.kind == WeightKind::Rational) {
    for (int n = e.min_order; n < e.truncation; ++n) {
      std::vector<Term> terms;
      auto it = e.orders.find(n);
      if (it != e.orders.end())
        for (const auto& wt : it->second) {
          Term t = wt.term;
          t.coeff = EpsSeries::constant(wt.w.q, 1);
          terms.push_back(std::move(t));
        }
      out[n] = eval_terms(terms, pt, o);
    }
    return out;
  }

  EvalOptions oo = o;
  oo.mode = e.kind == WeightKind::Complex ? Mode::Complex : Mode::Float;
  std::unordered_map<std::string, Number> cache;
  auto value_of = [&](const MHF& m) -> const Number& {
    std::string key = serialize_key(m);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, eval_mhf(m, pt, oo)).first;
    return it->second;
  };
  PrecisionScope scope(std::max(digits_for_bits(std::max(oo.prec_bits, 53u)), 20u));
  for (int n = e.min_order; n < e.truncation; ++n) {
    Number num;
    num.mode = oo.mode;
    num.real = 0;
    num.cplx = 0;
    auto it = e.orders.find(n);
    if (it != e.orders.end())
      for (const auto& wt : it->second) {
        const Number& v = value_of(wt.term.mhf);
        if (oo.mode == Mode::Complex) {
          Complex mono = monomial_value<Complex>(
              wt.term.monomial, pt, Complex{1, 0},
              +[](const PointValue& p) { return p.is_complex ? p.z : Complex{p.exact.get_d(), 0}; });
          num.cplx += wt.w.z * mono * v.cplx;
        } else {
          BigFloat mono = monomial_value<BigFloat>(
              wt.term.monomial, pt, BigFloat(1),
              +[](const PointValue& p) { return big_from_rational(p.exact); });
          num.real += wt.w.r * mono * v.real;
        }
      }
    out[n] = num;
  }
  return out;
}

Number eval_problem_direct(const Problem& p, const EvalPoint& pt, const EvalOptions& o) {
  if (!o.eps) fail(ErrorCode::InvalidArgument, "direct evaluation needs an eps value");
  if (!p.is_rational())
    fail(ErrorCode::InvalidArgument, "direct evaluation supports rational prefactors only");
  std::vector<Term> terms;
  for (const auto& t : p.terms) {
    Rational w = t.prefactor.re;
    for (int k = 0; k < std::abs(t.prefactor.eps_power); ++k)
      w = t.prefactor.eps_power > 0 ? Rational(w * *o.eps) : Rational(w / *o.eps);
    terms.push_back({EpsSeries::constant(w, 1), {}, t.mhf});
  }
  return eval_terms(terms, pt, o);
}

}  // namespace mhfx
