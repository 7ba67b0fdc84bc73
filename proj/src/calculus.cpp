#include "mhfx/calculus.hpp"

#include <sstream>

#include "mhfx/error.hpp"

namespace mhfx {

void TermSum::add(const Term& t) {
  if (t.coeff.is_zero()) return;
  Term c = canonicalize_term(t);
  std::string key = term_key(c);
  auto [it, inserted] = index_.try_emplace(key, terms_.size());
  if (inserted)
    terms_.push_back(std::move(c));
  else
    terms_[it->second].coeff += c.coeff;
}

std::vector<Term> TermSum::take() {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_)
    if (!t.coeff.is_zero()) out.push_back(std::move(t));
  terms_.clear();
  index_.clear();
  return out;
}

Rational poch_derivative(const Rational& a, long n) {
  if (n <= 0) return 0;
  // (a)_n / a = (a+1)_{n-1}
  Rational pre = 1;
  for (long j = 1; j < n; ++j) pre *= a + j;
  Rational sum = 0, ratio = 1;  // (a)_k/(a+1)_k = a/(a+k)
  for (long k = 0; k < n; ++k) {
    ratio = k == 0 ? Rational(1) : Rational(a / (a + k));
    sum += ratio;
  }
  return pre * sum;
}

namespace {

EpsSeries constant_factor(const EpsSeries& c, Side side) {
  if (side == Side::Numerator) return c;
  if (c.is_zero()) fail(ErrorCode::DenominatorZero, "shift produced a vanishing denominator");
  return laurent_invert(c);
}

IndexForm unit(int r, int i) {
  IndexForm f(static_cast<std::size_t>(r), 0);
  f[static_cast<std::size_t>(i)] = 1;
  return f;
}

}  // namespace

std::vector<Term> mhf_param_derivative(const Term& t, Occurrence which) {
  const auto& list = t.mhf.side(which.side);
  if (which.index >= list.size()) fail(ErrorCode::InvalidArgument, "occurrence out of range");
  const PochFactor f = list[which.index];
  std::vector<int> support;
  for (std::size_t i = 0; i < f.form.size(); ++i) {
    if (f.form[i] != 0 && f.form[i] != 1)
      fail(ErrorCode::NotNormalized, "cannot differentiate (" + to_string(f.param) + ")_" +
                                         to_string(f.form) + "; forms must be 0/1");
    if (f.form[i] == 1) support.push_back(static_cast<int>(i));
  }
  const int T = t.coeff.truncation();
  std::vector<Term> out;
  MHF base = t.mhf;
  base.side(which.side).erase(base.side(which.side).begin() +
                              static_cast<std::ptrdiff_t>(which.index));

  for (std::size_t j = 0; j < support.size(); ++j) {
    const int i = support[j];
    const std::string& var = t.mhf.variables[static_cast<std::size_t>(i)];
    const Rational& s = t.mhf.scales[static_cast<std::size_t>(i)];
    Term nt;
    nt.coeff = t.coeff.scaled(s);
    nt.monomial = t.monomial;
    nt.monomial[var] += 1;
    nt.mhf = base;
    const int k = nt.mhf.add_index(var, s);
    const int r = nt.mhf.folds();
    bool vanished = false;
    // m_i -> m_i + k + 1 in every remaining factor
    for (Side sd : {Side::Numerator, Side::Denominator})
      for (auto& g : nt.mhf.side(sd)) {
        int c = g.form[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        g.form[static_cast<std::size_t>(k)] += c;
        ShiftSplit sp = shift_split(g, c, T);
        g = sp.residual;
        if (sd == Side::Numerator && sp.constant.is_zero()) vanished = true;
        if (!vanished) nt.coeff *= constant_factor(sp.constant, sd);
      }
    if (vanished) continue;

    IndexForm o(static_cast<std::size_t>(r), 0);
    for (std::size_t l = 0; l < j; ++l) o[static_cast<std::size_t>(support[l])] = 1;
    IndexForm ok = o;
    ok[static_cast<std::size_t>(k)] = 1;
    IndexForm lk = f.form;
    lk.push_back(1);
    IndexForm ik = unit(r, i);
    ik[static_cast<std::size_t>(k)] = 1;
    const EpsLinear a = f.param;
    const EpsLinear a1 = a.shifted(1);

    auto& num = nt.mhf.numerator;
    auto& den = nt.mhf.denominator;
    num.push_back({EpsLinear(1), unit(r, k)});
    num.push_back({EpsLinear(1), unit(r, i)});
    den.push_back({EpsLinear(2), ik});
    num.push_back({a, ok});
    den.push_back({a1, ok});
    if (which.side == Side::Numerator) {
      num.push_back({a1, lk});
    } else {
      den.push_back({a1, lk});
      EpsSeries inv = laurent_invert(EpsSeries::from_linear(a, T));
      nt.coeff *= (inv * inv).negated();
    }
    out.push_back(std::move(nt));
  }
  return out;
}

std::vector<Term> eps_derivative(const Term& t) {
  const int T = t.coeff.truncation() - 1;
  std::vector<Term> out;
  EpsSeries dc = t.coeff.derivative();
  if (!dc.is_zero()) out.push_back({dc, t.monomial, t.mhf});
  for (Side sd : {Side::Numerator, Side::Denominator})
    for (std::size_t idx = 0; idx < t.mhf.side(sd).size(); ++idx) {
      const auto& f = t.mhf.side(sd)[idx];
      if (f.param.eps_free()) continue;
      for (auto& d : mhf_param_derivative(t, {sd, idx})) {
        d.coeff = d.coeff.scaled(f.param.b1).truncated(std::min(T, d.coeff.truncation()));
        if (!d.coeff.is_zero()) out.push_back(std::move(d));
      }
    }
  return out;
}

namespace {

bool singular_lower(const MHF& m) {
  for (const auto& f : m.denominator)
    if (f.param.nonpositive_integer_at_zero()) return true;
  return false;
}

MHF at_eps_zero(const MHF& m) {
  MHF out = m;
  for (Side s : {Side::Numerator, Side::Denominator})
    for (auto& f : out.side(s)) f.param = f.param.at_eps_zero();
  return out;
}

void check_denominators(const MHF& m) {
  for (const auto& f : m.denominator) {
    bool nonzero_form = false;
    for (int c : f.form) nonzero_form |= c != 0;
    if (nonzero_form && f.param.nonpositive_integer_at_zero())
      fail(ErrorCode::DenominatorZero, "coefficient series has the lower parameter " +
                                           to_string(f.param) + " in " + to_string(m));
  }
}

}  // namespace

EpsExpansion taylor_expand(const std::vector<Term>& input, int K) {
  if (K < 0) fail(ErrorCode::InvalidArgument, "expansion order must be nonnegative");
  EpsExpansion e;
  e.truncation = K + 1;
  TermSum level_sum;
  for (const auto& t : input) {
    if (singular_lower(t.mhf))
      fail(ErrorCode::SingularLower, to_string(t.mhf) + " has a singular lower parameter");
    Term n = normalize(t);
    if (n.coeff.truncation() > K + 1) n.coeff = n.coeff.truncated(K + 1);
    if (n.coeff.truncation() < K + 1)
      fail(ErrorCode::TruncationTooShallow, "input coefficient is not known to eps^" +
                                                std::to_string(K));
    level_sum.add(n);
  }
  std::vector<Term> level = level_sum.take();
  Rational factorial = 1;
  for (int i = 0; i <= K; ++i) {
    if (i > 0) factorial *= i;
    TermSum order;
    for (const auto& t : level) {
      Rational q = t.coeff.coeff(0) / factorial;
      if (q == 0) continue;
      Term z = collapse_zero({EpsSeries::constant(q, 1), t.monomial, at_eps_zero(t.mhf)});
      check_denominators(z.mhf);
      order.add(z);
    }
    auto terms = order.take();
    if (!terms.empty()) e.orders[i] = std::move(terms);
    if (i == K) break;
    TermSum next;
    for (const auto& t : level)
      for (auto& d : eps_derivative(t))
        if (!d.coeff.is_zero() && d.coeff.min_order() <= K - (i + 1)) next.add(d);
    level = next.take();
  }
  return e;
}

EpsExpansion taylor_expand(const MHF& m, int K) {
  return taylor_expand(std::vector<Term>{{EpsSeries::constant(1, K + 1), {}, m}}, K);
}

std::vector<Term> arg_derivative(const Term& t, const std::string& var) {
  std::vector<Term> out;
  auto it = t.monomial.find(var);
  if (it != t.monomial.end() && it->second != 0) {
    Term p = t;
    p.coeff = t.coeff.scaled(it->second);
    p.monomial[var] -= 1;
    out.push_back(std::move(p));
  }
  const int T = t.coeff.truncation();
  for (int i = 0; i < t.mhf.folds(); ++i) {
    if (t.mhf.variables[static_cast<std::size_t>(i)] != var) continue;
    Term nt = t;
    nt.coeff = t.coeff.scaled(t.mhf.scales[static_cast<std::size_t>(i)]);
    bool vanished = false;
    for (Side sd : {Side::Numerator, Side::Denominator})
      for (auto& g : nt.mhf.side(sd)) {
        int c = g.form[static_cast<std::size_t>(i)];
        if (c == 0 || vanished) continue;
        ShiftSplit sp = shift_split(g, c, T);
        g = sp.residual;
        if (sd == Side::Numerator && sp.constant.is_zero())
          vanished = true;
        else
          nt.coeff *= constant_factor(sp.constant, sd);
      }
    if (!vanished) out.push_back(std::move(nt));
  }
  return out;
}

std::vector<Term> theta_apply(const Term& t, const std::string& var) {
  auto out = arg_derivative(t, var);
  for (auto& d : out) d.monomial[var] += 1;
  return out;
}

std::string to_string(const EpsExpansion& e) {
  std::ostringstream os;
  for (const auto& [k, terms] : e.orders) {
    os << "eps^" << k << ":\n";
    for (const auto& t : terms) os << "  " << to_string(t) << "\n";
  }
  os << "O(eps^" << e.truncation << ")\n";
  return os.str();
}

}  // namespace mhfx
