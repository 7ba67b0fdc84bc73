#include "mhfx/mhf.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "mhfx/error.hpp"

namespace mhfx {

int MHF::add_index(const std::string& var, const Rational& scale) {
  variables.push_back(var);
  scales.push_back(scale);
  for (auto* s : {&numerator, &denominator})
    for (auto& f : *s) f.form.push_back(0);
  return folds() - 1;
}

void MHF::validate() const {
  if (scales.size() != variables.size())
    fail(ErrorCode::SchemaError, "scale list length differs from variable list length");
  for (const auto* s : {&numerator, &denominator})
    for (const auto& f : *s)
      if (static_cast<int>(f.form.size()) != folds())
        fail(ErrorCode::SchemaError, "index form " + to_string(f.form) + " has length " +
                                         std::to_string(f.form.size()) + ", expected " +
                                         std::to_string(folds()));
}

MHF make_pfq(const std::vector<EpsLinear>& num, const std::vector<EpsLinear>& den,
             const std::string& var) {
  MHF m;
  m.variables = {var};
  m.scales = {Rational(1)};
  for (const auto& a : num) m.numerator.push_back({a, {1}});
  for (const auto& b : den) m.denominator.push_back({b, {1}});
  return m;
}

long form_value(const IndexForm& f, const std::vector<long>& m) {
  long v = 0;
  for (std::size_t i = 0; i < f.size(); ++i) v += f[i] * m[i];
  return v;
}

EpsSeries poch_constant(const EpsLinear& a, long c, int truncation) {
  EpsSeries acc = EpsSeries::constant(1, truncation);
  if (c >= 0) {
    for (long j = 0; j < c; ++j) acc *= EpsSeries::from_linear(a.shifted(j), truncation);
    return acc;
  }
  // (a)_{-n} = 1 / prod_{j=1..n} (a - j)
  for (long j = 1; j <= -c; ++j) {
    EpsLinear f = a.shifted(-j);
    if (f.identically_zero())
      fail(ErrorCode::ConstantPole, "(" + to_string(a) + ")_" + std::to_string(c) +
                                        " divides by the vanishing parameter " + to_string(f));
    acc *= laurent_invert(EpsSeries::from_linear(f, truncation));
  }
  return acc.truncated(std::min(acc.truncation(), truncation));
}

ShiftSplit shift_split(const PochFactor& f, long c, int truncation) {
  return {poch_constant(f.param, c, truncation), {f.param.shifted(c), f.form}};
}

namespace {

bool all_nonpositive(const IndexForm& f) {
  return std::all_of(f.begin(), f.end(), [](int c) { return c <= 0; });
}
bool all_nonnegative(const IndexForm& f) {
  return std::all_of(f.begin(), f.end(), [](int c) { return c >= 0; });
}
bool is_zero_form(const IndexForm& f) {
  return std::all_of(f.begin(), f.end(), [](int c) { return c == 0; });
}

Rational rational_pow(const Rational& base, long e) {
  Rational r = 1;
  Rational b = e < 0 ? Rational(1 / base) : base;
  for (long i = 0; i < std::abs(e); ++i) r *= b;
  return r;
}

}  // namespace

Term poch_negate(const Term& t, Side side, std::size_t which) {
  const auto& list = t.mhf.side(side);
  if (which >= list.size()) fail(ErrorCode::InvalidArgument, "factor index out of range");
  const PochFactor f = list[which];
  if (!all_nonpositive(f.form))
    fail(ErrorCode::MixedSignForm, "form " + to_string(f.form) + " has positive entries");
  if (f.param.eps_free() && is_integer(f.param.b0))
    fail(ErrorCode::IntegerParameter, "negation identity needs a non-integer parameter, got " +
                                          to_string(f.param));
  Term out = t;
  auto& from = out.mhf.side(side);
  from.erase(from.begin() + static_cast<std::ptrdiff_t>(which));
  IndexForm neg(f.form.size());
  for (std::size_t i = 0; i < neg.size(); ++i) {
    neg[i] = -f.form[i];
    if (neg[i] % 2 != 0) out.mhf.scales[i] = -out.mhf.scales[i];
  }
  EpsLinear p{1 - f.param.b0, -f.param.b1};
  Side other = side == Side::Numerator ? Side::Denominator : Side::Numerator;
  out.mhf.side(other).push_back({p, neg});
  return out;
}

Term gauss_multiply(const Term& t, Side side, std::size_t which, int k) {
  const auto& list = t.mhf.side(side);
  if (which >= list.size()) fail(ErrorCode::InvalidArgument, "factor index out of range");
  if (k < 1) fail(ErrorCode::InvalidArgument, "multiplication factor must be positive");
  if (k == 1) return t;
  const PochFactor f = list[which];
  for (int c : f.form)
    if (c % k != 0)
      fail(ErrorCode::UnsupportedForm,
           "form " + to_string(f.form) + " is not a multiple of " + std::to_string(k));
  Term out = t;
  auto& dest = out.mhf.side(side);
  dest.erase(dest.begin() + static_cast<std::ptrdiff_t>(which));
  IndexForm reduced(f.form.size());
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    reduced[i] = f.form[i] / k;
    Rational s = rational_pow(Rational(k), static_cast<long>(k) * reduced[i]);
    if (side == Side::Denominator) s = 1 / s;
    out.mhf.scales[i] *= s;
  }
  for (int j = 0; j < k; ++j)
    dest.push_back({EpsLinear{(f.param.b0 + j) / k, f.param.b1 / k}, reduced});
  return out;
}

namespace {

MHF drop_indices(const MHF& m, const std::vector<bool>& pinned) {
  MHF out;
  for (int i = 0; i < m.folds(); ++i)
    if (!pinned[static_cast<std::size_t>(i)]) {
      out.variables.push_back(m.variables[static_cast<std::size_t>(i)]);
      out.scales.push_back(m.scales[static_cast<std::size_t>(i)]);
    }
  for (Side s : {Side::Numerator, Side::Denominator})
    for (const auto& f : m.side(s)) {
      IndexForm g;
      for (std::size_t i = 0; i < f.form.size(); ++i)
        if (!pinned[i]) g.push_back(f.form[i]);
      out.side(s).push_back({f.param, g});
    }
  return out;
}

}  // namespace

Term collapse_zero(const Term& t) {
  Term out = t;
  for (;;) {
    std::vector<bool> pinned(static_cast<std::size_t>(out.mhf.folds()), false);
    bool any = false;
    auto& num = out.mhf.numerator;
    for (auto it = num.begin(); it != num.end();) {
      if (!it->param.identically_zero()) {
        ++it;
        continue;
      }
      if (is_zero_form(it->form)) {
        it = num.erase(it);
        continue;
      }
      if (!all_nonnegative(it->form)) {
        if (all_nonpositive(it->form))
          fail(ErrorCode::UnsupportedForm,
               "(0)_" + to_string(it->form) + " with a nonpositive form is a pole");
        fail(ErrorCode::MixedSignForm, "cannot pin indices of (0)_" + to_string(it->form));
      }
      for (std::size_t i = 0; i < it->form.size(); ++i)
        if (it->form[i] > 0) pinned[i] = true;
      any = true;
      ++it;
    }
    if (!any) return out;
    out.mhf = drop_indices(out.mhf, pinned);
  }
}

// ---------------------------------------------------------------------------
// Canonical form

namespace {

int compare_forms(const IndexForm& a, const IndexForm& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

int compare_factors(const PochFactor& a, const PochFactor& b) {
  if (int c = compare(a.param, b.param)) return c;
  return compare_forms(a.form, b.form);
}

void sort_factors(std::vector<PochFactor>& v) {
  std::sort(v.begin(), v.end(),
            [](const PochFactor& a, const PochFactor& b) { return compare_factors(a, b) < 0; });
}

// Drops trivial factors, cancels num/den pairs, sorts.
MHF simplify_factors(const MHF& m) {
  MHF out = m;
  for (Side s : {Side::Numerator, Side::Denominator}) {
    auto& v = out.side(s);
    v.erase(std::remove_if(v.begin(), v.end(),
                           [](const PochFactor& f) { return is_zero_form(f.form); }),
            v.end());
    sort_factors(v);
  }
  std::vector<PochFactor> num, den;
  std::size_t i = 0, j = 0;
  auto& a = out.numerator;
  auto& b = out.denominator;
  while (i < a.size() || j < b.size()) {
    if (j == b.size()) {
      num.push_back(a[i++]);
    } else if (i == a.size()) {
      den.push_back(b[j++]);
    } else {
      int c = compare_factors(a[i], b[j]);
      if (c == 0) {
        ++i;
        ++j;
      } else if (c < 0) {
        num.push_back(a[i++]);
      } else {
        den.push_back(b[j++]);
      }
    }
  }
  out.numerator = std::move(num);
  out.denominator = std::move(den);
  return out;
}

MHF permute(const MHF& m, const std::vector<int>& order) {
  MHF out;
  for (int i : order) {
    out.variables.push_back(m.variables[static_cast<std::size_t>(i)]);
    out.scales.push_back(m.scales[static_cast<std::size_t>(i)]);
  }
  for (Side s : {Side::Numerator, Side::Denominator}) {
    for (const auto& f : m.side(s)) {
      IndexForm g(order.size());
      for (std::size_t k = 0; k < order.size(); ++k) g[k] = f.form[static_cast<std::size_t>(order[k])];
      out.side(s).push_back({f.param, g});
    }
    sort_factors(out.side(s));
  }
  return out;
}

// Permutation-invariant description of one index.
std::string index_signature(const MHF& m, int i) {
  std::vector<std::string> parts;
  for (Side s : {Side::Numerator, Side::Denominator})
    for (const auto& f : m.side(s)) {
      int c = f.form[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      IndexForm shape;
      for (int e : f.form)
        if (e != 0) shape.push_back(e);
      std::sort(shape.begin(), shape.end());
      parts.push_back(std::string(s == Side::Numerator ? "N" : "D") + to_string(f.param) + "#" +
                      std::to_string(c) + "#" + to_string(shape));
    }
  std::sort(parts.begin(), parts.end());
  std::string sig = m.variables[static_cast<std::size_t>(i)] + "*" +
                    to_string(m.scales[static_cast<std::size_t>(i)]);
  for (const auto& p : parts) sig += ";" + p;
  return sig;
}

constexpr long kMaxPermutations = 5040;

}  // namespace

std::string serialize_key(const MHF& m) {
  std::string k;
  for (int i = 0; i < m.folds(); ++i)
    k += m.variables[static_cast<std::size_t>(i)] + "*" +
         to_string(m.scales[static_cast<std::size_t>(i)]) + ",";
  for (Side s : {Side::Numerator, Side::Denominator}) {
    k += s == Side::Numerator ? "|N" : "|D";
    for (const auto& f : m.side(s)) {
      k += "(" + to_string(f.param) + ":";
      for (int c : f.form) k += std::to_string(c) + ",";
      k += ")";
    }
  }
  return k;
}

MHF canonical_form(const MHF& in) {
  in.validate();
  MHF m = simplify_factors(in);
  const int r = m.folds();
  if (r <= 1) return m;

  std::vector<std::string> sig(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) sig[static_cast<std::size_t>(i)] = index_signature(m, i);
  std::vector<int> order(static_cast<std::size_t>(r));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return sig[static_cast<std::size_t>(a)] < sig[static_cast<std::size_t>(b)];
  });

  // Tie groups of equal signature.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  long combos = 1;
  for (std::size_t s = 0; s < order.size();) {
    std::size_t e = s + 1;
    while (e < order.size() && sig[static_cast<std::size_t>(order[e])] ==
                                   sig[static_cast<std::size_t>(order[s])])
      ++e;
    if (e - s > 1) {
      groups.emplace_back(s, e);
      for (std::size_t k = 2; k <= e - s && combos <= kMaxPermutations; ++k)
        combos *= static_cast<long>(k);
    }
    s = e;
  }
  if (groups.empty() || combos > kMaxPermutations) return permute(m, order);

  for (auto& [s, e] : groups)
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(s),
              order.begin() + static_cast<std::ptrdiff_t>(e));
  MHF best = permute(m, order);
  std::string best_key = serialize_key(best);
  // Odometer over the permutations of every tie group.
  for (;;) {
    std::size_t g = 0;
    for (; g < groups.size(); ++g) {
      auto b = order.begin() + static_cast<std::ptrdiff_t>(groups[g].first);
      auto e = order.begin() + static_cast<std::ptrdiff_t>(groups[g].second);
      if (std::next_permutation(b, e)) break;
    }
    if (g == groups.size()) break;
    MHF cand = permute(m, order);
    std::string key = serialize_key(cand);
    if (key < best_key) {
      best_key = std::move(key);
      best = std::move(cand);
    }
  }
  return best;
}

std::string canonical_key(const MHF& m) { return serialize_key(canonical_form(m)); }

Term canonicalize_term(const Term& t) {
  Term out = t;
  out.mhf = canonical_form(t.mhf);
  for (auto it = out.monomial.begin(); it != out.monomial.end();)
    it = it->second == 0 ? out.monomial.erase(it) : std::next(it);
  return out;
}

std::string term_key(const Term& t) {
  return to_string(t.monomial) + "#" + serialize_key(t.mhf);
}

Term normalize(const Term& t) {
  Term out = t;
  for (bool changed = true; changed;) {
    changed = false;
    for (Side s : {Side::Numerator, Side::Denominator}) {
      auto& v = out.mhf.side(s);
      for (std::size_t i = 0; i < v.size() && !changed; ++i) {
        const auto& f = v[i];
        if (f.param.eps_free() || is_zero_form(f.form)) continue;
        if (all_nonpositive(f.form)) {
          out = poch_negate(out, s, i);
          changed = true;
          break;
        }
        if (!all_nonnegative(f.form)) continue;
        int g = 0;
        for (int c : f.form) g = std::gcd(g, c);
        if (g > 1) {
          out = gauss_multiply(out, s, i, g);
          changed = true;
        }
      }
      if (changed) break;
    }
  }
  return canonicalize_term(out);
}

// ---------------------------------------------------------------------------

std::string to_string(const IndexForm& f) {
  std::string s = "(";
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + std::to_string(f[i]);
  return s + ")";
}

std::string to_string(const MHF& m) {
  std::ostringstream os;
  auto list = [&](const std::vector<PochFactor>& v) {
    os << "{";
    for (std::size_t i = 0; i < v.size(); ++i)
      os << (i ? ", " : "") << "{" << to_string(v[i].param) << ", " << to_string(v[i].form)
         << "}";
    os << "}";
  };
  os << "F[";
  list(m.numerator);
  os << ", ";
  list(m.denominator);
  os << " | ";
  for (int i = 0; i < m.folds(); ++i) {
    const auto& s = m.scales[static_cast<std::size_t>(i)];
    os << (i ? ", " : "");
    if (s != 1) os << "(" << to_string(s) << ")*";
    os << m.variables[static_cast<std::size_t>(i)];
  }
  os << "]";
  return os.str();
}

std::string to_string(const Monomial& mono) {
  std::string s;
  for (const auto& [v, e] : mono) {
    if (e == 0) continue;
    if (!s.empty()) s += "*";
    s += v;
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s.empty() ? "1" : s;
}

std::string to_string(const Term& t) {
  std::string s = "[" + to_string(t.coeff) + "]";
  if (to_string(t.monomial) != "1") s += "*" + to_string(t.monomial);
  return s + "*" + to_string(t.mhf);
}

}  // namespace mhfx
