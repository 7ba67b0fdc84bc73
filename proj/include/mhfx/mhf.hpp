#pragma once

// Multivariable hypergeometric series
//
//   F = sum_{m in N^r} prod_j (a_j)_{mu_j . m} / prod_k (b_k)_{nu_k . m}
//                       * prod_i (s_i x_i)^{m_i} / m_i!
//
// with eps-linear parameters, integer index forms, and a rational scale s_i
// per index (1 unless a rewrite introduced a sign or a k^k factor).

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mhfx/scalar.hpp"

namespace mhfx {

using IndexForm = std::vector<int>;

struct PochFactor {
  EpsLinear param;
  IndexForm form;
  friend bool operator==(const PochFactor&, const PochFactor&) = default;
};

enum class Side { Numerator, Denominator };

struct MHF {
  std::vector<std::string> variables;  // one per summation index, may repeat
  std::vector<Rational> scales;        // same length as variables
  std::vector<PochFactor> numerator;
  std::vector<PochFactor> denominator;

  int folds() const { return static_cast<int>(variables.size()); }
  // Adds an index bound to `var` with scale 1 and widens every form.
  int add_index(const std::string& var, const Rational& scale = 1);
  std::vector<PochFactor>& side(Side s) { return s == Side::Numerator ? numerator : denominator; }
  const std::vector<PochFactor>& side(Side s) const {
    return s == Side::Numerator ? numerator : denominator;
  }
  // Throws SchemaError on inconsistent lengths.
  void validate() const;

  friend bool operator==(const MHF&, const MHF&) = default;
};

// Builds pFq(num; den; var) with unit forms on a single index.
MHF make_pfq(const std::vector<EpsLinear>& num, const std::vector<EpsLinear>& den,
             const std::string& var);

// Exponents keyed by variable name.
using Monomial = std::map<std::string, int>;

struct Term {
  EpsSeries coeff;
  Monomial monomial;
  MHF mhf;
};

// (a)_c as a series known through eps^(truncation-1); c may be negative.
EpsSeries poch_constant(const EpsLinear& a, long c, int truncation);

struct ShiftSplit {
  EpsSeries constant;  // (a)_c
  PochFactor residual;  // (a+c)_L
};
// (a)_{L+c} = (a)_c (a+c)_L.
ShiftSplit shift_split(const PochFactor& f, long c, int truncation);

// Rewrites a factor whose form has no positive entries using
// (a)_{-n} = (-1)^n / (1-a)_n; the sign lands in the index scales.
Term poch_negate(const Term& t, Side side, std::size_t which);

// (a)_{kL} = k^{kL} prod_{j<k} ((a+j)/k)_L; k^{k c_i} joins scale i.
Term gauss_multiply(const Term& t, Side side, std::size_t which, int k);

// Pins every index occurring in a numerator (0)_L with L >= 0.
Term collapse_zero(const Term& t);

// Sorted factors, cancelled num/den pairs, zero forms dropped, and indices in
// a canonical order.
MHF canonical_form(const MHF& m);
// Canonical string; equal keys mean structurally equal MHFs.
std::string canonical_key(const MHF& m);
// Key of an MHF already in canonical form.
std::string serialize_key(const MHF& m);

// Applies poch_negate to nonpositive forms and gauss_multiply to forms whose
// entries share a common factor, then canonicalizes.
Term normalize(const Term& t);
Term canonicalize_term(const Term& t);
std::string term_key(const Term& t);  // monomial + mhf, ignores coeff

std::string to_string(const IndexForm& f);
std::string to_string(const MHF& m);
std::string to_string(const Monomial& mono);
std::string to_string(const Term& t);

// Form evaluated at the index vector m.
long form_value(const IndexForm& f, const std::vector<long>& m);

}  // namespace mhfx
