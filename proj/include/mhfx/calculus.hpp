#pragma once

// Derivatives of MHF terms with respect to eps and to the arguments, and
// Taylor expansion in eps.

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "mhfx/mhf.hpp"

namespace mhfx {

// Sum of terms with like terms merged under canonical form.
class TermSum {
 public:
  void add(const Term& t);
  void add(const std::vector<Term>& ts) {
    for (const auto& t : ts) add(t);
  }
  // Nonzero terms in insertion order.
  std::vector<Term> take();
  bool empty() const { return terms_.empty(); }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Term> terms_;
};

struct EpsExpansion {
  // order -> terms with constant rational coefficients
  std::map<int, std::vector<Term>> orders;
  int truncation = 0;  // orders >= truncation are unknown
  int min_order() const { return orders.empty() ? truncation : orders.begin()->first; }
};

// d/da (a)_n for eps-free a, via (a)_n/a * sum_{k<n} (a)_k/(a+1)_k.
Rational poch_derivative(const Rational& a, long n);

struct Occurrence {
  Side side;
  std::size_t index;
};

// Derivative of t with respect to the parameter of one Pochhammer occurrence.
// Each block of a 0/1 form gains one summation index. Forms with entries
// outside {0,1} throw NotNormalized.
std::vector<Term> mhf_param_derivative(const Term& t, Occurrence which);

// d/dt over all eps-dependent occurrences plus the coefficient's own
// derivative. Results are known one order less deep than t.
std::vector<Term> eps_derivative(const Term& t);

// Orders 0..K. Throws SingularLower when a lower parameter is a nonpositive
// integer at eps = 0.
EpsExpansion taylor_expand(const MHF& m, int K);
EpsExpansion taylor_expand(const std::vector<Term>& terms, int K);

// d/d(var), including the product rule on the monomial.
std::vector<Term> arg_derivative(const Term& t, const std::string& var);
// var * d/d(var).
std::vector<Term> theta_apply(const Term& t, const std::string& var);

std::string to_string(const EpsExpansion& e);

}  // namespace mhfx
