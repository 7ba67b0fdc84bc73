#pragma once

// Laurent expansion through step-down operators: a singular lower parameter
// B1 eps + B0 is raised to B1 eps + 1, the resulting function is Taylor
// expanded, and unit operators (nu.theta + b)/b bring the parameter back.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mhfx/calculus.hpp"
#include "mhfx/numeval.hpp"

namespace mhfx {

struct Classification {
  bool taylor = true;
  std::vector<std::size_t> singular;  // positions in the denominator list
};
Classification classify_singular(const MHF& m);

// Euler-operator exponents keyed by variable name.
using ThetaMonomial = std::map<std::string, int>;

struct StepDownOperator {
  std::map<ThetaMonomial, EpsSeries> terms;
  static StepDownOperator identity(int truncation);
  int min_order() const;
  int truncation() const;
};
StepDownOperator operator*(const StepDownOperator& a, const StepDownOperator& b);
bool operator==(const StepDownOperator& a, const StepDownOperator& b);
std::string to_string(const StepDownOperator& h);

struct StepChain {
  std::map<std::string, int> theta_form;  // nu . theta, per variable
  std::vector<EpsLinear> steps;           // b values, from B1 eps + B0 up to B1 eps
};

struct Secondary {
  MHF mhf;
  std::vector<StepChain> chains;
};
Secondary build_secondary(const MHF& m);

// (theta_form . theta + b) / b with coefficients known through
// eps^(truncation-1) before the 1/b inversion.
StepDownOperator unit_step_down(const EpsLinear& b, const std::map<std::string, int>& theta_form,
                                int truncation);
StepDownOperator compose_chain(const std::vector<StepChain>& chains, int truncation);
// Number of steps whose b vanishes at eps = 0.
int pole_depth(const std::vector<StepChain>& chains);

// Orders min..K of H . e. Throws TruncationTooShallow when e or H is not
// deep enough.
EpsExpansion apply_operator(const StepDownOperator& h, const EpsExpansion& e, int K);

EpsExpansion laurent_expand(const MHF& m, int K);

// Polynomial in theta_1..theta_r (per summation index).
using ThetaPoly = std::map<std::vector<int>, Rational>;

struct Annihilator {
  int index = 0;
  ThetaPoly g;  // direct part
  ThetaPoly h;  // shift part, includes (theta_i + 1)
};
// Parameters must be eps-free unless `eps` is given. A zero-fold MHF accepts
// index 0 and gives g = 0, h = 1.
Annihilator build_annihilator(const MHF& m, int index, std::optional<Rational> eps = {});
Rational eval_theta_poly(const ThetaPoly& p, const std::vector<long>& m);

// |sum_{m <= N} A(m) [h(m - e_i) x^(m - e_i) - g(m) x^m]|, accumulated in long double.
double annihilator_residual(const MHF& m, const Annihilator& a, const EvalPoint& p, long N);

}  // namespace mhfx
