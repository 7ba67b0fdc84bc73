#pragma once

// Sums of prefactor * MHF and their eps expansions.

#include <map>
#include <string>
#include <vector>

#include "mhfx/laurent.hpp"
#include "mhfx/numeval.hpp"

namespace mhfx {

struct ProblemTerm {
  PrefactorSpec prefactor;
  MHF mhf;
};

struct Problem {
  std::vector<ProblemTerm> terms;
  bool is_rational() const;
};

enum class WeightKind { Rational, Real, Complex };

struct Weight {
  Rational q;
  BigFloat r;
  Complex z;
};

struct WeightedTerm {
  Weight w;
  Term term;  // coefficient 1; monomial and MHF carry the structure
};

// Per-order weighted terms, merged across problem terms by canonical key.
struct ProblemExpansion {
  WeightKind kind = WeightKind::Rational;
  std::map<int, std::vector<WeightedTerm>> orders;
  int min_order = 0;
  int truncation = 0;
};

// Orders min..K. Rational problems keep exact weights. Otherwise prefactors
// are expanded in BigFloat at `digits10` when every power base is a positive
// real, and in complex double when not.
ProblemExpansion expand_problem(const Problem& p, const EvalPoint& pt, int K,
                                unsigned digits10 = 40);

// Rational problems honor o.mode; Real weights evaluate in Float mode (MPFR
// when o.prec_bits > 53); Complex weights force complex mode.
std::map<int, Number> eval_problem(const ProblemExpansion& e, const EvalPoint& pt,
                                   const EvalOptions& o);

// Direct value of the problem at a rational eps (real or rational problems).
Number eval_problem_direct(const Problem& p, const EvalPoint& pt, const EvalOptions& o);

}  // namespace mhfx
