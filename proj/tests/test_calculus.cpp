#include <doctest.h>

#include <boost/math/special_functions/digamma.hpp>

#include "mhfx/error.hpp"
#include "support.hpp"

using namespace testing;

namespace {

Term term_of(const MHF& m) { return {EpsSeries::constant(1, 6), {}, m}; }

double value(const std::vector<Term>& ts, const std::map<std::string, Rational>& x, long N,
             unsigned bits = 53) {
  return eval_terms(ts, point(x), floating(N, bits)).to_double();
}

Rational exact_value(const std::vector<Term>& ts, const std::map<std::string, Rational>& x,
                     long N) {
  return eval_terms(ts, point(x), exact(N)).exact;
}

std::vector<Term> order_terms(const EpsExpansion& e, int k) {
  auto it = e.orders.find(k);
  return it == e.orders.end() ? std::vector<Term>{} : it->second;
}

}  // namespace

TEST_CASE("poch_derivative examples") {
  // d/de (2e+1)_3 at e = 0 is 2 * 3! * (1 + 1/2 + 1/3) = 22
  CHECK(2 * poch_derivative(q(1), 3) == 22);
  CHECK(poch_derivative(q(1), 1) == 1);
  CHECK(poch_derivative(q(5, 3), 0) == 0);
}

TEST_CASE("property: poch_derivative matches the digamma difference") {
  Gen g(21);
  for (int i = 0; i < 100; ++i) {
    const Rational a = g.rational(0, 5, 7) + q(1, 11);
    const long n = g.integer(0, 10);
    const double want = boost::math::digamma(a.get_d() + static_cast<double>(n)) -
                        boost::math::digamma(a.get_d());
    const double got = Rational(poch_derivative(a, n) / poch(a, n)).get_d();
    CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("mhf_param_derivative: d/da sum (a)_n x^n/n! at a = 1, x = 1/2 is 2 ln 2") {
  MHF m = make_pfq({EpsLinear(q(1))}, {}, "x");
  std::vector<Term> d = mhf_param_derivative(term_of(m), {Side::Numerator, 0});
  REQUIRE_FALSE(d.empty());
  for (const auto& t : d) CHECK(t.mhf.folds() == 2);
  // closed form: d/da (1-x)^-a = -ln(1-x) (1-x)^-a
  CHECK(value(d, {{"x", q(1, 2)}}, 200) == doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("mhf_param_derivative on a denominator parameter") {
  // d/dc 2F1(1,1;c;x) at c = 2 against a central difference of brute sums
  MHF m = make_pfq({EpsLinear(q(1)), EpsLinear(q(1))}, {EpsLinear(q(2))}, "x");
  std::vector<Term> d = mhf_param_derivative(term_of(m), {Side::Denominator, 0});
  const std::map<std::string, Rational> x{{"x", q(1, 4)}};
  const Rational h = q(1, 100000);
  auto at = [&](const Rational& c) {
    MHF mc = make_pfq({EpsLinear(q(1)), EpsLinear(q(1))}, {EpsLinear(c)}, "x");
    return brute_sum(mc, x, 40).get_d();
  };
  const double fd = (at(2 + h) - at(2 - h)) / (2 * h.get_d());
  CHECK(value(d, x, 60) == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("property: parameter derivatives raise the fold by one") {
  Gen g(22);
  for (int i = 0; i < 30; ++i) {
    MHF m = canonical_form(g.mhf(2, false));
    for (std::size_t j = 0; j < m.numerator.size(); ++j)
      for (const auto& t : mhf_param_derivative(term_of(m), {Side::Numerator, j}))
        CHECK(t.mhf.folds() == m.folds() + 1);
  }
}

TEST_CASE("eps_derivative examples") {
  SUBCASE("eps-free input") {
    MHF m = make_pfq({EpsLinear(q(3))}, {EpsLinear(q(1, 2))}, "x");
    CHECK(eps_derivative(term_of(m)).empty());
  }
  SUBCASE("first eps derivative of 2F1(3,2;eps-3/2;x) at x = 3/10") {
    MHF m = make_pfq({EpsLinear(q(3)), EpsLinear(q(2))}, {EpsLinear(q(-3, 2), q(1))}, "x");
    EpsExpansion e = taylor_expand(m, 1);
    CHECK(value(order_terms(e, 1), {{"x", q(3, 10)}}, 200) ==
          doctest::Approx(-38.7907).epsilon(5e-6));
  }
  SUBCASE("product rule on the coefficient") {
    // d/de (e F) = F + e dF/de
    MHF m = canonical_form(make_pfq({EpsLinear(q(1), q(1))}, {EpsLinear(q(5, 2))}, "x"));
    Term t{EpsSeries::monomial(1, 1, 5), {}, m};
    int plain = 0;
    for (const auto& s : eps_derivative(t)) {
      if (s.coeff.min_order() == 0) {
        CHECK(s.coeff.coeff(0) == 1);
        CHECK(canonical_key(s.mhf) == canonical_key(m));
        ++plain;
      } else {
        CHECK(s.coeff.min_order() >= 1);
      }
    }
    CHECK(plain == 1);
  }
}

TEST_CASE("taylor_expand examples") {
  SUBCASE("eps-free MHF") {
    MHF m = make_pfq({EpsLinear(q(1, 3))}, {EpsLinear(q(3, 2))}, "x");
    EpsExpansion e = taylor_expand(m, 3);
    REQUIRE(order_terms(e, 0).size() == 1);
    CHECK(canonical_key(order_terms(e, 0)[0].mhf) == canonical_key(m));
    for (int k = 1; k <= 3; ++k) CHECK(order_terms(e, k).empty());
    CHECK(e.truncation == 4);
  }
  SUBCASE("2F1(eps,-eps;eps+1;x) = 1 - eps^2 x 3F2(1,1,1;2,2;x) + ...") {
    MHF m = make_pfq({EpsLinear(q(0), q(1)), EpsLinear(q(0), q(-1))}, {EpsLinear(q(1), q(1))}, "x");
    EpsExpansion e = taylor_expand(m, 2);
    const std::map<std::string, Rational> x{{"x", q(1, 10)}};
    CHECK(exact_value(order_terms(e, 0), x, 10) == 1);
    CHECK(order_terms(e, 1).empty());
    // x 3F2(1,1,1;2,2;x) = Li2(x)
    CHECK(value(order_terms(e, 2), x, 60) == doctest::Approx(-li2(0.1)).epsilon(1e-13));
  }
  SUBCASE("F2 order 1 at (3/5, 1/10)") {
    MHF m = appell_f2(EpsLinear(q(1)), EpsLinear(q(1)), EpsLinear(q(0), q(1)),
                      EpsLinear(q(1), q(1)), EpsLinear(q(1), q(-1)));
    EpsExpansion e = taylor_expand(m, 1);
    const double v = eval_terms(order_terms(e, 1), point({{"x", q(3, 5)}, {"y", q(1, 10)}}),
                                floating(100, 64, 1e-22))
                         .to_double();
    CHECK(v == doctest::Approx(-1.571521648555935).epsilon(1e-14));
  }
  SUBCASE("a singular lower parameter is refused") {
    MHF m = make_pfq({EpsLinear(q(1))}, {EpsLinear(q(-1), q(1))}, "x");
    try {
      taylor_expand(m, 1);
      FAIL("expected SingularLower");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SingularLower);
    }
  }
}

TEST_CASE("property: taylor_expand is linear") {
  Gen g(23);
  const std::map<std::string, Rational> x{{"x", q(1, 7)}, {"y", q(1, 9)}};
  for (int i = 0; i < 10; ++i) {
    MHF a = g.mhf(1), b = g.mhf(1);
    const Rational c1 = g.rational(-3, 3, 4), c2 = g.rational(-3, 3, 4);
    Term ta{EpsSeries::constant(c1, 4), {}, a}, tb{EpsSeries::constant(c2, 4), {}, b};
    EpsExpansion sum = taylor_expand(std::vector<Term>{ta, tb}, 2);
    EpsExpansion ea = taylor_expand(a, 2), eb = taylor_expand(b, 2);
    for (int k = 0; k <= 2; ++k)
      CHECK(exact_value(order_terms(sum, k), x, 6) ==
            c1 * exact_value(order_terms(ea, k), x, 6) + c2 * exact_value(order_terms(eb, k), x, 6));
  }
}

TEST_CASE("property: expansion coefficients do not depend on parameter order") {
  Gen g(24);
  const std::map<std::string, Rational> x{{"x", q(1, 6)}, {"y", q(1, 8)}};
  for (int i = 0; i < 10; ++i) {
    MHF m = g.mhf(2);
    MHF p = m;
    std::reverse(p.numerator.begin(), p.numerator.end());
    std::reverse(p.denominator.begin(), p.denominator.end());
    EpsExpansion em = taylor_expand(m, 2), ep = taylor_expand(p, 2);
    for (int k = 0; k <= 2; ++k)
      CHECK(value(order_terms(em, k), x, 25) ==
            doctest::Approx(value(order_terms(ep, k), x, 25)).epsilon(1e-12));
  }
}

TEST_CASE("property: taylor_expand keeps the input variable names") {
  Gen g(25);
  for (int i = 0; i < 15; ++i) {
    MHF m = g.mhf(2);
    EpsExpansion e = taylor_expand(m, 2);
    for (const auto& [k, ts] : e.orders)
      for (const auto& t : ts) {
        for (const auto& v : t.mhf.variables)
          CHECK(std::find(m.variables.begin(), m.variables.end(), v) != m.variables.end());
        for (const auto& [v, p] : t.monomial)
          CHECK(std::find(m.variables.begin(), m.variables.end(), v) != m.variables.end());
      }
  }
}

TEST_CASE("property: eps^1 coefficient matches a central difference in eps") {
  Gen g(26);
  const std::map<std::string, Rational> x{{"x", q(1, 12)}, {"y", q(-1, 16)}};
  const Rational h = q(1, 10000);
  for (int i = 0; i < 12; ++i) {
    MHF m = g.mhf(2);
    EpsExpansion e = taylor_expand(m, 1);
    const double sym = value(order_terms(e, 1), x, 40);
    const double fd = Rational((brute_sum(m, x, 20, h) - brute_sum(m, x, 20, -h)) / (2 * h)).get_d();
    // both sides truncated; the box tails are far below the tolerance at this point
    INFO(to_string(m));
    CHECK(sym == doctest::Approx(fd).epsilon(1e-6).scale(1e-3));
  }
}

TEST_CASE("arg_derivative examples") {
  SUBCASE("d/dx 2F1(1,1;2;x) = (1/2) 2F1(2,2;3;x) at x = 1/3") {
    MHF m = make_pfq({EpsLinear(q(1)), EpsLinear(q(1))}, {EpsLinear(q(2))}, "x");
    std::vector<Term> d = arg_derivative(term_of(m), "x");
    const std::map<std::string, Rational> x{{"x", q(1, 3)}};
    MHF up = make_pfq({EpsLinear(q(2)), EpsLinear(q(2))}, {EpsLinear(q(3))}, "x");
    CHECK(exact_value(d, x, 30) == q(1, 2) * brute_sum(up, x, 30));
    // finite difference of the truncated series in x
    const Rational h = q(1, 100000);
    const Rational diff =
        brute_sum(m, {{"x", q(1, 3) + h}}, 80) - brute_sum(m, {{"x", q(1, 3) - h}}, 80);
    const double fd = Rational(diff / (2 * h)).get_d();
    CHECK(value(d, x, 80) == doctest::Approx(fd).epsilon(1e-8));
  }
  SUBCASE("constant MHF") {
    MHF m;
    CHECK(arg_derivative(term_of(m), "x").empty());
  }
  SUBCASE("product rule with a monomial") {
    MHF m = make_pfq({EpsLinear(q(1, 2))}, {EpsLinear(q(3, 2))}, "x");
    Term t{EpsSeries::constant(1, 4), {{"x", 2}}, m};
    std::vector<Term> d = arg_derivative(t, "x");
    const Rational x0 = q(1, 5);
    // 2x F + x^2 F'
    std::vector<Term> fp = arg_derivative(term_of(m), "x");
    const Rational want = 2 * x0 * brute_sum(m, {{"x", x0}}, 20) + x0 * x0 * exact_value(fp, {{"x", x0}}, 20);
    CHECK(exact_value(d, {{"x", x0}}, 20) == want);
  }
}

TEST_CASE("theta_apply examples") {
  SUBCASE("theta on 1") {
    MHF m;
    CHECK(theta_apply(term_of(m), "x").empty());
  }
  SUBCASE("theta F = x dF/dx") {
    MHF m = make_pfq({EpsLinear(q(1, 3)), EpsLinear(q(2))}, {EpsLinear(q(5, 2))}, "x");
    const Rational x0 = q(1, 4);
    Rational th = exact_value(theta_apply(term_of(m), "x"), {{"x", x0}}, 20);
    Rational xd = x0 * exact_value(arg_derivative(term_of(m), "x"), {{"x", x0}}, 20);
    CHECK(th == xd);
  }
  SUBCASE("(theta + c) 2F1(a,b;c+1;x) = c 2F1(a,b;c;x) at a=1, b=2, c=3, x=1/4") {
    MHF up = make_pfq({EpsLinear(q(1)), EpsLinear(q(2))}, {EpsLinear(q(4))}, "x");
    MHF base = make_pfq({EpsLinear(q(1)), EpsLinear(q(2))}, {EpsLinear(q(3))}, "x");
    std::vector<Term> lhs = theta_apply(term_of(up), "x");
    lhs.push_back({EpsSeries::constant(3, 4), {}, up});
    const std::map<std::string, Rational> x{{"x", q(1, 4)}};
    CHECK(value(lhs, x, 120) == doctest::Approx(3 * brute_sum(base, x, 120).get_d()).epsilon(1e-14));
  }
}
