#pragma once

// Exact scalars: rationals, parameters linear in eps, and truncated Laurent
// series in eps with rational coefficients.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mhfx {

using Rational = mpq_class;
using Integer = mpz_class;

// "p/q", or "p" when q == 1.
std::string to_string(const Rational& q);
// Accepts "p/q", "p", and plain decimals such as "-0.125" (converted exactly).
Rational parse_rational(std::string_view text);

bool is_integer(const Rational& q);
// Requires is_integer(q); throws InvalidArgument when the value does not fit.
long to_long(const Rational& q);
int compare(const Rational& a, const Rational& b);

// b0 + b1*eps
struct EpsLinear {
  Rational b0{0};
  Rational b1{0};

  EpsLinear() = default;
  EpsLinear(Rational c0, Rational c1 = 0) : b0(std::move(c0)), b1(std::move(c1)) {}
  explicit EpsLinear(long c0) : b0(c0), b1(0) {}

  bool eps_free() const { return b1 == 0; }
  bool identically_zero() const { return b0 == 0 && b1 == 0; }
  // b0 is zero or a negative integer.
  bool nonpositive_integer_at_zero() const { return is_integer(b0) && b0 <= 0; }

  EpsLinear shifted(const Rational& c) const { return {b0 + c, b1}; }
  EpsLinear at_eps_zero() const { return {b0, 0}; }
  EpsLinear at(const Rational& eps) const { return {b0 + b1 * eps, 0}; }

  friend bool operator==(const EpsLinear&, const EpsLinear&) = default;
};

// Total order used by canonical forms: by b0, then b1.
int compare(const EpsLinear& a, const EpsLinear& b);
std::string to_string(const EpsLinear& p);

// Truncated Laurent series sum_k c_k eps^k, dense over [min_order, truncation).
// Coefficients at or above `truncation` are unknown. The leading stored
// coefficient is nonzero unless the series is identically zero, in which case
// no coefficients are stored and min_order == truncation.
class EpsSeries {
 public:
  EpsSeries() = default;
  // Constant c known through eps^(truncation-1).
  static EpsSeries constant(const Rational& c, int truncation);
  static EpsSeries zero(int truncation);
  static EpsSeries monomial(const Rational& c, int power, int truncation);
  static EpsSeries from_linear(const EpsLinear& p, int truncation);
  static EpsSeries from_coefficients(int min_order, std::vector<Rational> coeffs,
                                     int truncation);

  int min_order() const { return min_order_; }
  int truncation() const { return truncation_; }
  bool is_zero() const { return coeffs_.empty(); }
  // Coefficient of eps^k; zero below min_order. Throws TruncationTooShallow
  // for k >= truncation.
  Rational coeff(int k) const;
  const std::vector<Rational>& coefficients() const { return coeffs_; }
  // Only the eps^0 term is nonzero (or the series is zero).
  bool is_constant() const;

  EpsSeries truncated(int new_truncation) const;
  EpsSeries derivative() const;
  EpsSeries negated() const;
  EpsSeries scaled(const Rational& c) const;
  // eps^k * this
  EpsSeries shifted(int k) const;

  friend EpsSeries operator+(const EpsSeries& a, const EpsSeries& b);
  friend EpsSeries operator-(const EpsSeries& a, const EpsSeries& b);
  friend EpsSeries operator*(const EpsSeries& a, const EpsSeries& b);
  EpsSeries& operator+=(const EpsSeries& b) { return *this = *this + b; }
  EpsSeries& operator*=(const EpsSeries& b) { return *this = *this * b; }

  // Same window, same coefficients.
  friend bool operator==(const EpsSeries& a, const EpsSeries& b);

 private:
  void normalize();

  int min_order_ = 0;
  int truncation_ = 0;
  std::vector<Rational> coeffs_;
};

// 1/s, with s * laurent_invert(s) == 1 + O(eps^truncation).
EpsSeries laurent_invert(const EpsSeries& s);

enum class SeriesOp { Add, Mul };
EpsSeries eps_arith(const EpsSeries& a, const EpsSeries& b, SeriesOp op);

std::string to_string(const EpsSeries& s);

}  // namespace mhfx
