#include "mhfx/scalar.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

#include "mhfx/error.hpp"

namespace mhfx {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::IdenticallyZero: return "IdenticallyZero";
    case ErrorCode::ConstantPole: return "ConstantPole";
    case ErrorCode::IntegerParameter: return "IntegerParameter";
    case ErrorCode::UnsupportedForm: return "UnsupportedForm";
    case ErrorCode::MixedSignForm: return "MixedSignForm";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::SingularLower: return "SingularLower";
    case ErrorCode::TruncationTooShallow: return "TruncationTooShallow";
    case ErrorCode::DenominatorZero: return "DenominatorZero";
    case ErrorCode::GammaPoleUnhandled: return "GammaPoleUnhandled";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::NormalizationError: return "NormalizationError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownCase: return "UnknownCase";
  }
  return "Unknown";
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' ' || c == '_'; }),
          s.end());
  if (s.empty()) fail(ErrorCode::SchemaError, "empty rational literal");
  auto bad = [&] { fail(ErrorCode::SchemaError, "malformed rational literal '" + s + "'"); };

  // Decimal with optional exponent: 1.25, -3e-4, 2.5E3
  auto epos = s.find_first_of("eE");
  bool decimal = s.find('.') != std::string::npos || epos != std::string::npos;
  if (decimal && s.find('/') == std::string::npos) {
    std::string mant = s.substr(0, epos);
    long exp10 = 0;
    if (epos != std::string::npos) {
      try {
        std::size_t used = 0;
        exp10 = std::stol(s.substr(epos + 1), &used);
        if (used != s.size() - epos - 1) bad();
      } catch (const std::logic_error&) {
        bad();
      }
    }
    bool neg = false;
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
      neg = mant[0] == '-';
      mant.erase(0, 1);
    }
    auto dot = mant.find('.');
    std::string digits = mant;
    if (dot != std::string::npos) {
      digits = mant.substr(0, dot) + mant.substr(dot + 1);
      exp10 -= static_cast<long>(mant.size() - dot - 1);
    }
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) bad();
    Integer n(digits, 10);
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    Rational r = exp10 < 0 ? Rational(n, p) : Rational(n * p);
    r.canonicalize();
    return neg ? Rational(-r) : r;
  }

  Rational r;
  if (r.set_str(s, 10) != 0) bad();
  if (r.get_den() == 0) bad();
  r.canonicalize();
  return r;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

long to_long(const Rational& q) {
  if (!is_integer(q) || !q.get_num().fits_slong_p())
    fail(ErrorCode::InvalidArgument, "value " + to_string(q) + " is not a machine integer");
  return q.get_num().get_si();
}

int compare(const Rational& a, const Rational& b) { return cmp(a, b); }

int compare(const EpsLinear& a, const EpsLinear& b) {
  if (int c = cmp(a.b0, b.b0)) return c;
  return cmp(a.b1, b.b1);
}

std::string to_string(const EpsLinear& p) {
  if (p.b1 == 0) return to_string(p.b0);
  std::ostringstream os;
  if (p.b0 != 0) os << to_string(p.b0) << (p.b1 > 0 ? "+" : "");
  if (p.b1 == 1)
    os << "eps";
  else if (p.b1 == -1)
    os << "-eps";
  else
    os << to_string(p.b1) << "*eps";
  return os.str();
}

// ---------------------------------------------------------------------------

EpsSeries EpsSeries::constant(const Rational& c, int truncation) {
  return from_coefficients(0, {c}, truncation);
}

EpsSeries EpsSeries::zero(int truncation) {
  EpsSeries s;
  s.min_order_ = truncation;
  s.truncation_ = truncation;
  return s;
}

EpsSeries EpsSeries::monomial(const Rational& c, int power, int truncation) {
  return from_coefficients(power, {c}, truncation);
}

EpsSeries EpsSeries::from_linear(const EpsLinear& p, int truncation) {
  return from_coefficients(0, {p.b0, p.b1}, truncation);
}

EpsSeries EpsSeries::from_coefficients(int min_order, std::vector<Rational> coeffs,
                                       int truncation) {
  EpsSeries s;
  s.min_order_ = min_order;
  s.truncation_ = truncation;
  if (min_order > truncation) coeffs.clear();
  coeffs.resize(static_cast<std::size_t>(std::max(0, truncation - min_order)));
  s.coeffs_ = std::move(coeffs);
  s.normalize();
  return s;
}

void EpsSeries::normalize() {
  std::size_t lead = 0;
  while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
  if (lead == coeffs_.size()) {
    coeffs_.clear();
    min_order_ = truncation_;
    return;
  }
  if (lead > 0) {
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
    min_order_ += static_cast<int>(lead);
  }
}

Rational EpsSeries::coeff(int k) const {
  if (k >= truncation_)
    fail(ErrorCode::TruncationTooShallow, "coefficient of eps^" + std::to_string(k) +
                                              " requested from a series truncated at eps^" +
                                              std::to_string(truncation_));
  if (k < min_order_) return 0;
  return coeffs_[static_cast<std::size_t>(k - min_order_)];
}

bool EpsSeries::is_constant() const {
  if (is_zero()) return true;
  if (min_order_ != 0) return false;
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  return true;
}

EpsSeries EpsSeries::truncated(int new_truncation) const {
  if (new_truncation > truncation_)
    fail(ErrorCode::TruncationTooShallow, "cannot extend a series beyond its truncation");
  if (is_zero()) return zero(new_truncation);
  std::vector<Rational> c(coeffs_.begin(),
                          coeffs_.begin() + std::max(0, std::min<int>(
                                                            static_cast<int>(coeffs_.size()),
                                                            new_truncation - min_order_)));
  return from_coefficients(min_order_, std::move(c), new_truncation);
}

EpsSeries EpsSeries::derivative() const {
  if (is_zero()) return zero(truncation_ - 1);
  std::vector<Rational> c(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    c[i] = coeffs_[i] * (min_order_ + static_cast<int>(i));
  return from_coefficients(min_order_ - 1, std::move(c), truncation_ - 1);
}

EpsSeries EpsSeries::negated() const { return scaled(-1); }

EpsSeries EpsSeries::scaled(const Rational& c) const {
  if (c == 0) return zero(truncation_);
  EpsSeries s = *this;
  for (auto& x : s.coeffs_) x *= c;
  return s;
}

EpsSeries EpsSeries::shifted(int k) const {
  EpsSeries s = *this;
  s.min_order_ += k;
  s.truncation_ += k;
  return s;
}

EpsSeries operator+(const EpsSeries& a, const EpsSeries& b) {
  int lo = std::min(a.min_order_, b.min_order_);
  int hi = std::min(a.truncation_, b.truncation_);
  std::vector<Rational> c(static_cast<std::size_t>(std::max(0, hi - lo)));
  for (int k = lo; k < hi; ++k) {
    Rational v = 0;
    if (k >= a.min_order_ && k - a.min_order_ < static_cast<int>(a.coeffs_.size()))
      v += a.coeffs_[static_cast<std::size_t>(k - a.min_order_)];
    if (k >= b.min_order_ && k - b.min_order_ < static_cast<int>(b.coeffs_.size()))
      v += b.coeffs_[static_cast<std::size_t>(k - b.min_order_)];
    c[static_cast<std::size_t>(k - lo)] = v;
  }
  return EpsSeries::from_coefficients(lo, std::move(c), hi);
}

EpsSeries operator-(const EpsSeries& a, const EpsSeries& b) { return a + b.negated(); }

EpsSeries operator*(const EpsSeries& a, const EpsSeries& b) {
  int hi = std::min(a.min_order_ + b.truncation_, b.min_order_ + a.truncation_);
  if (a.is_zero() || b.is_zero()) return EpsSeries::zero(hi);
  int lo = a.min_order_ + b.min_order_;
  int n = std::max(0, hi - lo);
  std::vector<Rational> c(static_cast<std::size_t>(n));
  for (int i = 0; i < static_cast<int>(a.coeffs_.size()) && i < n; ++i) {
    if (a.coeffs_[static_cast<std::size_t>(i)] == 0) continue;
    for (int j = 0; j < static_cast<int>(b.coeffs_.size()) && i + j < n; ++j)
      c[static_cast<std::size_t>(i + j)] +=
          a.coeffs_[static_cast<std::size_t>(i)] * b.coeffs_[static_cast<std::size_t>(j)];
  }
  return EpsSeries::from_coefficients(lo, std::move(c), hi);
}

bool operator==(const EpsSeries& a, const EpsSeries& b) {
  return a.min_order_ == b.min_order_ && a.truncation_ == b.truncation_ && a.coeffs_ == b.coeffs_;
}

EpsSeries laurent_invert(const EpsSeries& s) {
  if (s.is_zero())
    fail(ErrorCode::IdenticallyZero, "cannot invert a series that vanishes through eps^" +
                                         std::to_string(s.truncation() - 1));
  const auto& c = s.coefficients();
  const int n = static_cast<int>(c.size());
  std::vector<Rational> d(static_cast<std::size_t>(n));
  Rational inv0 = 1 / c[0];
  d[0] = inv0;
  for (int k = 1; k < n; ++k) {
    Rational acc = 0;
    for (int j = 1; j <= k; ++j) acc += c[static_cast<std::size_t>(j)] * d[static_cast<std::size_t>(k - j)];
    d[static_cast<std::size_t>(k)] = -acc * inv0;
  }
  return EpsSeries::from_coefficients(-s.min_order(), std::move(d), -s.min_order() + n);
}

EpsSeries eps_arith(const EpsSeries& a, const EpsSeries& b, SeriesOp op) {
  return op == SeriesOp::Add ? a + b : a * b;
}

std::string to_string(const EpsSeries& s) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < s.coefficients().size(); ++i) {
    const Rational& c = s.coefficients()[i];
    if (c == 0) continue;
    int k = s.min_order() + static_cast<int>(i);
    if (!first) os << " + ";
    first = false;
    os << "(" << to_string(c) << ")";
    if (k != 0) os << "*eps^" << k;
  }
  if (first) os << "0";
  os << " + O(eps^" << s.truncation() << ")";
  return os.str();
}

}  // namespace mhfx
