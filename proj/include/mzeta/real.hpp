#pragma once

#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "mzeta/rational.hpp"

namespace mzeta {

inline constexpr mpfr_prec_t kDefaultPrecision = 256;

// Value-semantic wrapper around an mpfr_t.  Every operation rounds to
// nearest; the precision of a binary result is the larger of the operands'.
class Real {
 public:
  explicit Real(mpfr_prec_t prec = kDefaultPrecision);
  Real(long value, mpfr_prec_t prec);
  Real(int value, mpfr_prec_t prec) : Real(static_cast<long>(value), prec) {}
  Real(double value, mpfr_prec_t prec);
  Real(const Rational& value, mpfr_prec_t prec);
  Real(const BigInt& value, mpfr_prec_t prec);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  // Parses a decimal or scientific literal; throws std::invalid_argument.
  static Real parse(std::string_view text, mpfr_prec_t prec);
  static Real pi(mpfr_prec_t prec);

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  // Shortest decimal string that reads back to the same value at this precision.
  std::string to_string() const;
  // Decimal string with `digits` significant digits.
  std::string to_string(int digits) const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);
  Real& operator*=(long rhs);
  Real& operator/=(long rhs);

  friend Real operator+(Real lhs, const Real& rhs) { return lhs += rhs; }
  friend Real operator-(Real lhs, const Real& rhs) { return lhs -= rhs; }
  friend Real operator*(Real lhs, const Real& rhs) { return lhs *= rhs; }
  friend Real operator/(Real lhs, const Real& rhs) { return lhs /= rhs; }
  friend Real operator*(Real lhs, long rhs) { return lhs *= rhs; }
  friend Real operator/(Real lhs, long rhs) { return lhs /= rhs; }
  Real operator-() const;

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);

 private:
  mpfr_t v_;
};

Real abs(const Real& x);
Real log(const Real& x);
Real log1p(const Real& x);
Real exp(const Real& x);
Real sqrt(const Real& x);
Real pow(const Real& base, const Real& exponent);
Real pow(const Real& base, long exponent);
Real gamma(const Real& x);
Real zeta(unsigned long s, mpfr_prec_t prec);
// |a - b| / |b|, or |a| when b is zero.
Real relative_difference(const Real& a, const Real& b);

}  // namespace mzeta
