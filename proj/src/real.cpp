#include "mzeta/real.hpp"

#include <algorithm>
#include <stdexcept>

namespace mzeta {

Real::Real(mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_zero(v_, 1);
}

Real::Real(long value, mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_si(v_, value, MPFR_RNDN);
}

Real::Real(double value, mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_d(v_, value, MPFR_RNDN);
}

Real::Real(const Rational& value, mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
}

Real::Real(const BigInt& value, mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
}

Real::Real(const Real& other) {
  mpfr_init2(v_, other.precision());
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(v_, other.precision());
  mpfr_swap(v_, other.v_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(v_, other.precision());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

Real Real::parse(std::string_view text, mpfr_prec_t prec) {
  Real r(prec);
  std::string s(text);
  if (s.empty() || mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0) {
    throw std::invalid_argument("not a real number: " + s);
  }
  return r;
}

Real Real::pi(mpfr_prec_t prec) {
  Real r(prec);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

namespace {

std::string format(mpfr_srcptr v, size_t digits) {
  if (mpfr_nan_p(v)) return "nan";
  if (mpfr_inf_p(v)) return mpfr_sgn(v) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(v)) return "0";
  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, digits, v, MPFR_RNDN);
  std::string mant(raw);
  mpfr_free_str(raw);
  std::string sign;
  if (mant.front() == '-') {
    sign = "-";
    mant.erase(0, 1);
  }
  while (mant.size() > 1 && mant.back() == '0') mant.pop_back();
  std::string out = sign + mant.substr(0, 1);
  if (mant.size() > 1) out += "." + mant.substr(1);
  long e = static_cast<long>(exp10) - 1;
  if (e != 0) out += "e" + std::to_string(e);
  return out;
}

}  // namespace

std::string Real::to_string() const { return format(v_, 0); }

std::string Real::to_string(int digits) const {
  return format(v_, static_cast<size_t>(std::max(digits, 1)));
}

namespace {

template <typename Op>
void binary(mpfr_ptr lhs, mpfr_srcptr rhs, Op op) {
  if (mpfr_get_prec(rhs) > mpfr_get_prec(lhs)) mpfr_prec_round(lhs, mpfr_get_prec(rhs), MPFR_RNDN);
  op(lhs, lhs, rhs, MPFR_RNDN);
}

}  // namespace

Real& Real::operator+=(const Real& rhs) {
  binary(v_, rhs.v_, mpfr_add);
  return *this;
}
Real& Real::operator-=(const Real& rhs) {
  binary(v_, rhs.v_, mpfr_sub);
  return *this;
}
Real& Real::operator*=(const Real& rhs) {
  binary(v_, rhs.v_, mpfr_mul);
  return *this;
}
Real& Real::operator/=(const Real& rhs) {
  binary(v_, rhs.v_, mpfr_div);
  return *this;
}
Real& Real::operator*=(long rhs) {
  mpfr_mul_si(v_, v_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(long rhs) {
  mpfr_div_si(v_, v_, rhs, MPFR_RNDN);
  return *this;
}

Real Real::operator-() const {
  Real r(*this);
  mpfr_neg(r.v_, r.v_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.v_, b.v_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

namespace {

template <typename Fn>
Real unary(const Real& x, Fn fn) {
  Real r(x.precision());
  fn(r.get(), x.get(), MPFR_RNDN);
  return r;
}

}  // namespace

Real abs(const Real& x) { return unary(x, mpfr_abs); }
Real log(const Real& x) { return unary(x, mpfr_log); }
Real log1p(const Real& x) { return unary(x, mpfr_log1p); }
Real exp(const Real& x) { return unary(x, mpfr_exp); }
Real sqrt(const Real& x) { return unary(x, mpfr_sqrt); }
Real gamma(const Real& x) { return unary(x, mpfr_gamma); }

Real pow(const Real& base, const Real& exponent) {
  Real r(std::max(base.precision(), exponent.precision()));
  mpfr_pow(r.get(), base.get(), exponent.get(), MPFR_RNDN);
  return r;
}

Real pow(const Real& base, long exponent) {
  Real r(base.precision());
  mpfr_pow_si(r.get(), base.get(), exponent, MPFR_RNDN);
  return r;
}

Real zeta(unsigned long s, mpfr_prec_t prec) {
  Real r(prec);
  mpfr_zeta_ui(r.get(), s, MPFR_RNDN);
  return r;
}

Real relative_difference(const Real& a, const Real& b) {
  Real d = abs(a - b);
  if (b.is_zero()) return d;
  return d / abs(b);
}

}  // namespace mzeta
