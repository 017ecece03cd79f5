#include "mzeta/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace mzeta {

std::string to_fraction_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw std::invalid_argument("not an integer: " + std::string(s));
  BigInt v(std::string(s), 10);
  return negative ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash));
    BigInt den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in " + std::string(text));
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac)) {
      throw std::invalid_argument("not a decimal: " + std::string(text));
    }
    BigInt num(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
    BigInt den = pow_int(BigInt(10), frac.size());
    Rational q(negative ? BigInt(-num) : num, den);
    q.canonicalize();
    return q;
  }
  return Rational(parse_integer(text));
}

BigInt pow_int(const BigInt& base, unsigned long exponent) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

Rational pow_rational(const Rational& base, long exponent) {
  if (exponent >= 0) {
    Rational r(pow_int(base.get_num(), exponent), pow_int(base.get_den(), exponent));
    r.canonicalize();
    return r;
  }
  if (base == 0) throw std::domain_error("zero to a negative power");
  unsigned long e = static_cast<unsigned long>(-exponent);
  Rational r(pow_int(base.get_den(), e), pow_int(base.get_num(), e));
  r.canonicalize();
  return r;
}

}  // namespace mzeta
