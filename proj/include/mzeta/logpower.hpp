#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mzeta/rational.hpp"
#include "mzeta/real.hpp"

namespace mzeta {

// A finite sum  sum coeff * x^a * (ln x)^b  with rational coeff and a, integer b.
// Zero coefficients are never stored, so equality is term-for-term.
class LogPowerExpr {
 public:
  struct Key {
    Rational x_power;
    int log_power;
    friend bool operator<(const Key& l, const Key& r) {
      if (l.x_power != r.x_power) return l.x_power < r.x_power;
      return l.log_power < r.log_power;
    }
    friend bool operator==(const Key& l, const Key& r) {
      return l.x_power == r.x_power && l.log_power == r.log_power;
    }
  };
  struct Term {
    Rational coeff;
    Rational x_power;
    int log_power;
  };

  LogPowerExpr() = default;
  static LogPowerExpr constant(const Rational& c);
  static LogPowerExpr monomial(const Rational& coeff, const Rational& x_power, int log_power);

  void add_term(const Rational& coeff, const Rational& x_power, int log_power);

  LogPowerExpr& operator+=(const LogPowerExpr& rhs);
  LogPowerExpr& operator-=(const LogPowerExpr& rhs);
  LogPowerExpr& operator*=(const Rational& s);
  friend LogPowerExpr operator+(LogPowerExpr a, const LogPowerExpr& b) { return a += b; }
  friend LogPowerExpr operator-(LogPowerExpr a, const LogPowerExpr& b) { return a -= b; }
  friend LogPowerExpr operator*(LogPowerExpr a, const Rational& s) { return a *= s; }
  friend LogPowerExpr operator*(const LogPowerExpr& a, const LogPowerExpr& b);
  friend bool operator==(const LogPowerExpr& a, const LogPowerExpr& b) { return a.terms_ == b.terms_; }

  // Multiplies every term by (ln x)^k.
  LogPowerExpr shifted_log(int k) const;

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  // Terms ordered by decreasing x-power, then decreasing log-power.
  std::vector<Term> terms() const;
  Rational coefficient(const Rational& x_power, int log_power) const;

  // Evaluation through t = ln x, which keeps huge x representable.
  Real evaluate_log(const Real& log_x) const;
  Real evaluate(const Real& x) const;

  std::string to_string() const;

 private:
  std::map<Key, Rational> terms_;
};

}  // namespace mzeta
