#include "mzeta/logpower.hpp"

#include <sstream>
#include <stdexcept>

namespace mzeta {

LogPowerExpr LogPowerExpr::constant(const Rational& c) { return monomial(c, Rational(0), 0); }

LogPowerExpr LogPowerExpr::monomial(const Rational& coeff, const Rational& x_power, int log_power) {
  LogPowerExpr e;
  e.add_term(coeff, x_power, log_power);
  return e;
}

void LogPowerExpr::add_term(const Rational& coeff, const Rational& x_power, int log_power) {
  if (coeff == 0) return;
  Key key{x_power, log_power};
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), coeff);
    return;
  }
  it->second += coeff;
  if (it->second == 0) terms_.erase(it);
}

LogPowerExpr& LogPowerExpr::operator+=(const LogPowerExpr& rhs) {
  for (const auto& [k, c] : rhs.terms_) add_term(c, k.x_power, k.log_power);
  return *this;
}

LogPowerExpr& LogPowerExpr::operator-=(const LogPowerExpr& rhs) {
  for (const auto& [k, c] : rhs.terms_) add_term(-c, k.x_power, k.log_power);
  return *this;
}

LogPowerExpr& LogPowerExpr::operator*=(const Rational& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, c] : terms_) c *= s;
  return *this;
}

LogPowerExpr operator*(const LogPowerExpr& a, const LogPowerExpr& b) {
  LogPowerExpr out;
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      out.add_term(ca * cb, ka.x_power + kb.x_power, ka.log_power + kb.log_power);
    }
  }
  return out;
}

LogPowerExpr LogPowerExpr::shifted_log(int k) const {
  LogPowerExpr out;
  for (const auto& [key, c] : terms_) out.terms_.emplace(Key{key.x_power, key.log_power + k}, c);
  return out;
}

std::vector<LogPowerExpr::Term> LogPowerExpr::terms() const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    out.push_back({it->second, it->first.x_power, it->first.log_power});
  }
  return out;
}

Rational LogPowerExpr::coefficient(const Rational& x_power, int log_power) const {
  auto it = terms_.find(Key{x_power, log_power});
  return it == terms_.end() ? Rational(0) : it->second;
}

Real LogPowerExpr::evaluate_log(const Real& log_x) const {
  const mpfr_prec_t prec = log_x.precision();
  if (log_x.is_zero()) {
    for (const auto& [k, c] : terms_) {
      if (k.log_power < 0) throw std::domain_error("negative log power at x = 1");
    }
  }
  Real total(0, prec);
  for (const auto& [k, c] : terms_) {
    Real term = Real(c, prec) * exp(Real(k.x_power, prec) * log_x);
    if (k.log_power != 0) term *= pow(log_x, static_cast<long>(k.log_power));
    total += term;
  }
  return total;
}

Real LogPowerExpr::evaluate(const Real& x) const { return evaluate_log(log(x)); }

std::string LogPowerExpr::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms()) {
    Rational mag = abs(t.coeff);
    os << (t.coeff < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    bool has_factor = t.x_power != 0 || t.log_power != 0;
    if (!has_factor || mag != 1) os << mag.get_str();
    if (t.x_power != 0) {
      if (!has_factor || mag != 1) os << "*";
      os << "x";
      if (t.x_power != 1) os << "^(" << t.x_power.get_str() << ")";
    }
    if (t.log_power != 0) {
      if (t.x_power != 0 || mag != 1) os << "*";
      os << "ln(x)";
      if (t.log_power != 1) os << "^" << t.log_power;
    }
    first = false;
  }
  return os.str();
}

}  // namespace mzeta
