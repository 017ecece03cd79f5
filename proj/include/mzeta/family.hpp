#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mzeta/arith.hpp"
#include "mzeta/rational.hpp"

namespace mzeta {

class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Prime exponents (nu_1, ..., nu_n) of a local factor f(p^nu_1, ..., p^nu_n).
class ExponentVector {
 public:
  ExponentVector() = default;
  explicit ExponentVector(std::vector<int> entries);
  ExponentVector(std::initializer_list<int> entries) : ExponentVector(std::vector<int>(entries)) {}

  std::size_t size() const { return entries_.size(); }
  int operator[](std::size_t i) const { return entries_[i]; }
  std::span<const int> entries() const { return entries_; }

  int max() const;
  int min() const;
  int l1() const;
  bool is_zero() const { return l1() == 0; }

  friend bool operator==(const ExponentVector&, const ExponentVector&) = default;
  friend auto operator<=>(const ExponentVector&, const ExponentVector&) = default;

 private:
  std::vector<int> entries_;
};

enum class FamilyKind { cyclic, inv_lcm, inv_lcm_coprime, prod_over_lcm, custom };

std::string_view family_name(FamilyKind kind);
// Throws ConfigurationError for an unknown name.
FamilyKind parse_family_kind(std::string_view name);

struct Generator {
  ExponentVector nu;
  int multiplicity = 1;
};

using LocalRule = std::function<Rational(const ExponentVector&, std::uint64_t prime)>;

// A multiplicative family together with the data driving its asymptotics:
// exponent vector c, generator set I with multiplicities u, and log-degree rho.
struct FamilySpec {
  FamilyKind kind = FamilyKind::custom;
  std::string name;
  int n = 0;
  std::vector<Rational> c;
  std::vector<Generator> generators;
  int rho = 0;
  LocalRule local_rule;  // custom families only

  // Throws ConfigurationError when the family is undefined in dimension n
  // (inv-lcm-coprime needs n >= 2).
  static FamilySpec builtin(FamilyKind kind, int n);
  static FamilySpec builtin(std::string_view name, int n);
  // Metadata is taken as given; it is not inferred from the rule.
  static FamilySpec custom(std::string name, int n, std::vector<Rational> c, std::vector<Generator> generators,
                           int rho, LocalRule rule);

  Rational c_norm() const;
  // Sum of generator multiplicities, the exponent of (1 - 1/p) in the Euler factor.
  int generator_weight() const;
  // <nu, c>
  Rational weight(const ExponentVector& nu) const;
};

// Leading coefficient of the cyclic local factor.
int g1(const ExponentVector& nu);

enum class CnMethod { toth, closed };

BigInt local_cn(const ExponentVector& nu, std::uint64_t p, CnMethod method = CnMethod::closed);

// Integer coefficients (index = power of p) of c_n(p^nu) as a polynomial in p.
std::vector<BigInt> local_cn_polynomial(const ExponentVector& nu);

// Hot-path variant with machine integers; the caller guarantees no overflow.
std::uint64_t local_cn_u64(std::span<const int> nu, std::uint64_t p);

Rational local_factor(const FamilySpec& family, const ExponentVector& nu, std::uint64_t p);

Rational eval_family(const FamilySpec& family, std::span<const std::uint64_t> m, const FactorizationTable& table);

// Cyclic subgroups of Z_m1 x ... x Z_mn counted through element orders.
BigInt oracle_cyclic_count(std::span<const std::uint64_t> m);

// The family's defining lcm/gcd expression, without multiplicativity.
Rational oracle_direct(const FamilySpec& family, std::span<const std::uint64_t> m);

}  // namespace mzeta
