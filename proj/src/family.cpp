#include "mzeta/family.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>

namespace mzeta {

ExponentVector::ExponentVector(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_) {
    if (e < 0) throw std::invalid_argument("exponent vector entries must be nonnegative");
  }
}

int ExponentVector::max() const { return entries_.empty() ? 0 : *std::max_element(entries_.begin(), entries_.end()); }
int ExponentVector::min() const { return entries_.empty() ? 0 : *std::min_element(entries_.begin(), entries_.end()); }
int ExponentVector::l1() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }

std::string_view family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::cyclic: return "cyclic";
    case FamilyKind::inv_lcm: return "inv-lcm";
    case FamilyKind::inv_lcm_coprime: return "inv-lcm-coprime";
    case FamilyKind::prod_over_lcm: return "prod-over-lcm";
    case FamilyKind::custom: return "custom";
  }
  return "custom";
}

FamilyKind parse_family_kind(std::string_view name) {
  for (FamilyKind k : {FamilyKind::cyclic, FamilyKind::inv_lcm, FamilyKind::inv_lcm_coprime,
                       FamilyKind::prod_over_lcm}) {
    if (family_name(k) == name) return k;
  }
  throw ConfigurationError("unknown family '" + std::string(name) + "'");
}

namespace {

// {0,1}^n without zero, ordered by weight and then e_1 before e_2 etc.
std::vector<ExponentVector> binary_vectors(int n, bool include_all_ones) {
  std::vector<ExponentVector> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    if (!include_all_ones && mask == (1u << n) - 1) continue;
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = (mask >> i) & 1;
    out.emplace_back(std::move(v));
  }
  std::sort(out.begin(), out.end(), [](const ExponentVector& a, const ExponentVector& b) {
    if (a.l1() != b.l1()) return a.l1() < b.l1();
    return b < a;
  });
  return out;
}

}  // namespace

FamilySpec FamilySpec::builtin(FamilyKind kind, int n) {
  if (n < 1) throw ConfigurationError("dimension must be at least 1");
  if (n > 16) throw ConfigurationError("dimension above 16 is not supported");
  if (kind == FamilyKind::custom) throw ConfigurationError("custom families need an explicit local rule");
  if (kind == FamilyKind::inv_lcm_coprime && n < 2) {
    throw ConfigurationError("inv-lcm-coprime is defined for n >= 2");
  }
  FamilySpec f;
  f.kind = kind;
  f.name = std::string(family_name(kind));
  f.n = n;
  bool unit_c = kind == FamilyKind::cyclic || kind == FamilyKind::prod_over_lcm;
  f.c.assign(n, Rational(unit_c ? 1 : 0));
  for (auto& nu : binary_vectors(n, kind != FamilyKind::inv_lcm_coprime)) {
    int mult = (kind == FamilyKind::cyclic && nu.l1() == 1) ? 2 : 1;
    f.generators.push_back({std::move(nu), mult});
  }
  int full = (1 << n) - 1;
  switch (kind) {
    case FamilyKind::cyclic:
    case FamilyKind::inv_lcm: f.rho = full; break;
    case FamilyKind::inv_lcm_coprime: f.rho = full - 1; break;
    case FamilyKind::prod_over_lcm: f.rho = full - n; break;
    case FamilyKind::custom: break;
  }
  return f;
}

FamilySpec FamilySpec::builtin(std::string_view name, int n) { return builtin(parse_family_kind(name), n); }

FamilySpec FamilySpec::custom(std::string name, int n, std::vector<Rational> c, std::vector<Generator> generators,
                              int rho, LocalRule rule) {
  if (n < 1) throw ConfigurationError("dimension must be at least 1");
  if (static_cast<int>(c.size()) != n) throw ConfigurationError("exponent vector c must have n entries");
  if (generators.empty()) throw ConfigurationError("generator set must be nonempty");
  for (const auto& g : generators) {
    if (static_cast<int>(g.nu.size()) != n) throw ConfigurationError("generator of wrong dimension");
    if (g.multiplicity < 1) throw ConfigurationError("generator multiplicity must be positive");
  }
  for (const auto& ci : c) {
    if (ci < 0) throw ConfigurationError("exponent vector c must be nonnegative");
  }
  FamilySpec f;
  f.kind = FamilyKind::custom;
  f.name = std::move(name);
  f.n = n;
  f.c = std::move(c);
  f.generators = std::move(generators);
  f.rho = rho;
  f.local_rule = std::move(rule);
  return f;
}

Rational FamilySpec::c_norm() const {
  Rational s = 0;
  for (const auto& ci : c) s += ci;
  return s;
}

int FamilySpec::generator_weight() const {
  int s = 0;
  for (const auto& g : generators) s += g.multiplicity;
  return s;
}

Rational FamilySpec::weight(const ExponentVector& nu) const {
  Rational s = 0;
  for (std::size_t i = 0; i < nu.size(); ++i) s += c[i] * nu[i];
  return s;
}

int g1(const ExponentVector& nu) {
  if (nu.size() == 0) throw std::invalid_argument("g1 of an empty exponent vector");
  int top = nu.max();
  int at_top = 0;
  int below = 0;  // max of the entries strictly below the top; 0 when there are none
  for (int v : nu.entries()) {
    if (v == top) {
      ++at_top;
    } else {
      below = std::max(below, v);
    }
  }
  if (at_top >= 2) return 1;
  return top - below + 1;
}

std::vector<BigInt> local_cn_polynomial(const ExponentVector& nu) {
  std::vector<int> v(nu.entries().begin(), nu.entries().end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 0) throw std::invalid_argument("local_cn of an empty exponent vector");
  if (n == 1) return {BigInt(v[0] + 1)};
  int head = std::accumulate(v.begin(), v.end() - 1, 0);  // nu_1 + ... + nu_{n-1}
  std::vector<BigInt> coef(head + 1, 0);
  coef[head] += v[n - 1] - v[n - 2] + 1;
  for (int l = 0; l < v[n - 2]; ++l) {
    int e = l;
    for (std::size_t i = 0; i + 2 < n; ++i) e += std::min(v[i], l);
    coef[e] += 1;
  }
  for (int l = 0; l < head; ++l) coef[l] += 1;
  return coef;
}

namespace {

BigInt local_cn_toth(const ExponentVector& nu, std::uint64_t p) {
  const std::size_t n = nu.size();
  std::vector<BigInt> phi(nu.max() + 1);
  for (int e = 0; e <= nu.max(); ++e) phi[e] = totient_prime_power(p, e);
  std::vector<int> l(n, 0);
  BigInt total = 0;
  while (true) {
    // prod phi(p^l_i) / phi(p^max l): drop one factor attaining the maximum.
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (l[i] > l[arg]) arg = i;
    }
    BigInt term = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != arg) term *= phi[l[i]];
    }
    total += term;
    std::size_t i = 0;
    while (i < n && l[i] == nu[i]) l[i++] = 0;
    if (i == n) break;
    ++l[i];
  }
  return total;
}

}  // namespace

BigInt local_cn(const ExponentVector& nu, std::uint64_t p, CnMethod method) {
  if (method == CnMethod::toth) return local_cn_toth(nu, p);
  auto coef = local_cn_polynomial(nu);
  BigInt bp(static_cast<unsigned long>(p));
  BigInt acc = 0;
  for (auto it = coef.rbegin(); it != coef.rend(); ++it) acc = acc * bp + *it;
  return acc;
}

std::uint64_t local_cn_u64(std::span<const int> nu, std::uint64_t p) {
  std::array<int, 16> v{};
  const std::size_t n = nu.size();
  std::copy(nu.begin(), nu.end(), v.begin());
  std::sort(v.begin(), v.begin() + n);
  if (n == 1) return static_cast<std::uint64_t>(v[0]) + 1;
  auto ipow = [p](int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= p;
    return r;
  };
  int head = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) head += v[i];
  std::uint64_t total = static_cast<std::uint64_t>(v[n - 1] - v[n - 2] + 1) * ipow(head);
  std::uint64_t pl = 1;
  for (int l = 0; l < v[n - 2]; ++l) {
    int e = 0;
    for (std::size_t i = 0; i + 2 < n; ++i) e += std::min(v[i], l);
    total += ipow(e) * pl;
    pl *= p;
  }
  // sum_{l < head} p^l
  total += (ipow(head) - 1) / (p - 1);
  return total;
}

Rational local_factor(const FamilySpec& family, const ExponentVector& nu, std::uint64_t p) {
  if (static_cast<int>(nu.size()) != family.n) throw std::invalid_argument("exponent vector of wrong dimension");
  BigInt bp(static_cast<unsigned long>(p));
  switch (family.kind) {
    case FamilyKind::cyclic: return Rational(local_cn(nu, p));
    case FamilyKind::inv_lcm: return pow_rational(Rational(bp), -nu.max());
    case FamilyKind::inv_lcm_coprime:
      if (nu.min() > 0) return Rational(0);
      return pow_rational(Rational(bp), -nu.max());
    case FamilyKind::prod_over_lcm: return Rational(pow_int(bp, nu.l1() - nu.max()));
    case FamilyKind::custom:
      if (!family.local_rule) throw ConfigurationError("custom family '" + family.name + "' has no local rule");
      return family.local_rule(nu, p);
  }
  throw ConfigurationError("unhandled family");
}

Rational eval_family(const FamilySpec& family, std::span<const std::uint64_t> m, const FactorizationTable& table) {
  if (static_cast<int>(m.size()) != family.n) throw std::invalid_argument("tuple of wrong dimension");
  std::map<std::uint64_t, std::vector<int>> exps;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (const auto& [p, e] : table.factorize(m[i])) {
      auto& v = exps[p];
      v.resize(m.size(), 0);
      v[i] = e;
    }
  }
  Rational value = 1;
  for (auto& [p, v] : exps) {
    value *= local_factor(family, ExponentVector(std::move(v)), p);
    if (value == 0) break;
  }
  return value;
}

namespace {

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint64_t lcm_u64_checked(std::span<const std::uint64_t> m) {
  unsigned __int128 l = 1;
  for (std::uint64_t v : m) {
    if (v == 0) throw std::invalid_argument("tuple entries must be positive");
    std::uint64_t cur = static_cast<std::uint64_t>(l);
    l = static_cast<unsigned __int128>(cur / gcd_u64(cur, v)) * v;
    if (l >> 64) throw std::overflow_error("lcm exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(l);
}

}  // namespace

BigInt oracle_cyclic_count(std::span<const std::uint64_t> m) {
  if (m.empty()) throw std::invalid_argument("empty tuple");
  std::uint64_t L = lcm_u64_checked(m);
  auto fac = factorize_trial(L);

  // Enumerate divisors d of L with their prime exponents.
  std::vector<int> e(fac.size(), 0);
  BigInt total = 0;
  while (true) {
    std::uint64_t d = 1;
    BigInt phi = 1;
    for (std::size_t i = 0; i < fac.size(); ++i) {
      for (int k = 0; k < e[i]; ++k) d *= fac[i].prime;
      phi *= totient_prime_power(fac[i].prime, e[i]);
    }
    // Elements of exact order d: sum over squarefree s | d of mu(s) * #{x : (d/s) x = 0}.
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < fac.size(); ++i) {
      if (e[i] > 0) support.push_back(i);
    }
    BigInt exact = 0;
    for (unsigned mask = 0; mask < (1u << support.size()); ++mask) {
      std::uint64_t s = 1;
      int sign = 1;
      for (std::size_t b = 0; b < support.size(); ++b) {
        if ((mask >> b) & 1) {
          s *= fac[support[b]].prime;
          sign = -sign;
        }
      }
      std::uint64_t ed = d / s;
      BigInt killed = 1;
      for (std::uint64_t mi : m) killed *= static_cast<unsigned long>(gcd_u64(ed, mi));
      if (sign > 0) {
        exact += killed;
      } else {
        exact -= killed;
      }
    }
    if (exact % phi != 0) throw std::logic_error("element count not divisible by phi(d)");
    total += exact / phi;

    std::size_t i = 0;
    while (i < fac.size() && e[i] == fac[i].exponent) e[i++] = 0;
    if (i == fac.size()) break;
    ++e[i];
  }
  return total;
}

Rational oracle_direct(const FamilySpec& family, std::span<const std::uint64_t> m) {
  if (static_cast<int>(m.size()) != family.n) throw std::invalid_argument("tuple of wrong dimension");
  auto [lcm, gcd] = lcm_gcd_tuple(m);
  switch (family.kind) {
    case FamilyKind::cyclic: return Rational(oracle_cyclic_count(m));
    case FamilyKind::inv_lcm: return Rational(BigInt(1), lcm);
    case FamilyKind::inv_lcm_coprime:
      if (gcd != 1) return Rational(0);
      return Rational(BigInt(1), lcm);
    case FamilyKind::prod_over_lcm: {
      BigInt prod = 1;
      for (std::uint64_t v : m) prod *= static_cast<unsigned long>(v);
      return Rational(BigInt(prod / lcm));
    }
    case FamilyKind::custom: break;
  }
  throw ConfigurationError("family '" + family.name + "' has no direct definition");
}

}  // namespace mzeta
