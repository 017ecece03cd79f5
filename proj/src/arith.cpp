#include "mzeta/arith.hpp"

#include <numeric>
#include <string>

namespace mzeta {

std::vector<std::uint64_t> sieve_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

FactorizationTable::FactorizationTable(std::uint32_t limit) : limit_(limit), spf_(limit + 1, 0) {
  // Linear sieve: every composite is struck exactly once by its smallest prime.
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes) {
      std::uint64_t composite = i * p;
      if (p > spf_[i] || composite > limit) break;
      spf_[composite] = p;
    }
  }
}

std::uint32_t FactorizationTable::smallest_prime_factor(std::uint32_t m) const {
  if (m < 2 || m > limit_) throw std::out_of_range("no smallest prime factor entry for " + std::to_string(m));
  return spf_[m];
}

std::vector<PrimePower> FactorizationTable::factorize(std::uint64_t m) const {
  if (m == 0 || m > limit_) {
    throw std::out_of_range("cannot factorize " + std::to_string(m) + " with table limit " +
                            std::to_string(limit_));
  }
  std::array<PrimePower, kMaxDistinctPrimes> buf{};
  int k = factorize_into(static_cast<std::uint32_t>(m), buf);
  return {buf.begin(), buf.begin() + k};
}

int FactorizationTable::factorize_into(std::uint32_t m, std::array<PrimePower, kMaxDistinctPrimes>& out) const {
  int k = 0;
  while (m > 1) {
    std::uint32_t p = spf_[m];
    int e = 0;
    do {
      m /= p;
      ++e;
    } while (m % p == 0);
    out[k++] = {p, e};
  }
  return k;
}

std::vector<PrimePower> factorize(std::uint64_t m, const FactorizationTable& table) { return table.factorize(m); }

std::vector<PrimePower> factorize_trial(std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("cannot factorize 0");
  std::vector<PrimePower> out;
  for (std::uint64_t p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (m > 1) out.push_back({m, 1});
  return out;
}

LcmGcd lcm_gcd_tuple(std::span<const std::uint64_t> m) {
  if (m.empty()) throw std::invalid_argument("lcm/gcd of an empty tuple");
  LcmGcd r{BigInt(1), BigInt(0)};
  for (std::uint64_t v : m) {
    if (v == 0) throw std::invalid_argument("lcm/gcd entries must be positive");
    BigInt bv(static_cast<unsigned long>(v));
    mpz_lcm(r.lcm.get_mpz_t(), r.lcm.get_mpz_t(), bv.get_mpz_t());
    mpz_gcd(r.gcd.get_mpz_t(), r.gcd.get_mpz_t(), bv.get_mpz_t());
  }
  return r;
}

std::vector<std::int8_t> mobius_sieve(std::uint64_t limit) {
  std::vector<std::int8_t> mu(limit + 1, 1);
  if (limit == 0) {
    mu[0] = 0;
    return mu;
  }
  mu[0] = 0;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    for (std::uint64_t j = p; j <= limit; j += p) {
      if (j > p) composite[j] = true;
      mu[j] = static_cast<std::int8_t>(-mu[j]);
    }
    if (p <= limit / p) {
      for (std::uint64_t j = p * p; j <= limit; j += p * p) mu[j] = 0;
    }
  }
  return mu;
}

BigInt totient_prime_power(std::uint64_t p, int e) {
  if (e == 0) return 1;
  BigInt bp(static_cast<unsigned long>(p));
  BigInt low = pow_int(bp, static_cast<unsigned long>(e - 1));
  return low * (bp - 1);
}

}  // namespace mzeta
