#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mzeta/rational.hpp"

namespace mzeta {

struct PrimePower {
  std::uint64_t prime;
  int exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Ascending primes <= limit.
std::vector<std::uint64_t> sieve_primes(std::uint64_t limit);

// Smallest-prime-factor table for 2 <= m <= limit.
class FactorizationTable {
 public:
  explicit FactorizationTable(std::uint32_t limit);

  std::uint32_t limit() const { return limit_; }
  std::uint32_t smallest_prime_factor(std::uint32_t m) const;

  // Sorted (prime, exponent) list; empty for m == 1.  Throws std::out_of_range.
  std::vector<PrimePower> factorize(std::uint64_t m) const;

  // Allocation-free variant for hot loops; returns the number of distinct primes.
  // Numbers below 2^32 have at most 9 distinct prime factors.
  static constexpr int kMaxDistinctPrimes = 10;
  int factorize_into(std::uint32_t m, std::array<PrimePower, kMaxDistinctPrimes>& out) const;

 private:
  std::uint32_t limit_;
  std::vector<std::uint32_t> spf_;
};

std::vector<PrimePower> factorize(std::uint64_t m, const FactorizationTable& table);

// Trial division; used by the oracles where no table is at hand.
std::vector<PrimePower> factorize_trial(std::uint64_t m);

struct LcmGcd {
  BigInt lcm;
  BigInt gcd;
};

// Throws std::invalid_argument on an empty tuple or a zero entry.
LcmGcd lcm_gcd_tuple(std::span<const std::uint64_t> m);

// mu[m] for 0 <= m <= limit (mu[0] is unused and set to 0).
std::vector<std::int8_t> mobius_sieve(std::uint64_t limit);

// Euler's totient of p^e, with phi(p^0) = 1.
BigInt totient_prime_power(std::uint64_t p, int e);

}  // namespace mzeta
