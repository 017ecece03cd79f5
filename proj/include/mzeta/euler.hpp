#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mzeta/family.hpp"
#include "mzeta/rational.hpp"
#include "mzeta/real.hpp"

namespace mzeta {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr std::uint64_t kDefaultPrimeBound = 1000000;
inline constexpr int kDefaultExponentBound = 40;

struct EulerConstantResult {
  Real value;
  std::uint64_t prime_bound = 0;
  int exponent_bound = 0;
  // Heuristic: |log| of the factors over (P, 10P], extrapolated with the
  // 1/(P ln P) decay of sum_{p > P} p^-2.  Not a certified bound.
  Real tail_estimate;
  bool exact_local_sums = false;  // closed forms, so no exponent truncation
};

// Exponent truncation is by |nu|_inf <= B.
Real local_euler_factor(const FamilySpec& family, std::uint64_t p, int exponent_bound,
                        mpfr_prec_t prec = kDefaultPrecision);

// sum_{k >= 0} ((k+1)^n - k^n) / p^k
Rational closed_local_sum_lcm(int n, std::uint64_t p);
// sum over nu with min nu = 0 of p^{-max nu}
Rational closed_local_sum_coprime(int n, std::uint64_t p);

// Eulerian numbers A(n, 0..n-1): sum_{k >= 0} (k+1)^n t^k = A_n(t) / (1-t)^{n+1}.
std::vector<BigInt> eulerian_polynomial(int n);

// Local Euler factor of a built-in family as an integer polynomial in t = 1/p
// (index = power of t).  Exact for the LCM families; truncated at
// |nu|_inf <= B for cyclic.
std::vector<BigInt> local_factor_polynomial(const FamilySpec& family, int exponent_bound);

EulerConstantResult euler_constant(const FamilySpec& family, std::uint64_t prime_bound = kDefaultPrimeBound,
                                   int exponent_bound = kDefaultExponentBound, mpfr_prec_t prec = kDefaultPrecision,
                                   unsigned threads = 0);

struct MultipleZetaResult {
  Real value;
  Real margin;  // min_i (sigma_i - c_i)
  // Heuristic: |log| of the factors over (P, 2P] summed as a geometric series
  // in dyadic blocks.  Not a certified bound.
  Real tail_estimate;
};

// Truncated Euler product of sum_m f(m) / prod m_i^{sigma_i}.  Throws
// DomainError unless sigma_i > c_i for every i.
MultipleZetaResult multiple_zeta_eval(const FamilySpec& family, std::span<const Real> sigma,
                                      std::uint64_t prime_bound = kDefaultPrimeBound,
                                      int exponent_bound = kDefaultExponentBound,
                                      mpfr_prec_t prec = kDefaultPrecision, unsigned threads = 0);

}  // namespace mzeta
