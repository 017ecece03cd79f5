#include "mzeta/euler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>

#include "mzeta/arith.hpp"
#include "mzeta/parallel.hpp"

namespace mzeta {

namespace {

BigInt binomial(long n, long k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

BigInt ipow(long base, long e) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
  return out;
}

std::vector<BigInt> poly_mul(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  std::vector<BigInt> out(a.size() + b.size() - 1, BigInt(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// (1 - t)^e
std::vector<BigInt> one_minus_t_pow(int e) {
  std::vector<BigInt> out(e + 1);
  for (int k = 0; k <= e; ++k) out[k] = (k % 2 ? -1 : 1) * binomial(e, k);
  return out;
}

bool is_lcm_kind(FamilyKind k) {
  return k == FamilyKind::inv_lcm || k == FamilyKind::inv_lcm_coprime || k == FamilyKind::prod_over_lcm;
}

// Number of nu in N_0^n with max nu = k, restricted to min nu = 0 when coprime.
BigInt count_with_max(int n, long k, bool coprime) {
  BigInt all = ipow(k + 1, n) - (k == 0 ? BigInt(0) : ipow(k, n));
  if (!coprime || k == 0) return all;
  // Subtract those with every entry >= 1: entries in [1, k] with max k.
  return all - (ipow(k, n) - ipow(k - 1, n));
}

std::vector<BigInt> cyclic_truncated_polynomial(int n, int bound) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::vector<BigInt>> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find({n, bound});
    if (it != cache.end()) return it->second;
  }
  // sum over |nu|_inf <= B of c_n(p^nu) t^{|nu|_1} with c_n = sum_j a_j p^j,
  // enumerated over sorted nu weighted by their number of permutations.
  std::vector<BigInt> series(static_cast<std::size_t>(n) * bound + 1, BigInt(0));
  std::vector<BigInt> fact(n + 1, BigInt(1));
  for (int i = 1; i <= n; ++i) fact[i] = fact[i - 1] * i;
  std::vector<int> nu(n, 0);
  std::function<void(int, int)> visit = [&](int pos, int lo) {
    if (pos == n) {
      BigInt perms = fact[n];
      int run = 1;
      for (int i = 1; i <= n; ++i) {
        if (i < n && nu[i] == nu[i - 1]) {
          ++run;
        } else {
          perms /= fact[run];
          run = 1;
        }
      }
      int l1 = 0;
      for (int v : nu) l1 += v;
      auto coeffs = local_cn_polynomial(ExponentVector(nu));
      for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (coeffs[j] != 0) series[l1 - j] += perms * coeffs[j];
      }
      return;
    }
    for (int v = lo; v <= bound; ++v) {
      nu[pos] = v;
      visit(pos + 1, v);
    }
  };
  visit(0, 0);
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(std::make_pair(n, bound), std::move(series)).first->second;
}

struct PreparedPolynomial {
  std::vector<Real> coeffs;  // index = power of t
  double coeff_bits = 0;
  std::vector<double> coeffs_double;
};

PreparedPolynomial prepare(const std::vector<BigInt>& poly, mpfr_prec_t prec) {
  if (poly.empty() || poly[0] != 1) throw std::logic_error("local factor polynomial must have constant term 1");
  PreparedPolynomial out;
  for (const auto& c : poly) {
    out.coeffs.emplace_back(c, prec);
    out.coeffs_double.push_back(c.get_d());
    if (c != 0) out.coeff_bits = std::max(out.coeff_bits, static_cast<double>(mpz_sizeinbase(c.get_mpz_t(), 2)));
  }
  return out;
}

// log of the polynomial at t = 1/p, dropping powers of t below the working precision.
Real log_factor(const PreparedPolynomial& poly, std::uint64_t p, mpfr_prec_t prec) {
  const double bits = static_cast<double>(prec) + 64 + poly.coeff_bits;
  const std::size_t top =
      std::min(poly.coeffs.size() - 1, static_cast<std::size_t>(std::ceil(bits / std::log2(static_cast<double>(p)))));
  Real t = Real(1, prec) / Real(static_cast<long>(p), prec);
  Real acc(0, prec);
  for (std::size_t k = top; k >= 1; --k) {
    acc *= t;
    acc += poly.coeffs[k];
  }
  acc *= t;
  return log1p(acc);
}

double log_factor_double(const PreparedPolynomial& poly, std::uint64_t p) {
  const double t = 1.0 / static_cast<double>(p);
  const std::size_t top =
      std::min(poly.coeffs_double.size() - 1, static_cast<std::size_t>(std::ceil(128.0 / std::log2(1.0 / t))) + 1);
  double acc = 0;
  for (std::size_t k = top; k >= 1; --k) acc = acc * t + poly.coeffs_double[k];
  return std::log1p(acc * t);
}

Real sum_in_order(const std::vector<Real>& logs, mpfr_prec_t prec) {
  Real total(0, prec);
  for (const auto& v : logs) total += v;
  return total;
}

Real round_to(const Real& v, mpfr_prec_t prec) {
  Real out(prec);
  mpfr_set(out.get(), v.get(), MPFR_RNDN);
  return out;
}

void require_prime(std::uint64_t p) {
  if (p < 2) throw std::invalid_argument("p must be a prime >= 2");
  for (std::uint64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) throw std::invalid_argument("p must be prime");
  }
}

}  // namespace

std::vector<BigInt> eulerian_polynomial(int n) {
  if (n < 1) return {BigInt(1)};
  std::vector<BigInt> a(n);
  for (int m = 0; m < n; ++m) {
    BigInt s = 0;
    for (int j = 0; j <= m; ++j) {
      BigInt term = binomial(n + 1, j) * ipow(m + 1 - j, n);
      if (j % 2) {
        s -= term;
      } else {
        s += term;
      }
    }
    a[m] = s;
  }
  return a;
}

Rational closed_local_sum_lcm(int n, std::uint64_t p) {
  if (p < 2) throw std::invalid_argument("p must be >= 2");
  // A_n(t) / (1 - t)^n with t = 1/p
  Rational t(1, static_cast<unsigned long>(p));
  Rational num = 0, tp = 1;
  for (const auto& a : eulerian_polynomial(n)) {
    num += Rational(a) * tp;
    tp *= t;
  }
  return num / pow_rational(1 - t, n);
}

Rational closed_local_sum_coprime(int n, std::uint64_t p) {
  // A_n(t) / (1 - t)^{n-1}
  Rational t(1, static_cast<unsigned long>(p));
  return closed_local_sum_lcm(n, p) * (1 - t);
}

std::vector<BigInt> local_factor_polynomial(const FamilySpec& family, int exponent_bound) {
  const int n = family.n;
  const int weight = family.generator_weight();
  if (is_lcm_kind(family.kind)) {
    const int shift = family.kind == FamilyKind::inv_lcm_coprime ? n - 1 : n;
    auto poly = poly_mul(eulerian_polynomial(n), one_minus_t_pow(weight - shift));
    while (poly.size() > 1 && poly.back() == 0) poly.pop_back();
    return poly;
  }
  if (family.kind == FamilyKind::cyclic) {
    if (exponent_bound < 1) throw std::invalid_argument("exponent bound must be >= 1");
    auto poly = poly_mul(cyclic_truncated_polynomial(n, exponent_bound), one_minus_t_pow(weight));
    while (poly.size() > 1 && poly.back() == 0) poly.pop_back();
    return poly;
  }
  throw ConfigurationError("no polynomial local factor for custom families");
}

Real local_euler_factor(const FamilySpec& family, std::uint64_t p, int exponent_bound, mpfr_prec_t prec) {
  require_prime(p);
  if (exponent_bound < 1) throw std::invalid_argument("exponent bound must be >= 1");
  const mpfr_prec_t work = prec + 32;
  const Real t = Real(1, work) / Real(static_cast<long>(p), work);
  Real sum(0, work);
  if (is_lcm_kind(family.kind)) {
    // Grouped by k = max nu; every such nu contributes t^k.
    const bool coprime = family.kind == FamilyKind::inv_lcm_coprime;
    Real tk(1, work);
    for (long k = 0; k <= exponent_bound; ++k) {
      sum += Real(count_with_max(family.n, k, coprime), work) * tk;
      tk *= t;
    }
  } else if (family.kind == FamilyKind::cyclic) {
    const auto& series = cyclic_truncated_polynomial(family.n, exponent_bound);
    for (std::size_t k = series.size(); k-- > 0;) {
      sum *= t;
      sum += Real(series[k], work);
    }
  } else {
    std::vector<int> nu(family.n, 0);
    const Real logp = log(Real(static_cast<long>(p), work));
    while (true) {
      ExponentVector v(nu);
      Rational value = local_factor(family, v, p);
      if (value != 0) sum += Real(value, work) * exp(-(Real(family.weight(v), work) * logp));
      int i = 0;
      while (i < family.n && nu[i] == exponent_bound) nu[i++] = 0;
      if (i == family.n) break;
      ++nu[i];
    }
  }
  Real out = pow(Real(1, work) - t, static_cast<long>(family.generator_weight())) * sum;
  return round_to(out, prec);
}

EulerConstantResult euler_constant(const FamilySpec& family, std::uint64_t prime_bound, int exponent_bound,
                                   mpfr_prec_t prec, unsigned threads) {
  if (prime_bound < 2) throw std::invalid_argument("prime bound must be >= 2");
  if (exponent_bound < 2) throw std::invalid_argument("exponent bound must be >= 2");
  if (family.kind == FamilyKind::custom) throw ConfigurationError("Euler constants need a built-in family");
  const mpfr_prec_t work = prec + 32;
  const auto poly = prepare(local_factor_polynomial(family, exponent_bound), work);
  const auto primes = sieve_primes(prime_bound);
  std::vector<Real> logs(primes.size(), Real(work));
  parallel_for(primes.size(), threads, [&](std::size_t i) { logs[i] = log_factor(poly, primes[i], work); });

  EulerConstantResult out;
  out.value = round_to(exp(sum_in_order(logs, work)), prec);
  out.prime_bound = prime_bound;
  out.exponent_bound = exponent_bound;
  out.exact_local_sums = is_lcm_kind(family.kind);

  // Window (P, 10P] in double precision, reduced in ascending order.
  const auto window = sieve_primes(prime_bound * 10);
  const auto first = std::upper_bound(window.begin(), window.end(), prime_bound);
  const std::size_t count = static_cast<std::size_t>(window.end() - first);
  std::vector<double> window_logs(count);
  parallel_for(count, threads, [&](std::size_t i) { window_logs[i] = std::fabs(log_factor_double(poly, first[i])); });
  double window_sum = 0;
  for (double v : window_logs) window_sum += v;
  const double P = static_cast<double>(prime_bound);
  const double near = 1.0 / (P * std::log(P));
  const double far = 1.0 / (10 * P * std::log(10 * P));
  out.tail_estimate = Real(window_sum * near / (near - far), 64);
  return out;
}

MultipleZetaResult multiple_zeta_eval(const FamilySpec& family, std::span<const Real> sigma,
                                      std::uint64_t prime_bound, int exponent_bound, mpfr_prec_t prec,
                                      unsigned threads) {
  const int n = family.n;
  if (static_cast<int>(sigma.size()) != n) throw std::invalid_argument("sigma has the wrong length");
  if (prime_bound < 2) throw std::invalid_argument("prime bound must be >= 2");
  if (exponent_bound < 1) throw std::invalid_argument("exponent bound must be >= 1");
  const mpfr_prec_t work = prec + 32;
  Real margin(1e300, work);
  for (int i = 0; i < n; ++i) {
    Real gap = sigma[i] - Real(family.c[i], work);
    if (!(gap > Real(0, work))) {
      throw DomainError("sigma_" + std::to_string(i + 1) + " = " + sigma[i].to_string(17) +
                        " is not above the convergence abscissa c_" + std::to_string(i + 1) + " = " +
                        family.c[i].get_str());
    }
    if (gap < margin) margin = gap;
  }
  const double delta = margin.to_double();

  // log of sum_nu f(p^nu) prod_i p^{-sigma_i nu_i}, with nu restricted to
  // |nu|_inf <= B and delta |nu|_1 log2 p <= bits.
  auto log_local = [&](std::uint64_t p, mpfr_prec_t wp) -> Real {
    const double lp = std::log2(static_cast<double>(p));
    const int l1_cap = static_cast<int>(std::ceil((static_cast<double>(wp) + 64) / (delta * lp))) + 1;
    const int cap = std::min(exponent_bound, l1_cap);
    const Real logp = log(Real(static_cast<long>(p), wp));
    std::vector<std::vector<Real>> xpow(n);
    for (int i = 0; i < n; ++i) {
      Real x = exp(-(sigma[i] * logp));
      mpfr_prec_round(x.get(), wp, MPFR_RNDN);
      xpow[i].push_back(Real(1, wp));
      for (int k = 1; k <= cap; ++k) xpow[i].push_back(xpow[i].back() * x);
    }
    std::vector<Real> ppow{Real(1, wp)};
    for (int k = 1; k <= cap * n; ++k) ppow.push_back(ppow.back() * static_cast<long>(p));
    std::vector<int> nu(n, 0);
    Real total(0, wp);
    std::function<void(int, int, const Real&)> visit = [&](int pos, int l1, const Real& weight) {
      if (pos == n) {
        if (l1 == 0) {
          total += weight;
          return;
        }
        int mx = *std::max_element(nu.begin(), nu.end());
        int mn = *std::min_element(nu.begin(), nu.end());
        switch (family.kind) {
          case FamilyKind::inv_lcm:
            total += weight / ppow[mx];
            break;
          case FamilyKind::inv_lcm_coprime:
            if (mn == 0) total += weight / ppow[mx];
            break;
          case FamilyKind::prod_over_lcm:
            total += weight * ppow[l1 - mx];
            break;
          case FamilyKind::cyclic:
            total += weight * Real(local_cn(ExponentVector(nu), p), wp);
            break;
          case FamilyKind::custom: {
            Rational v = local_factor(family, ExponentVector(nu), p);
            if (v != 0) total += weight * Real(v, wp);
            break;
          }
        }
        return;
      }
      for (int v = 0; v <= cap && l1 + v <= l1_cap; ++v) {
        nu[pos] = v;
        visit(pos + 1, l1 + v, weight * xpow[pos][v]);
      }
      nu[pos] = 0;
    };
    visit(0, 0, Real(1, wp));
    return log(total);
  };

  const auto primes = sieve_primes(prime_bound);
  std::vector<Real> logs(primes.size(), Real(work));
  parallel_for(primes.size(), threads, [&](std::size_t i) { logs[i] = log_local(primes[i], work); });
  MultipleZetaResult out;
  out.value = round_to(exp(sum_in_order(logs, work)), prec);
  out.margin = round_to(margin, prec);

  // Dyadic windows (P, 2P] and (2P, 4P] at low precision.
  const auto window = sieve_primes(prime_bound * 4);
  const auto first = std::upper_bound(window.begin(), window.end(), prime_bound);
  const std::size_t count = static_cast<std::size_t>(window.end() - first);
  std::vector<double> wl(count);
  parallel_for(count, threads, [&](std::size_t i) { wl[i] = std::fabs(log_local(first[i], 64).to_double()); });
  double w1 = 0, w2 = 0;
  for (std::size_t i = 0; i < count; ++i) (first[i] <= 2 * prime_bound ? w1 : w2) += wl[i];
  const double ratio = w1 > 0 ? w2 / w1 : 0;
  out.tail_estimate = Real(ratio < 1 ? w1 / (1 - ratio) : HUGE_VAL, 64);
  return out;
}

}  // namespace mzeta
