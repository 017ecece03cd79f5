#include "mzeta/sum.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "mzeta/arith.hpp"
#include "mzeta/parallel.hpp"

namespace mzeta {

namespace {

using u128 = unsigned __int128;

struct Neumaier {
  double sum = 0;
  double comp = 0;
  void add(double v) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

enum class ValueKind { integer, reciprocal, generic };

ValueKind value_kind(FamilyKind k) {
  switch (k) {
    case FamilyKind::cyclic:
    case FamilyKind::prod_over_lcm:
      return ValueKind::integer;
    case FamilyKind::inv_lcm:
    case FamilyKind::inv_lcm_coprime:
      return ValueKind::reciprocal;
    case FamilyKind::custom:
      break;
  }
  return ValueKind::generic;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("tuple value exceeds 64 bits");
  return out;
}

std::uint64_t upow(std::uint64_t p, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r = checked_mul(r, p);
  return r;
}

// Factorizations of 1..x stored contiguously.
class FactorTable {
 public:
  explicit FactorTable(std::uint64_t x) : offsets_(x + 2, 0) {
    FactorizationTable table(static_cast<std::uint32_t>(std::max<std::uint64_t>(x, 2)));
    std::array<PrimePower, FactorizationTable::kMaxDistinctPrimes> buf;
    for (std::uint64_t m = 1; m <= x; ++m) {
      int k = table.factorize_into(static_cast<std::uint32_t>(m), buf);
      for (int i = 0; i < k; ++i) {
        primes_.push_back(static_cast<std::uint32_t>(buf[i].prime));
        exps_.push_back(static_cast<std::uint8_t>(buf[i].exponent));
      }
      offsets_[m + 1] = static_cast<std::uint32_t>(primes_.size());
    }
  }
  std::uint32_t begin(std::uint64_t m) const { return offsets_[m]; }
  std::uint32_t end(std::uint64_t m) const { return offsets_[m + 1]; }
  std::uint32_t prime(std::uint32_t i) const { return primes_[i]; }
  int exponent(std::uint32_t i) const { return exps_[i]; }

 private:
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> primes_;
  std::vector<std::uint8_t> exps_;
};

constexpr int kMaxDim = 16;

class Kernel {
 public:
  Kernel(const FamilySpec& family, SumStrategy strategy, std::uint64_t x)
      : family_(family), strategy_(strategy), kind_(value_kind(family.kind)) {
    if (strategy == SumStrategy::sieve || kind_ == ValueKind::generic) factors_.emplace(x);
    if (kind_ == ValueKind::generic) table_.emplace(static_cast<std::uint32_t>(std::max<std::uint64_t>(x, 2)));
  }

  ValueKind kind() const { return kind_; }

  std::uint64_t integer_value(const std::uint64_t* m, int n) const {
    if (strategy_ == SumStrategy::direct) {
      if (family_.kind == FamilyKind::cyclic) {
        BigInt c = oracle_cyclic_count(std::span<const std::uint64_t>(m, n));
        return c.get_ui();
      }
      std::uint64_t l = lcm_direct(m, n);
      u128 prod = 1;
      for (int i = 0; i < n; ++i) prod *= m[i];
      return static_cast<std::uint64_t>(prod / l);
    }
    std::uint64_t value = 1;
    merge(m, n, [&](std::uint64_t p, const int* nu) {
      if (family_.kind == FamilyKind::cyclic) {
        value = checked_mul(value, local_cn_u64(std::span<const int>(nu, n), p));
      } else {
        int sum = 0, mx = 0;
        for (int i = 0; i < n; ++i) {
          sum += nu[i];
          mx = std::max(mx, nu[i]);
        }
        value = checked_mul(value, upow(p, sum - mx));
      }
      return true;
    });
    return value;
  }

  // lcm(m) for the reciprocal families; 0 when f(m) = 0.  With
  // respect_coprime false the coprimality condition is ignored.
  std::uint64_t denominator(const std::uint64_t* m, int n, bool respect_coprime) const {
    const bool coprime = respect_coprime && family_.kind == FamilyKind::inv_lcm_coprime;
    if (strategy_ == SumStrategy::direct) {
      if (coprime) {
        std::uint64_t g = 0;
        for (int i = 0; i < n; ++i) g = std::gcd(g, m[i]);
        if (g > 1) return 0;
      }
      return lcm_direct(m, n);
    }
    std::uint64_t l = 1;
    bool zero = false;
    merge(m, n, [&](std::uint64_t p, const int* nu) {
      int mx = 0, mn = nu[0];
      for (int i = 0; i < n; ++i) {
        mx = std::max(mx, nu[i]);
        mn = std::min(mn, nu[i]);
      }
      if (coprime && mn > 0) {
        zero = true;
        return false;
      }
      l = checked_mul(l, upow(p, mx));
      return true;
    });
    return zero ? 0 : l;
  }

  Rational generic_value(const std::uint64_t* m, int n) const {
    return eval_family(family_, std::span<const std::uint64_t>(m, n), *table_);
  }

 private:
  static std::uint64_t lcm_direct(const std::uint64_t* m, int n) {
    std::uint64_t l = 1;
    for (int i = 0; i < n; ++i) l = checked_mul(l / std::gcd(l, m[i]), m[i]);
    return l;
  }

  // Calls visit(p, nu) for each prime dividing some m_i, in increasing order;
  // nu holds the exponent of p in every coordinate.  Stops when visit returns false.
  template <class Visit>
  void merge(const std::uint64_t* m, int n, Visit&& visit) const {
    std::uint32_t pos[kMaxDim], end[kMaxDim];
    for (int i = 0; i < n; ++i) {
      pos[i] = factors_->begin(m[i]);
      end[i] = factors_->end(m[i]);
    }
    int nu[kMaxDim];
    while (true) {
      std::uint32_t p = UINT32_MAX;
      for (int i = 0; i < n; ++i) {
        if (pos[i] < end[i]) p = std::min(p, factors_->prime(pos[i]));
      }
      if (p == UINT32_MAX) return;
      for (int i = 0; i < n; ++i) {
        if (pos[i] < end[i] && factors_->prime(pos[i]) == p) {
          nu[i] = factors_->exponent(pos[i]++);
        } else {
          nu[i] = 0;
        }
      }
      if (!visit(p, nu)) return;
    }
  }

  const FamilySpec& family_;
  SumStrategy strategy_;
  ValueKind kind_;
  std::optional<FactorTable> factors_;
  std::optional<FactorizationTable> table_;
};

// Lattice region: box [1, x]^n or the discrete Holder ball.
class Region {
 public:
  Region(int n, std::uint64_t x, const Norm& norm) : n_(n), x_(x), norm_(norm) {
    if (norm.infinite) return;
    const BigInt& num = norm.d.get_num();
    const BigInt& den = norm.d.get_den();
    if (!num.fits_ulong_p() || !den.fits_ulong_p()) throw std::invalid_argument("Holder exponent too large");
    a_ = num.get_ui();
    b_ = den.get_ui();
    if (b_ == 1) {
      powers_.reserve(x + 1);
      for (std::uint64_t m = 0; m <= x; ++m) powers_.push_back(pow_int(BigInt(static_cast<unsigned long>(m)), a_));
    } else {
      factors_.emplace(std::max<std::uint64_t>(x, 2));
      root_lo_.reserve(x + 1);
      root_hi_.reserve(x + 1);
      for (std::uint64_t m = 0; m <= x; ++m) {
        root_lo_.emplace_back(kFastPrecision);
        root_hi_.emplace_back(kFastPrecision);
        root_power(root_lo_.back().get(), m, MPFR_RNDD);
        root_power(root_hi_.back().get(), m, MPFR_RNDU);
      }
    }
  }

  // Largest m with (prefix[0..level), m, 1, ..., 1) inside; 0 when none.
  std::uint64_t bound(const std::uint64_t* prefix, int level) const {
    if (norm_.infinite) return x_;
    const int ones = n_ - level - 1;
    if (!inside(prefix, level, 1, ones)) return 0;
    std::uint64_t lo = 1, hi = x_;
    while (lo < hi) {
      std::uint64_t mid = lo + (hi - lo + 1) / 2;
      if (inside(prefix, level, mid, ones)) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    return lo;
  }

 private:
  bool inside(const std::uint64_t* prefix, int level, std::uint64_t m, int ones) const {
    if (b_ == 1) {
      BigInt s = powers_[m] + ones;
      for (int i = 0; i < level; ++i) s += powers_[prefix[i]];
      return s <= powers_[x_];
    }
    // Cached enclosures settle almost every point.
    Real lo(kFastPrecision), hi(kFastPrecision);
    mpfr_set_ui(lo.get(), ones, MPFR_RNDN);
    mpfr_set_ui(hi.get(), ones, MPFR_RNDN);
    for (int i = 0; i <= level; ++i) {
      const std::uint64_t c = i < level ? prefix[i] : m;
      mpfr_add(lo.get(), lo.get(), root_lo_[c].get(), MPFR_RNDD);
      mpfr_add(hi.get(), hi.get(), root_hi_[c].get(), MPFR_RNDU);
    }
    if (mpfr_lessequal_p(hi.get(), root_lo_[x_].get())) return true;
    if (mpfr_greater_p(lo.get(), root_hi_[x_].get())) return false;
    std::vector<std::uint64_t> coords(prefix, prefix + level);
    coords.push_back(m);
    for (int i = 0; i < ones; ++i) coords.push_back(1);
    return inside_rational(coords);
  }

  // sum m_i^{a/b} <= x^{a/b}, decided by outward-rounded intervals with
  // increasing precision; exact ties are detected through the
  // decomposition m^a = s^b r with r free of b-th powers, since b-th roots
  // of distinct such r are linearly independent over Q.
  bool inside_rational(const std::vector<std::uint64_t>& coords) const {
    bool tie_checked = false;
    for (mpfr_prec_t prec = 2 * kFastPrecision; prec <= 65536; prec *= 2) {
      mpfr_t lo, hi, term, rlo, rhi;
      mpfr_inits2(prec, lo, hi, term, rlo, rhi, static_cast<mpfr_ptr>(nullptr));
      mpfr_set_ui(lo, 0, MPFR_RNDN);
      mpfr_set_ui(hi, 0, MPFR_RNDN);
      for (auto c : coords) {
        root_power(term, c, MPFR_RNDD);
        mpfr_add(lo, lo, term, MPFR_RNDD);
        root_power(term, c, MPFR_RNDU);
        mpfr_add(hi, hi, term, MPFR_RNDU);
      }
      root_power(rlo, x_, MPFR_RNDD);
      root_power(rhi, x_, MPFR_RNDU);
      const int decided = mpfr_lessequal_p(hi, rlo) ? 1 : (mpfr_greater_p(lo, rhi) ? 0 : -1);
      mpfr_clears(lo, hi, term, rlo, rhi, static_cast<mpfr_ptr>(nullptr));
      if (decided >= 0) return decided == 1;
      if (!tie_checked) {
        if (exact_tie(coords)) return true;
        tie_checked = true;
      }
    }
    throw std::logic_error("Holder membership undecided at maximum precision");
  }

  void root_power(mpfr_t out, std::uint64_t m, mpfr_rnd_t rnd) const {
    BigInt v = pow_int(BigInt(static_cast<unsigned long>(m)), a_);
    mpfr_set_z(out, v.get_mpz_t(), rnd);
    mpfr_rootn_ui(out, out, b_, rnd);
  }

  void decompose(std::uint64_t m, BigInt& s, BigInt& r) const {
    s = 1;
    r = 1;
    for (const auto& [p, e] : factors_->factorize(m)) {
      const unsigned long total = static_cast<unsigned long>(e) * a_;
      s *= pow_int(BigInt(static_cast<unsigned long>(p)), total / b_);
      r *= pow_int(BigInt(static_cast<unsigned long>(p)), total % b_);
    }
  }

  bool exact_tie(const std::vector<std::uint64_t>& coords) const {
    std::map<BigInt, BigInt> lhs, rhs;
    BigInt s, r;
    for (auto c : coords) {
      decompose(c, s, r);
      lhs[r] += s;
    }
    decompose(x_, s, r);
    rhs[r] += s;
    return lhs == rhs;
  }

  static constexpr mpfr_prec_t kFastPrecision = 128;

  int n_;
  std::uint64_t x_;
  Norm norm_;
  unsigned long a_ = 0, b_ = 1;
  std::vector<BigInt> powers_;
  std::optional<FactorizationTable> factors_;
  std::vector<Real> root_lo_, root_hi_;
};

struct Accumulators {
  explicit Accumulators(int buckets)
      : ints(buckets, 0), nums(buckets, BigInt(0)), floats(buckets), generic(buckets, Rational(0)), counts(buckets, 0) {}
  std::vector<u128> ints;
  std::vector<BigInt> nums;  // numerators over the common denominator D
  std::vector<Neumaier> floats;
  std::vector<Rational> generic;
  std::vector<std::uint64_t> counts;
};

struct Plan {
  const FamilySpec* family;
  const Kernel* kernel;
  const Region* region;
  bool exact;
  int n;
  int buckets;
  std::vector<std::uint32_t> bucket_of;  // index by coordinate value
  std::vector<BigInt> d_over_m;          // D / m for the exact reciprocal path
};

class Enumerator {
 public:
  Enumerator(const Plan& plan, Accumulators& acc) : plan_(plan), acc_(acc), inner_(plan.buckets, BigInt(0)) {}

  void run_chunk(std::uint64_t first) {
    if (plan_.n == 1) {
      inner_loop(0);
      return;
    }
    m_[0] = first;
    visit(1, plan_.bucket_of[first]);
  }

 private:
  void visit(int level, std::uint32_t bucket) {
    if (level == plan_.n - 1) {
      inner_loop(bucket);
      return;
    }
    const std::uint64_t hi = plan_.region->bound(m_, level);
    for (std::uint64_t v = 1; v <= hi; ++v) {
      m_[level] = v;
      visit(level + 1, std::max(bucket, plan_.bucket_of[v]));
    }
  }

  void inner_loop(std::uint32_t prefix_bucket) {
    const int n = plan_.n;
    const int last = n - 1;
    const std::uint64_t hi = plan_.region->bound(m_, last);
    const Kernel& k = *plan_.kernel;
    switch (k.kind()) {
      case ValueKind::integer:
        for (std::uint64_t v = 1; v <= hi; ++v) {
          m_[last] = v;
          const std::uint32_t b = std::max(prefix_bucket, plan_.bucket_of[v]);
          acc_.ints[b] += k.integer_value(m_, n);
          ++acc_.counts[b];
        }
        return;
      case ValueKind::reciprocal:
        if (plan_.exact) {
          // D / lcm(l', v) = (D / v) gcd(l', v) / l' with l' the prefix lcm.
          const std::uint64_t lp = last == 0 ? 1 : k.denominator(m_, last, false);
          for (auto& z : inner_) z = 0;
          for (std::uint64_t v = 1; v <= hi; ++v) {
            m_[last] = v;
            const std::uint32_t b = std::max(prefix_bucket, plan_.bucket_of[v]);
            ++acc_.counts[b];
            const std::uint64_t l = k.denominator(m_, n, true);
            if (l == 0) continue;
            const u128 scaled = static_cast<u128>(lp) * v;
            if (scaled % l != 0) throw std::logic_error("lcm inconsistent with its prefix");
            mpz_addmul_ui(inner_[b].get_mpz_t(), plan_.d_over_m[v].get_mpz_t(),
                          static_cast<unsigned long>(scaled / l));
          }
          for (int b = 0; b < plan_.buckets; ++b) {
            if (inner_[b] == 0) continue;
            mpz_divexact_ui(inner_[b].get_mpz_t(), inner_[b].get_mpz_t(), static_cast<unsigned long>(lp));
            acc_.nums[b] += inner_[b];
          }
        } else {
          for (std::uint64_t v = 1; v <= hi; ++v) {
            m_[last] = v;
            const std::uint32_t b = std::max(prefix_bucket, plan_.bucket_of[v]);
            ++acc_.counts[b];
            const std::uint64_t l = k.denominator(m_, n, true);
            if (l != 0) acc_.floats[b].add(1.0 / static_cast<double>(l));
          }
        }
        return;
      case ValueKind::generic:
        for (std::uint64_t v = 1; v <= hi; ++v) {
          m_[last] = v;
          const std::uint32_t b = std::max(prefix_bucket, plan_.bucket_of[v]);
          ++acc_.counts[b];
          Rational value = k.generic_value(m_, n);
          if (plan_.exact) {
            acc_.generic[b] += value;
          } else {
            acc_.floats[b].add(value.get_d());
          }
        }
        return;
    }
  }

  const Plan& plan_;
  Accumulators& acc_;
  std::vector<BigInt> inner_;
  std::uint64_t m_[kMaxDim] = {};
};

double nearest_double(const Rational& q) { return Real(q, 53).to_double(); }

void validate(const SumRequest& r) {
  if (r.x < 1) throw std::invalid_argument("x must be >= 1");
  if (r.family.n < 1 || r.family.n > kMaxDim) throw std::invalid_argument("dimension out of range");
  if (!r.norm.infinite && r.norm.d < 1) throw std::invalid_argument("Holder exponent must be >= 1");
  if (r.x > 0xffffffffULL) throw std::invalid_argument("x must be below 2^32");
  if (r.family.kind == FamilyKind::custom && r.strategy == SumStrategy::direct) {
    throw ConfigurationError("custom families support only the sieve strategy");
  }
  const double cost = estimated_cost(r.family.n, r.x, r.norm);
  if (cost > r.work_budget) throw BudgetExceeded(cost, r.work_budget);
}

std::vector<SumResult> execute(const SumRequest& request, std::span<const std::uint64_t> ladder) {
  const auto start = std::chrono::steady_clock::now();
  validate(request);
  const FamilySpec& family = request.family;
  const int n = family.n;
  const std::uint64_t x = request.x;
  const NumericMode mode = resolve_mode(family, x, request.mode);
  const bool exact = mode == NumericMode::exact;

  Kernel kernel(family, request.strategy, x);
  Region region(n, x, request.norm);
  Plan plan{&family, &kernel, &region, exact, n, static_cast<int>(ladder.size()), {}, {}};
  plan.bucket_of.assign(x + 1, 0);
  {
    std::size_t k = 0;
    for (std::uint64_t v = 1; v <= x; ++v) {
      while (ladder[k] < v) ++k;
      plan.bucket_of[v] = static_cast<std::uint32_t>(k);
    }
  }
  BigInt denom = 1;
  if (exact && kernel.kind() == ValueKind::reciprocal) {
    for (std::uint64_t v = 2; v <= x; ++v) denom = lcm(denom, BigInt(static_cast<unsigned long>(v)));
    plan.d_over_m.resize(x + 1);
    for (std::uint64_t v = 1; v <= x; ++v) plan.d_over_m[v] = denom / static_cast<unsigned long>(v);
  }

  const std::uint64_t chunks = n == 1 ? 1 : region.bound(nullptr, 0);
  std::vector<Accumulators> parts(chunks, Accumulators(plan.buckets));
  parallel_for(chunks, request.threads, [&](std::size_t i) {
    Enumerator e(plan, parts[i]);
    e.run_chunk(i + 1);
  });

  // Fixed-order reduction over chunks, then cumulative over buckets.
  std::vector<SumResult> out;
  u128 ints = 0;
  BigInt nums = 0;
  Neumaier floats;
  Rational generic = 0;
  std::uint64_t count = 0;
  for (int b = 0; b < plan.buckets; ++b) {
    for (const auto& part : parts) {
      ints += part.ints[b];
      nums += part.nums[b];
      floats.add(part.floats[b].value());
      generic += part.generic[b];
      count += part.counts[b];
    }
    SumResult r;
    r.strategy = request.strategy;
    r.mode = mode;
    r.exact = exact;
    r.tuple_count = count;
    if (exact) {
      switch (kernel.kind()) {
        case ValueKind::integer: {
          BigInt hi = static_cast<unsigned long>(static_cast<std::uint64_t>(ints >> 64));
          BigInt lo = static_cast<unsigned long>(static_cast<std::uint64_t>(ints));
          r.exact_value = Rational((hi << 64) + lo);
          break;
        }
        case ValueKind::reciprocal:
          r.exact_value = Rational(nums, denom);
          r.exact_value.canonicalize();
          break;
        case ValueKind::generic:
          r.exact_value = generic;
          break;
      }
      r.float_value = nearest_double(r.exact_value);
    } else {
      r.float_value = floats.value();
    }
    out.push_back(std::move(r));
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& r : out) r.elapsed_seconds = elapsed;
  return out;
}

}  // namespace

BudgetExceeded::BudgetExceeded(double estimated, double budget)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "estimated cost " << estimated << " tuple evaluations exceeds the work budget " << budget;
        return os.str();
      }()),
      estimated_(estimated),
      budget_(budget) {}

std::string_view strategy_name(SumStrategy s) { return s == SumStrategy::direct ? "direct" : "sieve"; }

SumStrategy parse_strategy(std::string_view name) {
  if (name == "direct") return SumStrategy::direct;
  if (name == "sieve") return SumStrategy::sieve;
  throw std::invalid_argument("unknown strategy: " + std::string(name));
}

std::string_view mode_name(NumericMode m) {
  switch (m) {
    case NumericMode::automatic: return "auto";
    case NumericMode::exact: return "exact";
    case NumericMode::floating: return "float";
  }
  return "auto";
}

NumericMode parse_mode(std::string_view name) {
  if (name == "auto") return NumericMode::automatic;
  if (name == "exact") return NumericMode::exact;
  if (name == "float") return NumericMode::floating;
  throw std::invalid_argument("unknown numeric mode: " + std::string(name));
}

Norm Norm::holder(const Rational& d) {
  if (d < 1) throw std::invalid_argument("Holder exponent must be >= 1");
  Norm out;
  out.infinite = false;
  out.d = d;
  return out;
}

std::string SumResult::value_string() const {
  if (exact) return to_fraction_string(exact_value);
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, float_value);
  return std::string(buf, res.ptr);
}

Real SumResult::value(mpfr_prec_t prec) const { return exact ? Real(exact_value, prec) : Real(float_value, prec); }

NumericMode resolve_mode(const FamilySpec& family, std::uint64_t x, NumericMode requested) {
  if (value_kind(family.kind) == ValueKind::integer) return NumericMode::exact;
  if (requested != NumericMode::automatic) return requested;
  switch (family.n) {
    case 1: return x <= 1000000 ? NumericMode::exact : NumericMode::floating;
    case 2: return x <= 10000 ? NumericMode::exact : NumericMode::floating;
    case 3: return x <= 500 ? NumericMode::exact : NumericMode::floating;
    default: return x <= 60 ? NumericMode::exact : NumericMode::floating;
  }
}

double estimated_cost(int n, std::uint64_t x, const Norm& norm) {
  const double box = std::pow(static_cast<double>(x), n);
  if (norm.infinite) return box;
  // Volume of the unit d-ball in the positive orthant.
  const double d = norm.d.get_d();
  const double log_ratio = n * std::lgamma(1 + 1 / d) - std::lgamma(1 + n / d);
  return box * std::exp(log_ratio);
}

SumResult sum_box(const SumRequest& request) {
  SumRequest r = request;
  r.norm = Norm::sup();
  const std::uint64_t xs[] = {r.x};
  return execute(r, xs).front();
}

SumResult sum_holder(const SumRequest& request) {
  if (request.norm.infinite) throw std::invalid_argument("sum_holder needs a finite Holder exponent");
  const std::uint64_t xs[] = {request.x};
  return execute(request, xs).front();
}

SumResult run_sum(const SumRequest& request) {
  return request.norm.infinite ? sum_box(request) : sum_holder(request);
}

std::vector<SumResult> sum_box_ladder(const SumRequest& request, std::span<const std::uint64_t> xs) {
  if (xs.empty()) throw std::invalid_argument("empty ladder");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] <= xs[i - 1]) throw std::invalid_argument("ladder must be strictly increasing");
  }
  SumRequest r = request;
  r.norm = Norm::sup();
  r.x = xs.back();
  return execute(r, xs);
}

Real main_term_prediction(const FamilySpec& family, const Real& x, const Real& C, const Real& K) {
  const mpfr_prec_t prec = std::max({x.precision(), C.precision(), K.precision()});
  if (!(x > Real(1, prec))) throw std::domain_error("main term needs x > 1");
  const Real lx = log(x);
  Real out = C * K * exp(Real(family.c_norm(), prec) * lx);
  if (family.rho != 0) out *= pow(lx, static_cast<long>(family.rho));
  return out;
}

}  // namespace mzeta
