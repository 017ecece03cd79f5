#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mzeta/family.hpp"
#include "mzeta/rational.hpp"
#include "mzeta/real.hpp"

namespace mzeta {

inline constexpr double kDefaultWorkBudget = 2e9;

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(double estimated, double budget);
  double estimated_cost() const { return estimated_; }
  double budget() const { return budget_; }

 private:
  double estimated_;
  double budget_;
};

// direct: per-tuple lcm/gcd arithmetic (and element-order counting for
// cyclic).  sieve: coordinate factorizations merged into prime exponent
// vectors, then local factors.
enum class SumStrategy { direct, sieve };
enum class NumericMode { automatic, exact, floating };

std::string_view strategy_name(SumStrategy s);
SumStrategy parse_strategy(std::string_view name);
std::string_view mode_name(NumericMode m);
NumericMode parse_mode(std::string_view name);

// The sup norm, or the Holder norm (m_1^d + ... + m_n^d)^{1/d} with rational d >= 1.
struct Norm {
  bool infinite = true;
  Rational d;

  static Norm sup() { return {}; }
  static Norm holder(const Rational& d);
};

struct SumRequest {
  FamilySpec family;
  std::uint64_t x = 1;
  Norm norm;
  SumStrategy strategy = SumStrategy::sieve;
  NumericMode mode = NumericMode::automatic;
  unsigned threads = 0;
  double work_budget = kDefaultWorkBudget;
};

struct SumResult {
  bool exact = true;
  Rational exact_value;     // meaningful when exact
  double float_value = 0;   // always set; nearest double to the exact value in exact mode
  std::uint64_t tuple_count = 0;
  double elapsed_seconds = 0;
  SumStrategy strategy = SumStrategy::sieve;
  NumericMode mode = NumericMode::exact;  // the mode actually used

  // "n/d" in exact mode, shortest round-trip decimal otherwise.
  std::string value_string() const;
  Real value(mpfr_prec_t prec = kDefaultPrecision) const;
};

// Mode chosen by NumericMode::automatic.  Integer-valued families are always exact.
NumericMode resolve_mode(const FamilySpec& family, std::uint64_t x, NumericMode requested);

// Estimated number of lattice points visited.
double estimated_cost(int n, std::uint64_t x, const Norm& norm);

SumResult sum_box(const SumRequest& request);
SumResult sum_holder(const SumRequest& request);
// Dispatches on request.norm.
SumResult run_sum(const SumRequest& request);

// Box sums for every x in `xs` (strictly increasing) from a single pass over
// the largest box.  Each result equals sum_box at that x.
std::vector<SumResult> sum_box_ladder(const SumRequest& request, std::span<const std::uint64_t> xs);

// C K x^{|c|_1} (ln x)^rho with the family's c and rho.
Real main_term_prediction(const FamilySpec& family, const Real& x, const Real& C, const Real& K);

}  // namespace mzeta
