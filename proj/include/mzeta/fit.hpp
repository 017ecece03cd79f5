#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mzeta/family.hpp"
#include "mzeta/rational.hpp"
#include "mzeta/real.hpp"
#include "mzeta/sum.hpp"

namespace mzeta {

struct FitSample {
  std::uint64_t x = 0;
  Real value;
};

// Least-squares model S(x) = x^{c_norm} (a_0 + a_1 ln x + ... + a_rho (ln x)^rho).
struct FitReport {
  std::string family;
  std::string norm = "inf";
  int rho = 0;
  Rational c_norm;
  std::vector<FitSample> samples;  // ascending x
  std::vector<Real> coefficients;  // a_0 .. a_rho
  Real predicted;                  // C K, zero until attached
  Real deviation;                  // |a_rho - C K| / (C K)
  Real max_residual;               // max |S - model| / |S| over the samples

  const Real& leading() const { return coefficients.back(); }
  Real model(const Real& x) const;
  // Main term C K x^{c_norm} (ln x)^rho at x.
  Real main_term(const Real& x) const;
};

bool operator==(const FitReport& a, const FitReport& b);

// Throws std::invalid_argument for fewer than rho + 2 samples, x <= 1,
// duplicate x or a rank-deficient design.
FitReport fit_log_poly(std::span<const FitSample> samples, int rho, const Rational& c_norm,
                       mpfr_prec_t prec = kDefaultPrecision);

// Sets predicted and deviation.
void attach_prediction(FitReport& report, const Real& leading_constant);

nlohmann::json to_json(const FitReport& report);
FitReport fit_report_from_json(const nlohmann::json& j);

struct FamilyFit {
  FamilySpec family;
  std::vector<std::uint64_t> ladder;
  Norm norm;
  NumericMode mode = NumericMode::floating;
  SumStrategy strategy = SumStrategy::sieve;
  std::uint64_t prime_bound = 1000000;
  int exponent_bound = 40;
  mpfr_prec_t prec = kDefaultPrecision;
  unsigned threads = 0;
  double work_budget = kDefaultWorkBudget;
};

// Sums along the ladder, fits with the family's rho and c, and attaches C K
// from the Euler product and the geometric constant of the norm.
FitReport fit_family(const FamilyFit& config);

}  // namespace mzeta
