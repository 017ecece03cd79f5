#include "mzeta/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "mzeta/arith.hpp"
#include "mzeta/euler.hpp"
#include "mzeta/family.hpp"
#include "mzeta/fit.hpp"
#include "mzeta/volume.hpp"

namespace mzeta {

namespace {

using nlohmann::json;

constexpr mpfr_prec_t kPrec = 256;
constexpr std::uint64_t kMcSeed = 20240601;
constexpr std::uint64_t kMcSamples = 1000000;
constexpr double kMcLogX = 1e6;

struct Context {
  unsigned threads = 0;
  double tolerance = 0;
};

struct Measurement {
  bool passed = false;
  std::string measured;
  std::string expected;
  std::string detail;
};

using CheckFn = std::function<Measurement(const Context&)>;

struct Entry {
  std::string description;
  double tolerance;
  CheckFn run;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string fmt(const Real& v) { return v.to_string(25); }

template <class Visit>
void for_each_tuple(int n, std::uint64_t top, Visit&& visit) {
  std::vector<std::uint64_t> m(n, 1);
  while (true) {
    visit(m);
    int i = n - 1;
    while (i >= 0 && m[i] == top) m[i--] = 1;
    if (i < 0) return;
    ++m[i];
  }
}

template <class Visit>
void for_each_exponent(int n, int top, Visit&& visit) {
  std::vector<int> v(n, 0);
  while (true) {
    visit(ExponentVector(v));
    int i = 0;
    while (i < n && v[i] == top) v[i++] = 0;
    if (i == n) return;
    ++v[i];
  }
}

Measurement count_result(std::uint64_t mismatches, std::uint64_t cases) {
  return {mismatches == 0, std::to_string(mismatches) + " mismatches", "0 mismatches",
          std::to_string(cases) + " cases"};
}

Measurement check_eval_family(const Context&) {
  FactorizationTable table(60);
  std::uint64_t mismatches = 0, cases = 0;
  for (const char* name : {"cyclic", "inv-lcm", "inv-lcm-coprime", "prod-over-lcm"}) {
    for (int n : {2, 3}) {
      const FamilySpec family = FamilySpec::builtin(name, n);
      for_each_tuple(n, 60, [&](const std::vector<std::uint64_t>& m) {
        ++cases;
        if (eval_family(family, m, table) != oracle_direct(family, m)) ++mismatches;
      });
    }
  }
  return count_result(mismatches, cases);
}

Measurement check_cyclic_count(const Context&) {
  FactorizationTable table(36);
  std::uint64_t mismatches = 0, cases = 0;
  for (int n : {1, 2, 3}) {
    const FamilySpec family = FamilySpec::builtin("cyclic", n);
    for_each_tuple(n, 36, [&](const std::vector<std::uint64_t>& m) {
      ++cases;
      if (eval_family(family, m, table) != Rational(oracle_cyclic_count(m))) ++mismatches;
    });
  }
  return count_result(mismatches, cases);
}

Measurement check_cyclic_forms(const Context&) {
  std::uint64_t mismatches = 0, cases = 0;
  for (int n = 1; n <= 4; ++n) {
    for_each_exponent(n, 6, [&](const ExponentVector& nu) {
      for (std::uint64_t p : {2, 3, 5, 7}) {
        ++cases;
        if (local_cn(nu, p, CnMethod::toth) != local_cn(nu, p, CnMethod::closed)) ++mismatches;
      }
    });
  }
  return count_result(mismatches, cases);
}

Measurement check_cyclic_bound(const Context&) {
  std::uint64_t violations = 0, cases = 0;
  for (int n = 1; n <= 4; ++n) {
    for_each_exponent(n, 6, [&](const ExponentVector& nu) {
      for (std::uint64_t p : {2, 3, 5, 7}) {
        ++cases;
        // p |c - g1 p^e| <= 2 |nu|_1 p^e with e = |nu|_1 - |nu|_inf.
        const BigInt pe = pow_int(BigInt(static_cast<unsigned long>(p)), nu.l1() - nu.max());
        const BigInt c = local_cn(nu, p, CnMethod::closed);
        const BigInt lhs = abs(c - BigInt(g1(nu)) * pe) * static_cast<unsigned long>(p);
        if (lhs > BigInt(2 * nu.l1()) * pe) ++violations;
      }
    });
  }
  Measurement m = count_result(violations, cases);
  m.measured = std::to_string(violations) + " violations";
  m.expected = "0 violations";
  return m;
}

Measurement real_check(const Real& measured, const Real& expected, double tolerance, const std::string& detail = {}) {
  const Real gap = abs(measured - expected);
  return {gap < Real(tolerance, kPrec), fmt(measured), fmt(expected), detail + (detail.empty() ? "" : "; ") + "gap " + gap.to_string(3)};
}

CheckFn euler_check(const char* family, int n, std::function<Real()> expected) {
  return [=](const Context& ctx) {
    const auto r = euler_constant(FamilySpec::builtin(family, n), kDefaultPrimeBound, kDefaultExponentBound, kPrec,
                                  ctx.threads);
    return real_check(r.value, expected(), ctx.tolerance, "tail estimate " + r.tail_estimate.to_string(3));
  };
}

Measurement check_euler_product_n3(const Context& ctx) {
  const auto r = euler_constant(FamilySpec::builtin("inv-lcm", 3), kDefaultPrimeBound, kDefaultExponentBound, kPrec,
                                ctx.threads);
  Real product(1L, kPrec);
  for (std::uint64_t p : sieve_primes(kDefaultPrimeBound)) {
    const Rational t(1, static_cast<unsigned long>(p));
    const Rational t2 = t * t, t3 = t2 * t;
    const Rational factor = 1 - 9 * t2 + 16 * t3 - 9 * t2 * t2 + t3 * t3;
    product *= Real(factor, kPrec);
  }
  return real_check(r.value, product, ctx.tolerance);
}

CheckFn volume_check(const char* family, int n, Rational expected) {
  return [=](const Context&) {
    const auto k = leading_constant(FamilySpec::builtin(family, n)).K;
    return Measurement{k == expected, to_fraction_string(k), to_fraction_string(expected), "exact equality"};
  };
}

Measurement check_polytope_volume(const Context&) {
  std::ostringstream measured, detail;
  bool ok = true;
  for (const char* name : {"inv-lcm", "inv-lcm-coprime"}) {
    for (int n : {2, 3}) {
      const FamilySpec family = FamilySpec::builtin(name, n);
      const Rational vol = polytope_volume(build_polytope(family).polytope);
      const Rational k = leading_constant(family).K;
      ok = ok && vol == k;
      measured << name << n << "=" << to_fraction_string(vol) << " ";
      detail << name << n << " K=" << to_fraction_string(k) << " ";
    }
  }
  return {ok, measured.str(), "volume equals K for every c = 0 family", detail.str()};
}

CheckFn integral_check(const char* family, LogPowerExpr expected) {
  return [=](const Context&) {
    const LogPowerExpr got = integral_In_symbolic(FamilySpec::builtin(family, 2));
    return Measurement{got == expected, got.to_string(), expected.to_string(), "term-for-term equality"};
  };
}

LogPowerExpr cyclic2_integral() {
  LogPowerExpr e;
  e.add_term(Rational(1, 3), 2, 3);
  e.add_term(-1, 2, 2);
  e.add_term(1, 2, 1);
  e.add_term(-2, 1, 1);
  e.add_term(Rational(1, 2), 2, 0);
  e.add_term(Rational(-1, 2), 0, 0);
  return e;
}

LogPowerExpr prod2_integral() {
  LogPowerExpr e;
  e.add_term(1, 2, 1);
  e.add_term(Rational(-3, 2), 2, 0);
  e.add_term(2, 1, 0);
  e.add_term(Rational(-1, 2), 0, 0);
  return e;
}

CheckFn mc_check(const char* family, int n) {
  return [=](const Context& ctx) {
    const FamilySpec spec = FamilySpec::builtin(family, n);
    const double exact = leading_constant(spec).K.get_d();
    const auto mc = mc_estimate_K(spec, kMcLogX, kMcSamples, kMcSeed, ctx.threads);
    // A polytope filling its bounding box gives a zero-variance estimator.
    const double gap = std::fabs(mc.estimate - exact);
    const double z = mc.std_error > 0 ? gap / mc.std_error : (gap == 0 ? 0.0 : INFINITY);
    return Measurement{z <= ctx.tolerance, fmt(mc.estimate), fmt(exact),
                       "std error " + fmt(mc.std_error) + "; z " + fmt(z)};
  };
}

CheckFn holder_check(double d, std::function<Real()> expected) {
  return [=](const Context& ctx) {
    const Real got = holder_constant_closed(FamilySpec::builtin("cyclic", 2), Real(d, kPrec));
    return real_check(got, expected(), ctx.tolerance);
  };
}

std::vector<std::uint64_t> ladder_n2() { return {1024, 2048, 4096, 8192, 16384}; }

CheckFn fit_check(const char* family) {
  return [=](const Context& ctx) {
    FamilyFit config;
    config.family = FamilySpec::builtin(family, 2);
    config.ladder = ladder_n2();
    config.threads = ctx.threads;
    config.prec = kPrec;
    const FitReport r = fit_family(config);
    return Measurement{r.deviation < Real(ctx.tolerance, kPrec), fmt(r.leading()), fmt(r.predicted),
                       "relative deviation " + r.deviation.to_string(6) + "; max residual " +
                           r.max_residual.to_string(3)};
  };
}

// S_3(x) / (C K (ln x)^rho) along the ladder: within [0.3, tolerance] and
// approaching 1 monotonically.
Measurement check_fit_s3(const Context& ctx) {
  constexpr double kRatioFloor = 0.3;
  const FamilySpec family = FamilySpec::builtin("inv-lcm", 3);
  const std::uint64_t ladder[] = {64, 128, 256, 512};
  SumRequest request;
  request.family = family;
  request.mode = NumericMode::floating;
  request.threads = ctx.threads;
  const auto sums = sum_box_ladder(request, ladder);
  const Real c = euler_constant(family, kDefaultPrimeBound, kDefaultExponentBound, kPrec, ctx.threads).value;
  const Real ck = c * Real(leading_constant(family).K, kPrec);
  std::ostringstream measured;
  bool ok = true;
  double prev_gap = INFINITY;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    const Real lx = log(Real(static_cast<long>(ladder[i]), kPrec));
    const double ratio = (sums[i].value(kPrec) / (ck * pow(lx, static_cast<long>(family.rho)))).to_double();
    const double gap = std::fabs(std::log(ratio));
    ok = ok && ratio >= kRatioFloor && ratio <= ctx.tolerance && gap < prev_gap;
    prev_gap = gap;
    measured << (i ? " " : "") << fmt(ratio);
  }
  return {ok, measured.str(), "ratios in [" + fmt(kRatioFloor) + ", " + fmt(ctx.tolerance) + "], monotone toward 1",
          "x = 64, 128, 256, 512"};
}

const std::map<std::string, Entry, std::less<>>& registry() {
  static const std::map<std::string, Entry, std::less<>> entries = [] {
    std::map<std::string, Entry, std::less<>> e;
    e["oracle-eval-family"] = {"eval_family equals the direct definition for max m <= 60, n = 2, 3", 0,
                               check_eval_family};
    e["oracle-cyclic-count"] = {"cyclic eval_family equals element-order counting for max m <= 36, n <= 3", 0,
                                check_cyclic_count};
    e["cyclic-local-forms"] = {"Toth and closed local cyclic counts agree for |nu|_inf <= 6, n <= 4", 0,
                               check_cyclic_forms};
    e["cyclic-local-bound"] = {"|c - g1 p^e| <= 2 |nu|_1 p^(e-1) on the same grid", 0, check_cyclic_bound};
    e["euler-c2-cyclic"] = {"C_2(cyclic) against 36/pi^4", 1e-6, euler_check("cyclic", 2, [] {
                              const Real pi = Real::pi(kPrec);
                              return Real(36L, kPrec) / pow(pi, 4L);
                            })};
    e["euler-c2-inv-lcm"] = {"C_2(inv-lcm) against 6/pi^2", 1e-6, euler_check("inv-lcm", 2, [] {
                               const Real pi = Real::pi(kPrec);
                               return Real(6L, kPrec) / (pi * pi);
                             })};
    e["euler-c3-product"] = {"C_3(inv-lcm) against the explicit product of its local polynomial", 1e-10,
                             check_euler_product_n3};
    e["volume-s2"] = {"K_2(inv-lcm) = 1/3", 0, volume_check("inv-lcm", 2, Rational(1, 3))};
    e["volume-u2"] = {"K_2(inv-lcm-coprime) = 1", 0, volume_check("inv-lcm-coprime", 2, Rational(1))};
    e["volume-v2"] = {"K_2(prod-over-lcm) = 1", 0, volume_check("prod-over-lcm", 2, Rational(1))};
    e["volume-c2"] = {"K_2(cyclic) = 1/3", 0, volume_check("cyclic", 2, Rational(1, 3))};
    e["volume-s3"] = {"K_3(inv-lcm) = 11/3360", 0, volume_check("inv-lcm", 3, Rational(11, 3360))};
    e["volume-s3-alternate"] = {"K_3(inv-lcm) = 11/3366, a misprinted value", 0,
                                volume_check("inv-lcm", 3, Rational(11, 3366))};
    e["volume-u3"] = {"K_3(inv-lcm-coprime) = 11/480", 0, volume_check("inv-lcm-coprime", 3, Rational(11, 480))};
    e["volume-v3"] = {"K_3(prod-over-lcm) = 1/16", 0, volume_check("prod-over-lcm", 3, Rational(1, 16))};
    e["volume-c3"] = {"K_3(cyclic) = 47/16128", 0, volume_check("cyclic", 3, Rational(47, 16128))};
    e["volume-polytope"] = {"polytope_volume equals K for the c = 0 families", 0, check_polytope_volume};
    e["integral-c2"] = {"symbolic I_2 for cyclic n = 2", 0, integral_check("cyclic", cyclic2_integral())};
    e["integral-v2"] = {"symbolic I_2 for prod-over-lcm n = 2", 0, integral_check("prod-over-lcm", prod2_integral())};
    const std::pair<const char*, const char*> mc[] = {
        {"s", "inv-lcm"}, {"u", "inv-lcm-coprime"}, {"v", "prod-over-lcm"}, {"c", "cyclic"}};
    for (const auto& [tag, family] : mc) {
      for (int n : {2, 3}) {
        e[std::string("mc-") + tag + std::to_string(n)] = {
            std::string("Monte Carlo K for ") + family + " n = " + std::to_string(n) + " within tolerance standard errors",
            3, mc_check(family, n)};
      }
    }
    e["holder-c2-d2"] = {"Holder K_2(cyclic, d = 2) against pi/12", 1e-12,
                         holder_check(2, [] { return Real::pi(kPrec) / 12L; })};
    e["holder-c2-d1"] = {"Holder K_2(cyclic, d = 1) against 1/6", 1e-12,
                         holder_check(1, [] { return Real(Rational(1, 6), kPrec); })};
    e["fit-s2-leading"] = {"fitted leading coefficient of S_2 against C K, x = 2^10 .. 2^14", 0.25,
                           fit_check("inv-lcm")};
    e["fit-v2-leading"] = {"fitted leading coefficient of V_2 / x^2 against C K, x = 2^10 .. 2^14", 0.25,
                           fit_check("prod-over-lcm")};
    e["fit-g2-leading"] = {"fitted leading coefficient of G_2 / x^2 against C K, x = 2^10 .. 2^14", 0.30,
                           fit_check("cyclic")};
    e["fit-s3-ratio"] = {"S_3 / main term inside [0.3, tolerance] and monotone toward 1", 3, check_fit_s3};
    return e;
  }();
  return entries;
}

const Entry& lookup(std::string_view name) {
  auto it = registry().find(name);
  if (it == registry().end()) throw ConfigurationError("unknown check: " + std::string(name));
  return it->second;
}

}  // namespace

std::string_view status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "PASS";
    case CheckStatus::fail: return "FAIL";
    case CheckStatus::xfail: return "XFAIL";
    case CheckStatus::xpass: return "XPASS";
  }
  return "FAIL";
}

bool SuiteReport::ok() const {
  return std::none_of(outcomes.begin(), outcomes.end(), [](const CheckOutcome& o) {
    return o.status == CheckStatus::fail || o.status == CheckStatus::xpass;
  });
}

json SuiteReport::to_json(bool with_timing) const {
  json checks = json::array();
  for (const auto& o : outcomes) {
    json c = {{"check", o.check},     {"status", status_name(o.status)}, {"measured", o.measured},
              {"expected", o.expected}, {"tolerance", o.tolerance},        {"detail", o.detail}};
    if (with_timing) c["seconds"] = o.seconds;
    checks.push_back(std::move(c));
  }
  return {{"ok", ok()}, {"checks", checks}};
}

std::vector<std::string> check_names() {
  std::vector<std::string> out;
  for (const auto& [name, entry] : registry()) out.push_back(name);
  return out;
}

std::string check_description(std::string_view name) { return lookup(name).description; }

SuiteConfig parse_suite_config(const json& j) {
  if (!j.is_object() || !j.contains("checks") || !j["checks"].is_array()) {
    throw ConfigurationError("suite config needs a \"checks\" list");
  }
  SuiteConfig config;
  try {
    if (j.contains("threads")) config.threads = j["threads"].get<unsigned>();
    for (const auto& item : j["checks"]) {
      CheckConfig c;
      if (item.is_string()) {
        c.name = item.get<std::string>();
      } else {
        c.name = item.at("name").get<std::string>();
        if (item.contains("tolerance")) c.tolerance = item["tolerance"].get<double>();
        if (item.contains("expect")) {
          const auto expect = item["expect"].get<std::string>();
          if (expect != "pass" && expect != "fail") throw ConfigurationError("expect must be pass or fail");
          c.expect_failure = expect == "fail";
        }
      }
      lookup(c.name);
      config.checks.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("malformed suite config: ") + e.what());
  }
  return config;
}

SuiteConfig parse_suite_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("suite config is not valid JSON: ") + e.what());
  }
  return parse_suite_config(j);
}

SuiteConfig default_suite() {
  SuiteConfig config;
  for (const auto& name : check_names()) {
    CheckConfig c;
    c.name = name;
    c.expect_failure = name == "volume-s3-alternate";
    config.checks.push_back(std::move(c));
  }
  return config;
}

SuiteReport verify_suite(const SuiteConfig& config) {
  for (const auto& c : config.checks) lookup(c.name);
  std::vector<CheckConfig> checks = config.checks;
  std::stable_sort(checks.begin(), checks.end(),
                   [](const CheckConfig& a, const CheckConfig& b) { return a.name < b.name; });
  SuiteReport report;
  for (const auto& c : checks) {
    const Entry& entry = lookup(c.name);
    Context ctx;
    ctx.threads = config.threads;
    ctx.tolerance = c.tolerance.value_or(entry.tolerance);
    CheckOutcome outcome;
    outcome.check = c.name;
    outcome.tolerance = fmt(ctx.tolerance);
    const auto start = std::chrono::steady_clock::now();
    bool passed = false;
    try {
      Measurement m = entry.run(ctx);
      passed = m.passed;
      outcome.measured = std::move(m.measured);
      outcome.expected = std::move(m.expected);
      outcome.detail = std::move(m.detail);
    } catch (const std::exception& e) {
      outcome.detail = std::string("error: ") + e.what();
    }
    outcome.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.expect_failure) {
      outcome.status = passed ? CheckStatus::xpass : CheckStatus::xfail;
    } else {
      outcome.status = passed ? CheckStatus::pass : CheckStatus::fail;
    }
    report.outcomes.push_back(std::move(outcome));
  }
  return report;
}

}  // namespace mzeta
