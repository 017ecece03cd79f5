#include "mzeta/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mzeta/euler.hpp"
#include "mzeta/family.hpp"
#include "mzeta/fit.hpp"
#include "mzeta/sum.hpp"
#include "mzeta/suite.hpp"
#include "mzeta/volume.hpp"

namespace mzeta {

namespace {

using ojson = nlohmann::ordered_json;

// Raised for inputs that parse but are invalid for the subcommand.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A report: scalar fields plus an optional table.
struct Report {
  ojson fields = ojson::object();
  std::string rows_key;
  std::vector<ojson> rows;
};

struct Common {
  std::string family = "inv-lcm";
  int n = 2;
  std::string format = "json";
  std::string output;
  unsigned threads = 0;
  long prec = kDefaultPrecision;
  bool timing = false;
};

std::string cell(const ojson& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void render(const Report& report, const std::string& format, std::ostream& os) {
  if (format == "json") {
    ojson j = report.fields;
    if (!report.rows_key.empty()) j[report.rows_key] = report.rows;
    os << j.dump(2) << "\n";
  } else if (format == "csv") {
    // The table when there is one, otherwise a single row of the fields.
    std::vector<ojson> rows = report.rows_key.empty() ? std::vector<ojson>{report.fields} : report.rows;
    if (rows.empty()) return;
    bool first = true;
    for (const auto& [key, value] : rows.front().items()) {
      os << (first ? "" : ",") << csv_escape(key);
      first = false;
    }
    os << "\n";
    for (const auto& row : rows) {
      first = true;
      for (const auto& [key, value] : row.items()) {
        os << (first ? "" : ",") << csv_escape(cell(value));
        first = false;
      }
      os << "\n";
    }
  } else {
    std::size_t width = 0;
    for (const auto& [key, value] : report.fields.items()) width = std::max(width, key.size());
    for (const auto& [key, value] : report.fields.items()) {
      os << std::left << std::setw(static_cast<int>(width)) << key << "  " << cell(value) << "\n";
    }
    if (!report.rows_key.empty()) {
      os << report.rows_key << ":\n";
      for (const auto& row : report.rows) {
        bool first = true;
        os << "  ";
        for (const auto& [key, value] : row.items()) {
          os << (first ? "" : "  ") << key << "=" << cell(value);
          first = false;
        }
        os << "\n";
      }
    }
  }
}

std::string fraction(const Rational& q) { return to_fraction_string(q); }

std::string real_string(const Real& v) { return v.to_string(); }

FamilySpec family_of(const Common& c) {
  if (c.n < 1) throw UsageError("--n must be at least 1");
  try {
    return FamilySpec::builtin(c.family, c.n);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

mpfr_prec_t precision_of(const Common& c) {
  if (c.prec < MPFR_PREC_MIN || c.prec > 1 << 20) throw UsageError("--prec out of range");
  return static_cast<mpfr_prec_t>(c.prec);
}

Norm parse_norm(const std::string& text) {
  if (text == "inf") return Norm::sup();
  try {
    return Norm::holder(parse_rational(text));
  } catch (const std::exception& e) {
    throw UsageError("--norm must be inf or a rational d >= 1: " + std::string(e.what()));
  }
}

std::string norm_label(const Norm& norm) {
  if (norm.infinite) return "inf";
  return norm.d.get_den() == 1 ? norm.d.get_num().get_str() : fraction(norm.d);
}

void add_common(CLI::App* app, Common& c, bool with_family = true) {
  if (with_family) {
    app->add_option("--family", c.family, "cyclic, inv-lcm, inv-lcm-coprime or prod-over-lcm")
        ->capture_default_str();
    app->add_option("--n", c.n, "dimension")->capture_default_str();
  }
  app->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  app->add_option("--output", c.output, "write the report to this file instead of standard output");
  app->add_option("--threads", c.threads, "worker threads, 0 for all available")->capture_default_str();
}

// ---- sum -------------------------------------------------------------------

struct SumArgs {
  Common common;
  std::vector<std::uint64_t> x;
  std::string norm = "inf";
  std::string strategy = "sieve";
  std::string mode = "auto";
  double budget = kDefaultWorkBudget;
};

ojson sum_row(std::uint64_t x, const SumResult& r, bool timing) {
  ojson row;
  row["x"] = x;
  row["value"] = r.value_string();
  row["exact"] = r.exact;
  if (!r.exact) row["precision"] = 53;
  row["tuples"] = r.tuple_count;
  if (timing) row["seconds"] = r.elapsed_seconds;
  return row;
}

Report run_sum_command(const SumArgs& a) {
  SumRequest request;
  request.family = family_of(a.common);
  request.norm = parse_norm(a.norm);
  request.strategy = parse_strategy(a.strategy);
  request.mode = parse_mode(a.mode);
  request.threads = a.common.threads;
  request.work_budget = a.budget;
  if (a.x.empty()) throw UsageError("--x is required");
  for (std::size_t i = 1; i < a.x.size(); ++i) {
    if (a.x[i] <= a.x[i - 1]) throw UsageError("--x values must be strictly increasing");
  }
  for (auto x : a.x) {
    if (x < 1) throw UsageError("--x must be >= 1");
  }

  std::vector<SumResult> results;
  if (a.x.size() > 1 && request.norm.infinite) {
    results = sum_box_ladder(request, a.x);
  } else {
    for (auto x : a.x) {
      request.x = x;
      results.push_back(run_sum(request));
    }
  }

  Report report;
  report.fields["family"] = request.family.name;
  report.fields["n"] = request.family.n;
  report.fields["norm"] = norm_label(request.norm);
  report.fields["strategy"] = std::string(strategy_name(request.strategy));
  report.fields["mode"] = std::string(mode_name(results.front().mode));
  if (a.x.size() == 1) {
    const ojson row = sum_row(a.x.front(), results.front(), a.common.timing);
    for (const auto& [key, value] : row.items()) report.fields[key] = value;
  } else {
    report.rows_key = "results";
    for (std::size_t i = 0; i < results.size(); ++i) report.rows.push_back(sum_row(a.x[i], results[i], a.common.timing));
  }
  return report;
}

// ---- constant --------------------------------------------------------------

struct EulerArgs {
  Common common;
  std::uint64_t prime_bound = kDefaultPrimeBound;
  int exponent_bound = kDefaultExponentBound;
};

Report run_euler_command(const EulerArgs& a) {
  const FamilySpec family = family_of(a.common);
  const mpfr_prec_t prec = precision_of(a.common);
  if (a.prime_bound < 2) throw UsageError("--P must be at least 2");
  if (a.exponent_bound < 1) throw UsageError("--B must be at least 1");
  const auto r = euler_constant(family, a.prime_bound, a.exponent_bound, prec, a.common.threads);
  Report report;
  report.fields["family"] = family.name;
  report.fields["n"] = family.n;
  report.fields["value"] = real_string(r.value);
  report.fields["precision"] = prec;
  report.fields["prime_bound"] = r.prime_bound;
  report.fields["exponent_bound"] = r.exponent_bound;
  report.fields["exact_local_sums"] = r.exact_local_sums;
  report.fields["tail_estimate"] = r.tail_estimate.to_string(6);
  return report;
}

struct VolumeArgs {
  Common common;
  std::string method = "exact";
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 1;
  double log_x = 1e6;
};

Report run_volume_command(const VolumeArgs& a) {
  const FamilySpec family = family_of(a.common);
  Report report;
  report.fields["family"] = family.name;
  report.fields["n"] = family.n;
  report.fields["rho"] = family.rho;
  report.fields["c_norm"] = fraction(family.c_norm());
  if (a.method == "exact") {
    const auto k = leading_constant(family);
    report.fields["rho"] = k.rho_observed;
    report.fields["K"] = fraction(k.K);
    if (family.c_norm() == 0) report.fields["volume"] = fraction(polytope_volume(build_polytope(family).polytope));
  } else {
    if (a.log_x < 10) throw UsageError("--log-x must be at least 10");
    if (a.samples < 1000) throw UsageError("--samples must be at least 1000");
    const auto mc = mc_estimate_K(family, a.log_x, a.samples, a.seed, a.common.threads);
    report.fields["K_estimate"] = mc.estimate;
    report.fields["std_error"] = mc.std_error;
    report.fields["samples"] = mc.samples;
    report.fields["hits"] = mc.hits;
    report.fields["seed"] = a.seed;
    report.fields["log_x"] = a.log_x;
  }
  return report;
}

struct HolderArgs {
  Common common;
  std::string d = "2";
};

Report run_holder_command(const HolderArgs& a) {
  const FamilySpec family = family_of(a.common);
  const mpfr_prec_t prec = precision_of(a.common);
  Real d(prec);
  try {
    d = Real::parse(a.d, prec);
  } catch (const std::exception&) {
    throw UsageError("--d must be a decimal number");
  }
  if (d < Real(1L, prec)) throw UsageError("--d must be at least 1");
  Real value(prec);
  try {
    value = holder_constant_closed(family, d);
  } catch (const UnsupportedError& e) {
    throw UsageError(e.what());
  }
  Report report;
  report.fields["family"] = family.name;
  report.fields["n"] = family.n;
  report.fields["d"] = a.d;
  report.fields["value"] = real_string(value);
  report.fields["precision"] = prec;
  return report;
}

// ---- integral --------------------------------------------------------------

Report run_integral_command(const Common& c) {
  const FamilySpec family = family_of(c);
  const LogPowerExpr expr = integral_In_symbolic(family);
  Report report;
  report.fields["family"] = family.name;
  report.fields["n"] = family.n;
  report.fields["expression"] = expr.to_string();
  report.rows_key = "terms";
  for (const auto& t : expr.terms()) {
    ojson row;
    row["coeff"] = fraction(t.coeff);
    row["x_power"] = fraction(t.x_power);
    row["log_power"] = t.log_power;
    report.rows.push_back(row);
  }
  return report;
}

// ---- fit -------------------------------------------------------------------

struct FitArgs {
  Common common;
  std::vector<std::uint64_t> ladder;
  std::string norm = "inf";
  std::string strategy = "sieve";
  std::string mode = "float";
  std::uint64_t prime_bound = kDefaultPrimeBound;
  int exponent_bound = kDefaultExponentBound;
  double budget = kDefaultWorkBudget;
};

Report run_fit_command(const FitArgs& a) {
  FamilyFit config;
  config.family = family_of(a.common);
  config.ladder = a.ladder;
  config.norm = parse_norm(a.norm);
  config.strategy = parse_strategy(a.strategy);
  config.mode = parse_mode(a.mode);
  config.prime_bound = a.prime_bound;
  config.exponent_bound = a.exponent_bound;
  config.prec = precision_of(a.common);
  config.threads = a.common.threads;
  config.work_budget = a.budget;
  for (std::size_t i = 1; i < config.ladder.size(); ++i) {
    if (config.ladder[i] <= config.ladder[i - 1]) throw UsageError("--ladder must be strictly increasing");
  }
  if (config.ladder.size() < static_cast<std::size_t>(config.family.rho) + 2) {
    throw UsageError("--ladder needs at least rho + 2 = " + std::to_string(config.family.rho + 2) + " points");
  }
  if (config.ladder.front() < 2) throw UsageError("--ladder values must exceed 1");

  const FitReport fit = fit_family(config);
  Report report;
  report.fields["family"] = fit.family;
  report.fields["n"] = config.family.n;
  report.fields["norm"] = fit.norm;
  report.fields["rho"] = fit.rho;
  report.fields["c_norm"] = fraction(fit.c_norm);
  report.fields["precision"] = config.prec;
  ojson coeffs = ojson::array();
  for (const auto& c : fit.coefficients) coeffs.push_back(real_string(c));
  report.fields["coefficients"] = coeffs;
  report.fields["leading"] = real_string(fit.leading());
  report.fields["predicted"] = real_string(fit.predicted);
  report.fields["deviation"] = fit.deviation.to_string(10);
  report.fields["max_residual"] = fit.max_residual.to_string(6);
  report.rows_key = "ladder";
  for (const auto& s : fit.samples) {
    const Real x(static_cast<long>(s.x), config.prec);
    const Real predicted = fit.main_term(x);
    ojson row;
    row["x"] = s.x;
    row["sum"] = real_string(s.value);
    row["predicted"] = predicted.to_string(20);
    row["ratio"] = (s.value / predicted).to_string(20);
    report.rows.push_back(row);
  }
  return report;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  Common common;
  std::string config;
  std::vector<std::string> checks;
  bool list = false;
};

Report run_verify_command(const VerifyArgs& a, bool* ok) {
  Report report;
  if (a.list) {
    report.rows_key = "checks";
    for (const auto& name : check_names()) {
      ojson row;
      row["check"] = name;
      row["description"] = check_description(name);
      report.rows.push_back(row);
    }
    *ok = true;
    return report;
  }
  SuiteConfig config;
  try {
    if (!a.config.empty()) {
      std::ifstream in(a.config);
      if (!in) throw UsageError("cannot read suite config " + a.config);
      std::stringstream buf;
      buf << in.rdbuf();
      config = parse_suite_config(std::string_view(buf.str()));
    } else if (!a.checks.empty()) {
      SuiteConfig all = default_suite();
      for (const auto& name : a.checks) {
        check_description(name);
        auto it = std::find_if(all.checks.begin(), all.checks.end(), [&](const CheckConfig& c) { return c.name == name; });
        config.checks.push_back(*it);
      }
    } else {
      config = default_suite();
    }
  } catch (const ConfigurationError& e) {
    throw UsageError(e.what());
  }
  if (a.common.threads != 0) config.threads = a.common.threads;
  const SuiteReport suite = verify_suite(config);
  *ok = suite.ok();
  const auto j = suite.to_json(a.common.timing);
  report.fields["ok"] = suite.ok();
  report.rows_key = "checks";
  for (const auto& c : j["checks"]) report.rows.push_back(ojson::parse(c.dump()));
  // Keep the column order of the report schema.
  for (auto& row : report.rows) {
    ojson ordered;
    for (const char* key : {"check", "status", "measured", "expected", "tolerance", "seconds", "detail"}) {
      if (row.contains(key)) ordered[key] = row[key];
    }
    row = std::move(ordered);
  }
  return report;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and high-precision evaluation of multiple lcm/gcd sums and their asymptotic constants", "mzeta"};
  app.require_subcommand(1);
  bool help_all = false;
  app.add_flag("--help-all", help_all, "print help for every subcommand and exit");

  SumArgs sum;
  auto* sum_cmd = app.add_subcommand("sum", "box or Holder-ball sum of a family over m_i <= x");
  add_common(sum_cmd, sum.common);
  sum_cmd->add_option("--x", sum.x, "bound x; several increasing values give a ladder")->required();
  sum_cmd->add_option("--norm", sum.norm, "inf or a rational Holder exponent d >= 1")->capture_default_str();
  sum_cmd->add_option("--strategy", sum.strategy, "direct or sieve")
      ->check(CLI::IsMember({"direct", "sieve"}))
      ->capture_default_str();
  sum_cmd->add_option("--mode", sum.mode, "auto, exact or float")
      ->check(CLI::IsMember({"auto", "exact", "float"}))
      ->capture_default_str();
  sum_cmd->add_option("--budget", sum.budget, "refuse sums estimated above this many tuple evaluations")
      ->capture_default_str();
  sum_cmd->add_flag("--timing", sum.common.timing, "include elapsed seconds");

  auto* constant_cmd = app.add_subcommand("constant", "asymptotic constants");
  constant_cmd->require_subcommand(1);
  EulerArgs euler;
  auto* euler_cmd = constant_cmd->add_subcommand("euler", "Euler product constant C_n(f)");
  add_common(euler_cmd, euler.common);
  euler_cmd->add_option("--P,--prime-bound", euler.prime_bound, "primes up to P enter the product")
      ->capture_default_str();
  euler_cmd->add_option("--B,--exponent-bound", euler.exponent_bound, "local series truncation |nu|_inf <= B")
      ->capture_default_str();
  euler_cmd->add_option("--prec", euler.common.prec, "working precision in bits")->capture_default_str();

  VolumeArgs volume;
  auto* volume_cmd = constant_cmd->add_subcommand("volume", "geometric constant K_n(f) for the sup norm");
  add_common(volume_cmd, volume.common);
  volume_cmd->add_option("--method", volume.method, "exact or mc")
      ->check(CLI::IsMember({"exact", "mc"}))
      ->capture_default_str();
  volume_cmd->add_option("--samples", volume.samples, "Monte Carlo samples")->capture_default_str();
  volume_cmd->add_option("--seed", volume.seed, "Monte Carlo seed")->capture_default_str();
  volume_cmd->add_option("--log-x", volume.log_x, "Monte Carlo evaluation point ln x")->capture_default_str();

  HolderArgs holder;
  auto* holder_cmd = constant_cmd->add_subcommand("holder", "geometric constant K_n(f, d) for Holder norms");
  add_common(holder_cmd, holder.common);
  holder_cmd->add_option("--d", holder.d, "Holder exponent d >= 1")->capture_default_str();
  holder_cmd->add_option("--prec", holder.common.prec, "working precision in bits")->capture_default_str();

  Common integral;
  auto* integral_cmd = app.add_subcommand("integral", "exact integral I_n(x) as a sum of c x^a (ln x)^b terms");
  add_common(integral_cmd, integral);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "sum along a ladder and fit x^c times a polynomial in ln x");
  add_common(fit_cmd, fit.common);
  fit_cmd->add_option("--ladder", fit.ladder, "increasing x values")->required();
  fit_cmd->add_option("--norm", fit.norm, "inf or a rational Holder exponent d >= 1")->capture_default_str();
  fit_cmd->add_option("--strategy", fit.strategy, "direct or sieve")
      ->check(CLI::IsMember({"direct", "sieve"}))
      ->capture_default_str();
  fit_cmd->add_option("--mode", fit.mode, "auto, exact or float")
      ->check(CLI::IsMember({"auto", "exact", "float"}))
      ->capture_default_str();
  fit_cmd->add_option("--P,--prime-bound", fit.prime_bound, "prime bound for C_n(f)")->capture_default_str();
  fit_cmd->add_option("--B,--exponent-bound", fit.exponent_bound, "exponent bound for C_n(f)")->capture_default_str();
  fit_cmd->add_option("--prec", fit.common.prec, "working precision in bits")->capture_default_str();
  fit_cmd->add_option("--budget", fit.budget, "work budget per sum")->capture_default_str();

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "run named checks and report PASS/FAIL/XFAIL/XPASS");
  add_common(verify_cmd, verify.common, false);
  verify_cmd->add_option("--config", verify.config, "JSON suite config; default runs every check");
  verify_cmd->add_option("--check", verify.checks, "run only these checks");
  verify_cmd->add_flag("--list", verify.list, "list check names and exit");
  verify_cmd->add_flag("--timing", verify.common.timing, "include seconds per check");

  if (!args.empty() && args.front() == "--help-all") {
    out << app.help();
    for (auto* sub : app.get_subcommands({})) {
      out << "\n" << sub->help("mzeta");
      for (auto* nested : sub->get_subcommands({})) {
        out << "\n" << nested->help("mzeta " + sub->get_name());
      }
    }
    return kExitOk;
  }

  std::vector<const char*> argv{"mzeta"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const Common* common = nullptr;
  try {
    Report report;
    bool ok = true;
    if (sum_cmd->parsed()) {
      common = &sum.common;
      report = run_sum_command(sum);
    } else if (euler_cmd->parsed()) {
      common = &euler.common;
      report = run_euler_command(euler);
    } else if (volume_cmd->parsed()) {
      common = &volume.common;
      report = run_volume_command(volume);
    } else if (holder_cmd->parsed()) {
      common = &holder.common;
      report = run_holder_command(holder);
    } else if (integral_cmd->parsed()) {
      common = &integral;
      report = run_integral_command(integral);
    } else if (fit_cmd->parsed()) {
      common = &fit.common;
      report = run_fit_command(fit);
    } else {
      common = &verify.common;
      report = run_verify_command(verify, &ok);
    }
    if (common->output.empty()) {
      render(report, common->format, out);
    } else {
      std::ofstream file(common->output);
      if (!file) throw UsageError("cannot write " + common->output);
      render(report, common->format, file);
    }
    return ok ? kExitOk : kExitCheckFailed;
  } catch (const BudgetExceeded& e) {
    err << "mzeta: " << e.what() << "\n";
    return kExitBudget;
  } catch (const UsageError& e) {
    err << "mzeta: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigurationError& e) {
    err << "mzeta: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedError& e) {
    err << "mzeta: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "mzeta: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "mzeta: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "mzeta: error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}

}  // namespace mzeta
