#include "mzeta/fit.hpp"

#include <algorithm>
#include <stdexcept>

#include "mzeta/euler.hpp"
#include "mzeta/volume.hpp"

namespace mzeta {

namespace {

using nlohmann::json;

Real x_power(const Real& x, const Rational& c) {
  if (c == 0) return Real(1L, x.precision());
  return exp(Real(c, x.precision()) * log(x));
}

Real horner(const std::vector<Real>& coeffs, const Real& t) {
  Real acc = coeffs.back();
  for (std::size_t j = coeffs.size() - 1; j-- > 0;) acc = acc * t + coeffs[j];
  return acc;
}

json real_json(const Real& v) { return v.to_string(); }

Real real_from_json(const json& j, mpfr_prec_t prec) { return Real::parse(j.get<std::string>(), prec); }

}  // namespace

Real FitReport::model(const Real& x) const {
  return x_power(x, c_norm) * horner(coefficients, log(x));
}

Real FitReport::main_term(const Real& x) const {
  Real out = predicted * x_power(x, c_norm);
  if (rho != 0) out *= pow(log(x), static_cast<long>(rho));
  return out;
}

bool operator==(const FitReport& a, const FitReport& b) {
  if (a.family != b.family || a.norm != b.norm || a.rho != b.rho || a.c_norm != b.c_norm) return false;
  if (a.samples.size() != b.samples.size() || a.coefficients != b.coefficients) return false;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    if (a.samples[i].x != b.samples[i].x || !(a.samples[i].value == b.samples[i].value)) return false;
  }
  return a.predicted == b.predicted && a.deviation == b.deviation && a.max_residual == b.max_residual;
}

FitReport fit_log_poly(std::span<const FitSample> samples, int rho, const Rational& c_norm, mpfr_prec_t prec) {
  if (rho < 0) throw std::invalid_argument("rho must be nonnegative");
  const std::size_t cols = static_cast<std::size_t>(rho) + 1;
  if (samples.size() < cols + 1) throw std::invalid_argument("fit needs at least rho + 2 samples");
  std::vector<FitSample> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(), [](const FitSample& a, const FitSample& b) { return a.x < b.x; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].x <= 1) throw std::invalid_argument("fit needs x > 1");
    if (i > 0 && sorted[i].x == sorted[i - 1].x) throw std::invalid_argument("duplicate x in fit samples");
  }
  const std::size_t rows = sorted.size();

  // Targets S / x^c against powers of the centred logarithm t = ln x - mean.
  std::vector<Real> logs, target;
  Real mean(0L, prec);
  for (const auto& s : sorted) {
    const Real x(static_cast<long>(s.x), prec);
    logs.push_back(log(x));
    mean += logs.back();
    target.push_back(Real(s.value) * Real(1L, prec) / x_power(x, c_norm));
  }
  mean /= static_cast<long>(rows);

  // Column-major design; modified Gram-Schmidt with one reorthogonalisation pass.
  std::vector<std::vector<Real>> q(cols, std::vector<Real>(rows, Real(prec)));
  for (std::size_t i = 0; i < rows; ++i) {
    const Real t = logs[i] - mean;
    Real p(1L, prec);
    for (std::size_t j = 0; j < cols; ++j) {
      q[j][i] = p;
      p *= t;
    }
  }
  std::vector<std::vector<Real>> r(cols, std::vector<Real>(cols, Real(0L, prec)));
  std::vector<Real> norms0;
  for (std::size_t j = 0; j < cols; ++j) {
    Real n0(0L, prec);
    for (const auto& v : q[j]) n0 += v * v;
    norms0.push_back(sqrt(n0));
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Real dot(0L, prec);
        for (std::size_t i = 0; i < rows; ++i) dot += q[k][i] * q[j][i];
        for (std::size_t i = 0; i < rows; ++i) q[j][i] -= dot * q[k][i];
        r[k][j] += dot;
      }
    }
    Real nrm(0L, prec);
    for (const auto& v : q[j]) nrm += v * v;
    nrm = sqrt(nrm);
    // Relative collapse of the column means the design is rank deficient.
    if (nrm.is_zero() || nrm < norms0[j] * Real(std::ldexp(1.0, -static_cast<int>(prec) / 2), prec)) {
      throw std::invalid_argument("rank-deficient fit design");
    }
    r[j][j] = nrm;
    for (auto& v : q[j]) v /= nrm;
  }
  std::vector<Real> qty(cols, Real(0L, prec));
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) qty[j] += q[j][i] * target[i];
  }
  std::vector<Real> b(cols, Real(0L, prec));
  for (std::size_t j = cols; j-- > 0;) {
    Real acc = qty[j];
    for (std::size_t k = j + 1; k < cols; ++k) acc -= r[j][k] * b[k];
    b[j] = acc / r[j][j];
  }

  // Expand sum_k b_k (L - mean)^k into powers of L.
  std::vector<Real> a(cols, Real(0L, prec));
  const Real neg = -mean;
  for (std::size_t k = 0; k < cols; ++k) {
    Real binom(1L, prec);
    for (std::size_t j = k + 1; j-- > 0;) {
      // Term of b_k: C(k, j) (-mean)^{k-j} L^j.
      Real term = b[k] * binom * pow(neg, static_cast<long>(k - j));
      a[j] += term;
      if (j > 0) {
        binom *= static_cast<long>(j);
        binom /= static_cast<long>(k - j + 1);
      }
    }
  }

  FitReport report;
  report.rho = rho;
  report.c_norm = c_norm;
  report.samples = std::move(sorted);
  report.coefficients = std::move(a);
  report.predicted = Real(0L, prec);
  report.deviation = Real(0L, prec);
  report.max_residual = Real(0L, prec);
  for (std::size_t i = 0; i < rows; ++i) {
    const Real fitted = horner(report.coefficients, logs[i]);
    const Real res = relative_difference(fitted, target[i]);
    if (res > report.max_residual) report.max_residual = res;
  }
  if (!report.max_residual.is_finite()) throw std::invalid_argument("non-finite fit residual");
  return report;
}

void attach_prediction(FitReport& report, const Real& leading_constant) {
  report.predicted = leading_constant;
  report.deviation = relative_difference(report.leading(), leading_constant);
}

json to_json(const FitReport& report) {
  json samples = json::array();
  for (const auto& s : report.samples) samples.push_back({{"x", s.x}, {"sum", real_json(s.value)}});
  json coeffs = json::array();
  for (const auto& c : report.coefficients) coeffs.push_back(real_json(c));
  return {
      {"family", report.family},
      {"norm", report.norm},
      {"rho", report.rho},
      {"c_norm", to_fraction_string(report.c_norm)},
      {"precision", report.coefficients.empty() ? kDefaultPrecision : report.coefficients.front().precision()},
      {"samples", samples},
      {"coefficients", coeffs},
      {"predicted", real_json(report.predicted)},
      {"deviation", real_json(report.deviation)},
      {"max_residual", real_json(report.max_residual)},
  };
}

FitReport fit_report_from_json(const json& j) {
  const mpfr_prec_t prec = j.at("precision").get<mpfr_prec_t>();
  FitReport r;
  r.family = j.at("family").get<std::string>();
  r.norm = j.at("norm").get<std::string>();
  r.rho = j.at("rho").get<int>();
  r.c_norm = parse_rational(j.at("c_norm").get<std::string>());
  for (const auto& s : j.at("samples")) r.samples.push_back({s.at("x").get<std::uint64_t>(), real_from_json(s.at("sum"), prec)});
  for (const auto& c : j.at("coefficients")) r.coefficients.push_back(real_from_json(c, prec));
  r.predicted = real_from_json(j.at("predicted"), prec);
  r.deviation = real_from_json(j.at("deviation"), prec);
  r.max_residual = real_from_json(j.at("max_residual"), prec);
  return r;
}

FitReport fit_family(const FamilyFit& config) {
  if (config.ladder.empty()) throw std::invalid_argument("empty ladder");
  SumRequest request;
  request.family = config.family;
  request.norm = config.norm;
  request.mode = config.mode;
  request.strategy = config.strategy;
  request.threads = config.threads;
  request.work_budget = config.work_budget;

  std::vector<SumResult> sums;
  if (config.norm.infinite) {
    sums = sum_box_ladder(request, config.ladder);
  } else {
    for (auto x : config.ladder) {
      request.x = x;
      sums.push_back(sum_holder(request));
    }
  }
  std::vector<FitSample> samples;
  for (std::size_t i = 0; i < sums.size(); ++i) samples.push_back({config.ladder[i], sums[i].value(config.prec)});

  FitReport report = fit_log_poly(samples, config.family.rho, config.family.c_norm(), config.prec);
  report.family = config.family.name;
  report.norm = config.norm.infinite ? "inf"
                : config.norm.d.get_den() == 1 ? config.norm.d.get_num().get_str()
                                               : to_fraction_string(config.norm.d);

  const auto euler = euler_constant(config.family, config.prime_bound, config.exponent_bound, config.prec, config.threads);
  const Real k = config.norm.infinite ? Real(leading_constant(config.family).K, config.prec)
                                      : holder_constant_closed(config.family, Real(config.norm.d, config.prec));
  attach_prediction(report, euler.value * k);
  return report;
}

}  // namespace mzeta
