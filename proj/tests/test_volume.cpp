#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "doctest.h"
#include "mzeta/volume.hpp"

using namespace mzeta;

namespace {

Rational q(long a, long b = 1) { return Rational(a, b); }

LogPowerExpr term(Rational coeff, Rational a, int b) { return LogPowerExpr::monomial(coeff, a, b); }

std::vector<FamilySpec> builtins_up_to(int max_n) {
  std::vector<FamilySpec> out;
  for (int n = 1; n <= max_n; ++n) {
    for (auto kind : {FamilyKind::cyclic, FamilyKind::inv_lcm, FamilyKind::inv_lcm_coprime, FamilyKind::prod_over_lcm}) {
      if (kind == FamilyKind::inv_lcm_coprime && n < 2) continue;
      out.push_back(FamilySpec::builtin(kind, n));
    }
  }
  return out;
}

// Adaptive Gauss-Kronrod (7, 15) on [a, b].
double gk15(const std::function<double(double)>& f, double a, double b, double tol, int depth = 0) {
  static const double xk[8] = {0.991455371120812639, 0.949107912342758525, 0.864864423359769073,
                               0.741531185599394440, 0.586087235467691130, 0.405845151377397167,
                               0.207784955007898468, 0.0};
  static const double wk[8] = {0.022935322010529225, 0.063092092629978553, 0.104790010322250184,
                               0.140653259715525919, 0.169004726639267903, 0.190350578064785410,
                               0.204432940075298892, 0.209482141084727828};
  static const double wg[4] = {0.129484966168869693, 0.279705391489276668, 0.381830050505118945,
                               0.417959183673469388};
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double fc = f(mid);
  double kron = wk[7] * fc, gauss = wg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    double s = f(mid - half * xk[i]) + f(mid + half * xk[i]);
    kron += wk[i] * s;
    if (i % 2 == 1) gauss += wg[i / 2] * s;
  }
  kron *= half;
  gauss *= half;
  if (std::fabs(kron - gauss) <= tol || depth > 40) return kron;
  return gk15(f, a, mid, tol / 2, depth + 1) + gk15(f, mid, b, tol / 2, depth + 1);
}

// Iterated quadrature of the defining y-space integral, written in the
// coordinates t = ln y: the integrand y^{w-1} dy becomes e^{w t} dt on the
// region t >= 0, M t <= ln x.
double quadrature_In(const PolytopeData& data, double log_x, double tol) {
  const auto& m = data.polytope.rows;
  const int qd = data.polytope.q, n = data.polytope.n;
  std::vector<double> w(qd), t(qd);
  for (int l = 0; l < qd; ++l) w[l] = data.weights.w[l].get_d();
  std::function<double(int)> level = [&](int l) -> double {
    if (l == qd) {
      double e = 0;
      for (int i = 0; i < qd; ++i) e += w[i] * t[i];
      return std::exp(e);
    }
    double upper = log_x;
    for (int j = 0; j < n; ++j) {
      if (m[j][l] == 0) continue;
      double used = 0;
      for (int i = 0; i < l; ++i) used += m[j][i] * t[i];
      upper = std::min(upper, (log_x - used) / m[j][l]);
    }
    if (upper <= 0) return 0.0;
    // Break at the points where the next coordinate's bound changes its
    // active row or reaches zero, so each panel has a smooth integrand.
    std::vector<double> cuts{0.0, upper};
    if (l + 1 < qd) {
      std::vector<std::pair<double, double>> bounds{{log_x, 0.0}};  // value at v = 0, slope in v
      for (int j = 0; j < n; ++j) {
        if (m[j][l + 1] == 0) continue;
        double used = 0;
        for (int i = 0; i < l; ++i) used += m[j][i] * t[i];
        bounds.emplace_back((log_x - used) / m[j][l + 1], -static_cast<double>(m[j][l]) / m[j][l + 1]);
      }
      auto add_cut = [&](double v) {
        if (v > 0 && v < upper) cuts.push_back(v);
      };
      for (std::size_t a = 0; a < bounds.size(); ++a) {
        if (bounds[a].second != 0) add_cut(-bounds[a].first / bounds[a].second);
        for (std::size_t b = a + 1; b < bounds.size(); ++b) {
          double ds = bounds[a].second - bounds[b].second;
          if (ds != 0) add_cut((bounds[b].first - bounds[a].first) / ds);
        }
      }
      std::sort(cuts.begin(), cuts.end());
    }
    double total = 0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      if (cuts[k + 1] <= cuts[k]) continue;
      total += gk15(
          [&](double v) {
            t[l] = v;
            return level(l + 1);
          },
          cuts[k], cuts[k + 1], tol);
    }
    return total;
  };
  return level(0);
}

}  // namespace

TEST_CASE("build_polytope examples") {
  auto s2 = build_polytope(FamilySpec::builtin("inv-lcm", 2));
  CHECK(s2.polytope.q == 3);
  CHECK(s2.polytope.rows == std::vector<std::vector<int>>{{1, 0, 1}, {0, 1, 1}});
  CHECK(s2.weights.w == RationalVector(3, q(0)));
  CHECK(s2.rho == 3);

  auto u2 = build_polytope(FamilySpec::builtin("inv-lcm-coprime", 2));
  CHECK(u2.polytope.q == 2);
  CHECK(u2.rho == 2);

  auto c2 = build_polytope(FamilySpec::builtin("cyclic", 2));
  CHECK(c2.polytope.q == 5);
  CHECK(c2.weights.w == RationalVector{q(1), q(1), q(1), q(1), q(2)});
  CHECK(c2.rho == 3);

  std::vector<Generator> bad{{ExponentVector{0, 0}, 1}};
  std::vector<Rational> c{q(0), q(0)};
  CHECK_THROWS_AS(build_polytope(bad, c), std::invalid_argument);
  CHECK_THROWS_AS(build_polytope(std::span<const Generator>{}, c), std::invalid_argument);
}

TEST_CASE("enumerate_vertices examples") {
  auto square = PolytopeH::from_rows({{1, 0}, {0, 1}});
  CHECK(enumerate_vertices(square) == std::vector<RationalVector>{{q(0), q(0)}, {q(0), q(1)}, {q(1), q(0)}, {q(1), q(1)}});
  auto tri = PolytopeH::from_rows({{1, 1}});
  CHECK(enumerate_vertices(tri) == std::vector<RationalVector>{{q(0), q(0)}, {q(0), q(1)}, {q(1), q(0)}});

  // {z >= 0, z1 + z3 <= 1, z2 + z3 <= 1}: a square pyramid with apex e3.
  auto pyramid = build_polytope(FamilySpec::builtin("inv-lcm", 2)).polytope;
  auto v = enumerate_vertices(pyramid);
  CHECK(v == std::vector<RationalVector>{{q(0), q(0), q(0)},
                                         {q(0), q(0), q(1)},
                                         {q(0), q(1), q(0)},
                                         {q(1), q(0), q(0)},
                                         {q(1), q(1), q(0)}});
}

TEST_CASE("triangulate examples") {
  auto square = PolytopeH::from_rows({{1, 0}, {0, 1}});
  auto ts = triangulate(square, enumerate_vertices(square));
  REQUIRE(ts.size() == 2);
  for (const auto& s : ts) CHECK(s.volume() == q(1, 2));

  auto simplex = PolytopeH::from_rows({{1, 1, 1}});
  auto tt = triangulate(simplex, enumerate_vertices(simplex));
  REQUIRE(tt.size() == 1);
  CHECK(tt[0].volume() == q(1, 6));

  auto u3 = build_polytope(FamilySpec::builtin("inv-lcm-coprime", 3)).polytope;
  Rational total = 0;
  for (const auto& s : triangulate(u3, enumerate_vertices(u3))) total += s.volume();
  CHECK(total == q(11, 480));

  std::vector<RationalVector> flat{{q(0), q(0)}, {q(1), q(0)}, {q(2), q(0)}};
  CHECK_THROWS_AS(triangulate(square, flat), DegeneracyError);
}

TEST_CASE("simplex_exp_integral examples") {
  Simplex seg{{{q(0)}, {q(1)}}};
  CHECK(simplex_exp_integral(seg, WeightVector{{q(0)}}) == LogPowerExpr::constant(q(1)));
  // int_0^1 x^z dz = (x - 1) / ln x
  CHECK(simplex_exp_integral(seg, WeightVector{{q(1)}}) == term(q(1), q(1), -1) + term(q(-1), q(0), -1));

  Simplex tri{{{q(0), q(0)}, {q(2), q(0)}, {q(0), q(3)}}};
  CHECK(simplex_exp_integral(tri, WeightVector{{q(0), q(0)}}) == LogPowerExpr::constant(q(3)));
}

TEST_CASE("exp_divided_difference handles confluent clusters") {
  // f[0, 0, 0] = t^2 / 2 and f[1, 1] = t x
  CHECK(exp_divided_difference({q(0), q(0), q(0)}) == term(q(1, 2), q(0), 2));
  CHECK(exp_divided_difference({q(1), q(1)}) == term(q(1), q(1), 1));
  // f[0, 0, 1] = (x - 1 - t) / 1
  CHECK(exp_divided_difference({q(1), q(0), q(0)}) == term(q(1), q(1), 0) + term(q(-1), q(0), 0) + term(q(-1), q(0), 1));
}

TEST_CASE("integral_In golden expressions") {
  auto c2 = integral_In_symbolic(FamilySpec::builtin("cyclic", 2));
  LogPowerExpr c2_expected = term(q(1, 3), q(2), 3) + term(q(-1), q(2), 2) + term(q(1), q(2), 1) +
                             term(q(-2), q(1), 1) + term(q(1, 2), q(2), 0) + term(q(-1, 2), q(0), 0);
  CHECK(c2 == c2_expected);

  auto v2 = integral_In_symbolic(FamilySpec::builtin("prod-over-lcm", 2));
  CHECK(v2 == term(q(1), q(2), 1) + term(q(-3, 2), q(2), 0) + term(q(2), q(1), 0) + term(q(-1, 2), q(0), 0));

  auto s2 = integral_In_symbolic(FamilySpec::builtin("inv-lcm", 2));
  CHECK(s2 == term(q(1, 3), q(0), 3));
  CHECK(integral_In_symbolic(FamilySpec::builtin("inv-lcm-coprime", 2)) == term(q(1), q(0), 2));
}

TEST_CASE("leading constants for n = 2 and n = 3") {
  struct Case {
    const char* name;
    int n;
    int rho;
    Rational k;
  };
  const Case cases[] = {
      {"cyclic", 2, 3, q(1, 3)},           {"inv-lcm", 2, 3, q(1, 3)},
      {"inv-lcm-coprime", 2, 2, q(1)},     {"prod-over-lcm", 2, 1, q(1)},
      {"inv-lcm", 3, 7, q(11, 3360)},      {"inv-lcm-coprime", 3, 6, q(11, 480)},
      {"prod-over-lcm", 3, 4, q(1, 16)},   {"cyclic", 3, 7, q(11, 3360)},
  };
  for (const auto& cs : cases) {
    CAPTURE(cs.name);
    CAPTURE(cs.n);
    auto lc = leading_constant(FamilySpec::builtin(cs.name, cs.n));
    CHECK(lc.rho_observed == cs.rho);
    CHECK(lc.K == cs.k);
  }
}

TEST_CASE("polytope_volume examples") {
  CHECK(polytope_volume(PolytopeH::from_rows({{1, 0}, {0, 1}})) == 1);
  CHECK(polytope_volume(PolytopeH::from_rows({{1, 1, 1}})) == q(1, 6));
  CHECK(polytope_volume(PolytopeH::from_rows({{2, 1}})) == q(1, 4));
  CHECK(polytope_volume(build_polytope(FamilySpec::builtin("inv-lcm", 3)).polytope) == q(11, 3360));
}

TEST_CASE("volume cross-check, c = 0 reduction, degree law") {
  for (const auto& f : builtins_up_to(3)) {
    CAPTURE(f.name);
    CAPTURE(f.n);
    auto data = build_polytope(f);
    Rational tri_volume = 0;
    for (const auto& s : triangulate(data.polytope, enumerate_vertices(data.polytope))) {
      REQUIRE(s.volume() > 0);
      tri_volume += s.volume();
    }
    CHECK(polytope_volume(data.polytope) == tri_volume);

    std::vector<Rational> zero(f.n, q(0));
    auto lc0 = leading_constant(f.generators, zero);
    CHECK(lc0.K == tri_volume);
    CHECK(lc0.rho_observed == data.polytope.q);

    auto lc = leading_constant(f);
    CHECK(lc.rho_observed == data.rho);
    CHECK(lc.rho_observed == f.rho);
    CHECK(lc.K > 0);
  }
}

TEST_CASE("results do not depend on the triangulation") {
  std::mt19937_64 rng(5);
  for (const auto& f : builtins_up_to(3)) {
    CAPTURE(f.name);
    CAPTURE(f.n);
    auto reference = integral_In_symbolic(f);
    auto vertices = enumerate_vertices(build_polytope(f).polytope);
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<std::size_t> priority(vertices.size());
      std::iota(priority.begin(), priority.end(), std::size_t{0});
      std::shuffle(priority.begin(), priority.end(), rng);
      CHECK(integral_In_symbolic(f.generators, f.c, priority) == reference);
    }
  }
}

TEST_CASE("symbolic integral matches quadrature at x = 1000") {
  std::vector<PolytopeData> instances;
  std::vector<LogPowerExpr> exprs;
  auto add = [&](const std::vector<Generator>& gens, const std::vector<Rational>& c) {
    auto data = build_polytope(gens, c);
    if (data.polytope.q > 3) return;
    instances.push_back(data);
    exprs.push_back(integral_In_symbolic(gens, c));
  };
  for (const auto& f : builtins_up_to(3)) add(f.generators, f.c);
  add({{ExponentVector{1, 0}, 1}, {ExponentVector{0, 1}, 1}}, {q(1), q(1, 2)});
  add({{ExponentVector{1, 0}, 2}, {ExponentVector{1, 1}, 1}}, {q(1, 3), q(0)});
  add({{ExponentVector{1}, 3}}, {q(1)});
  REQUIRE(instances.size() >= 6);
  const double log_x = std::log(1000.0);
  for (std::size_t i = 0; i < instances.size(); ++i) {
    CAPTURE(exprs[i].to_string());
    double symbolic = exprs[i].evaluate_log(Real(log_x, 256)).to_double();
    double numeric = quadrature_In(instances[i], log_x, 1e-10 * std::max(1.0, std::fabs(symbolic)));
    CHECK(std::fabs(numeric - symbolic) <= 1e-6 * std::fabs(symbolic));
  }
}

TEST_CASE("cyclic n = 3 integral agrees with direct box sampling") {
  // Plain uniform sampling of [0, 1]^10 at ln x = 6; no geometry shared with
  // the symbolic route.
  auto data = build_polytope(FamilySpec::builtin("cyclic", 3));
  const auto& m = data.polytope.rows;
  const int qd = data.polytope.q;
  const double t = 6.0;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const long samples = 20000000;
  double sum = 0, sum_sq = 0;
  std::vector<double> z(qd);
  for (long i = 0; i < samples; ++i) {
    for (auto& v : z) v = unit(rng);
    bool inside = true;
    for (const auto& row : m) {
      double s = 0;
      for (int l = 0; l < qd; ++l) s += row[l] * z[l];
      inside = inside && s <= 1;
    }
    if (!inside) continue;
    double e = 0;
    for (int l = 0; l < qd; ++l) e += data.weights.w[l].get_d() * z[l];
    double v = std::exp(t * e);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sum_sq / samples - mean * mean) / samples);
  const double scale = std::pow(t, qd);
  const double exact = integral_In_symbolic(FamilySpec::builtin("cyclic", 3)).evaluate_log(Real(t, 256)).to_double();
  CHECK(std::fabs(mean * scale - exact) <= 4 * se * scale);
  CHECK(se < 0.05 * mean);
}

TEST_CASE("confluent limit: vanishing weights recover the volume") {
  Simplex s{{{q(0), q(0), q(0)}, {q(1), q(0), q(0)}, {q(1), q(1), q(0)}, {q(0), q(1), q(1)}}};
  const double vol = s.volume().get_d();
  RationalVector base{q(3), q(1), q(2)};
  double previous = 1e300;
  for (long k = 1; k <= 6; ++k) {
    Rational eps(1, 1);
    for (long i = 0; i < k; ++i) eps /= 10;
    WeightVector w;
    for (const auto& b : base) w.w.push_back(b * eps);
    double value = simplex_exp_integral(s, w).evaluate_log(Real(1.0, 512)).to_double();
    double err = std::fabs(value - vol);
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 1e-5 * vol);
}

TEST_CASE("Monte Carlo estimates") {
  auto s2 = FamilySpec::builtin("inv-lcm", 2);
  auto est = mc_estimate_K(s2, 20.0, 200000, 42, 1);
  CHECK(std::fabs(est.estimate - 1.0 / 3) <= 3 * est.std_error);

  std::vector<Generator> square{{ExponentVector{1, 0}, 1}, {ExponentVector{0, 1}, 1}};
  std::vector<Rational> zero{q(0), q(0)};
  auto sq = mc_estimate_K(square, zero, 10.0, 1000, 1, 1);
  CHECK(sq.estimate == doctest::Approx(1.0));

  // At x = e^30 the oracle is the exact integral evaluated at the same x.
  auto c2 = FamilySpec::builtin("cyclic", 2);
  const double t = 30;
  Real exact = integral_In_symbolic(c2).evaluate_log(Real(t, 256));
  double target = (exact / exp(Real(2 * t, 256)) / pow(Real(t, 256), 3L)).to_double();
  auto ce = mc_estimate_K(c2, t, 400000, 9, 1);
  CHECK(std::fabs(ce.estimate - target) <= 3 * ce.std_error);

  // Bitwise identical across thread counts.
  auto a = mc_estimate_K(c2, t, 300000, 77, 1);
  auto b = mc_estimate_K(c2, t, 300000, 77, 8);
  CHECK(a.hits == b.hits);
  CHECK(a.estimate == b.estimate);

  CHECK_THROWS_AS(mc_estimate_K(s2, 5.0, 5000, 1), std::invalid_argument);
  CHECK_THROWS_AS(mc_estimate_K(s2, 12.0, 999, 1), std::invalid_argument);
}

TEST_CASE("Holder closed forms") {
  const mpfr_prec_t prec = 256;
  Real pi = Real::pi(prec);
  auto c2 = FamilySpec::builtin("cyclic", 2);
  auto v2 = FamilySpec::builtin("prod-over-lcm", 2);
  CHECK(relative_difference(holder_constant_closed(c2, Real(1, prec)), Real(q(1, 6), prec)) < Real(1e-70, prec));
  CHECK(relative_difference(holder_constant_closed(c2, Real(2, prec)), pi / 12) < Real(1e-70, prec));
  CHECK(relative_difference(holder_constant_closed(v2, Real(2, prec)), pi / 4) < Real(1e-70, prec));
  // d = 1 for n = 3: Gamma(1)^3 / Gamma(3) = 1/2.
  CHECK(relative_difference(holder_constant_closed(FamilySpec::builtin("cyclic", 3), Real(1, prec)),
                            Real(q(31, 60480), prec)) < Real(1e-70, prec));
  CHECK_THROWS_AS(holder_constant_closed(FamilySpec::builtin("inv-lcm", 2), Real(2, prec)), UnsupportedError);
  CHECK_THROWS_AS(holder_constant_closed(FamilySpec::builtin("cyclic", 4), Real(2, prec)), UnsupportedError);
  CHECK_THROWS_AS(holder_constant_closed(c2, Real(0.5, prec)), std::domain_error);
}

TEST_CASE("counter_random is a pure function of its inputs") {
  CHECK(counter_random(1, 2, 3) == counter_random(1, 2, 3));
  CHECK(counter_random(1, 2, 3) != counter_random(1, 2, 4));
  CHECK(counter_random(1, 2, 3) != counter_random(1, 3, 3));
  CHECK(counter_random(1, 2, 3) != counter_random(2, 2, 3));
}
