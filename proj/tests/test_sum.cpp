#include <array>
#include <cmath>
#include <cstring>
#include <random>

#include "support.hpp"
#include "mzeta/family.hpp"
#include "mzeta/sum.hpp"

using namespace mzeta;

namespace {

const std::array<const char*, 4> kFamilies = {"cyclic", "inv-lcm", "inv-lcm-coprime", "prod-over-lcm"};

SumRequest request(const char* family, int n, std::uint64_t x, Norm norm = Norm::sup()) {
  SumRequest r;
  r.family = FamilySpec::builtin(family, n);
  r.x = x;
  r.norm = norm;
  r.threads = 4;
  return r;
}

// Walks every tuple of [1, x]^n.
template <class Visit>
void for_each_tuple(int n, std::uint64_t x, Visit&& visit) {
  std::vector<std::uint64_t> m(n, 1);
  while (true) {
    visit(m);
    int i = n - 1;
    while (i >= 0 && m[i] == x) m[i--] = 1;
    if (i < 0) return;
    ++m[i];
  }
}

// Box or integer-d ball sum from the per-tuple definition.
Rational oracle_sum(const char* family, int n, std::uint64_t x, long d, std::uint64_t* count) {
  const FamilySpec spec = FamilySpec::builtin(family, n);
  Rational total = 0;
  *count = 0;
  const BigInt bound = d == 0 ? BigInt(0) : pow_int(BigInt(static_cast<unsigned long>(x)), d);
  for_each_tuple(n, x, [&](const std::vector<std::uint64_t>& m) {
    if (d != 0) {
      BigInt s = 0;
      for (auto v : m) s += pow_int(BigInt(static_cast<unsigned long>(v)), d);
      if (s > bound) return;
    }
    total += oracle_direct(spec, m);
    ++*count;
  });
  return total;
}

// Counts points of the ball with rational exponent d at high precision,
// treating a gap below 1e-200 as lying on the boundary.
std::uint64_t oracle_ball_count(int n, std::uint64_t x, const Rational& d) {
  const Real dd(d, 1024);
  std::vector<Real> powers;
  for (std::uint64_t v = 0; v <= x; ++v) powers.push_back(pow(Real(static_cast<long>(v), 1024), dd));
  const Real radius = powers[x];
  const Real eps(1e-200, 1024);
  std::uint64_t count = 0;
  for_each_tuple(n, x, [&](const std::vector<std::uint64_t>& m) {
    Real s(0L, 1024);
    for (auto v : m) s += powers[v];
    if (s <= radius + eps) ++count;
  });
  return count;
}

}  // namespace

TEST_CASE("sum_box examples") {
  CHECK(sum_box(request("inv-lcm", 2, 2)).exact_value == Rational(5, 2));
  CHECK(sum_box(request("prod-over-lcm", 2, 2)).exact_value == 5);
  CHECK(sum_box(request("cyclic", 1, 10)).exact_value == 27);
  CHECK(sum_box(request("inv-lcm-coprime", 2, 2)).exact_value == 2);
  auto r = sum_box(request("inv-lcm", 2, 2));
  CHECK(r.exact);
  CHECK(r.tuple_count == 4);
  CHECK(r.value_string() == "5/2");
}

TEST_CASE("sum_holder examples") {
  CHECK(sum_holder(request("inv-lcm", 2, 3, Norm::holder(1))).exact_value == 2);
  auto minimal = sum_holder(request("cyclic", 2, 2, Norm::holder(2)));
  CHECK(minimal.exact_value == 1);
  CHECK(minimal.tuple_count == 1);
  for (const char* f : {"cyclic", "inv-lcm", "prod-over-lcm"}) {
    for (std::uint64_t x : {1ULL, 7ULL, 50ULL}) {
      auto box = sum_box(request(f, 1, x));
      for (Rational d : {Rational(1), Rational(3), Rational(5, 2)}) {
        auto ball = sum_holder(request(f, 1, x, Norm::holder(d)));
        CHECK(ball.exact_value == box.exact_value);
        CHECK(ball.tuple_count == x);
      }
    }
  }
}

TEST_CASE("sums agree with the per-tuple definition") {
  for (const char* f : kFamilies) {
    for (int n : {2, 3}) {
      for (std::uint64_t x : {1ULL, 5ULL, 12ULL}) {
        std::uint64_t count = 0;
        Rational expect = oracle_sum(f, n, x, 0, &count);
        for (auto strategy : {SumStrategy::direct, SumStrategy::sieve}) {
          auto req = request(f, n, x);
          req.strategy = strategy;
          req.mode = NumericMode::exact;
          auto got = sum_box(req);
          CHECK(got.exact_value == expect);
          CHECK(got.tuple_count == count);
        }
        for (long d : {1L, 2L, 3L}) {
          expect = oracle_sum(f, n, x, d, &count);
          auto req = request(f, n, x, Norm::holder(d));
          req.mode = NumericMode::exact;
          auto got = sum_holder(req);
          CHECK(got.exact_value == expect);
          CHECK(got.tuple_count == count);
        }
      }
    }
  }
}

TEST_CASE("rational Holder exponents count boundary points exactly") {
  for (Rational d : {Rational(3, 2), Rational(4, 3), Rational(7, 2)}) {
    for (int n : {2, 3}) {
      for (std::uint64_t x : {6ULL, 13ULL, 30ULL}) {
        auto got = sum_holder(request("prod-over-lcm", n, x, Norm::holder(d)));
        CHECK(got.tuple_count == oracle_ball_count(n, x, d));
      }
    }
  }
  // 3^3 + 4^3 + 5^3 = 6^3 puts (18, 32, 50) and its permutations exactly on
  // the sphere of radius 72 for d = 3/2.
  const Rational d(3, 2);
  auto on = sum_holder(request("prod-over-lcm", 3, 72, Norm::holder(d)));
  CHECK(on.tuple_count == oracle_ball_count(3, 72, d));
  auto below = sum_holder(request("prod-over-lcm", 3, 71, Norm::holder(d)));
  CHECK(below.tuple_count < on.tuple_count);
}

TEST_CASE("strategy equivalence") {
  for (const char* f : kFamilies) {
    for (int n : {2, 3}) {
      const bool slow = n == 3 && std::string(f) == "cyclic";
      for (std::uint64_t x : {37ULL, slow ? 30ULL : 200ULL}) {
        auto a = request(f, n, x);
        a.strategy = SumStrategy::direct;
        a.mode = NumericMode::exact;
        auto b = a;
        b.strategy = SumStrategy::sieve;
        CAPTURE(f);
        CAPTURE(n);
        CAPTURE(x);
        CHECK(sum_box(a).exact_value == sum_box(b).exact_value);
      }
    }
  }
}

TEST_CASE("monotone in x and nested norms") {
  for (const char* f : kFamilies) {
    for (int n : {2, 3}) {
      Rational prev = -1;
      for (std::uint64_t x = 1; x <= 24; ++x) {
        auto box = sum_box(request(f, n, x));
        CHECK(box.exact_value >= prev);
        prev = box.exact_value;
        for (Rational d : {Rational(1), Rational(2), Rational(5, 2), Rational(9)}) {
          auto ball = sum_holder(request(f, n, x, Norm::holder(d)));
          CHECK(ball.exact_value <= box.exact_value);
        }
      }
    }
  }
}

TEST_CASE("exact and float modes agree") {
  std::mt19937_64 rng(7);
  for (const char* f : {"inv-lcm", "inv-lcm-coprime"}) {
    for (int trial = 0; trial < 12; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 2);
      const std::uint64_t x = 1 + rng() % (n == 2 ? 600 : 90);
      const Norm norm = trial % 3 == 0 ? Norm::holder(Rational(1 + static_cast<long>(rng() % 4), 1)) : Norm::sup();
      auto exact = request(f, n, x, norm);
      exact.mode = NumericMode::exact;
      auto flt = exact;
      flt.mode = NumericMode::floating;
      auto e = run_sum(exact);
      auto g = run_sum(flt);
      CHECK_FALSE(g.exact);
      const double ref = e.exact_value.get_d();
      CHECK(std::fabs(g.float_value - ref) <= std::ldexp(std::fabs(ref), -40));
      CHECK(g.tuple_count == e.tuple_count);
    }
  }
}

TEST_CASE("results are identical across thread counts") {
  for (const char* f : kFamilies) {
    for (auto mode : {NumericMode::exact, NumericMode::floating}) {
      auto base = request(f, 3, 70);
      base.mode = mode;
      base.threads = 1;
      auto ref = sum_box(base);
      for (unsigned t : {2u, 3u, 8u}) {
        auto r = base;
        r.threads = t;
        auto got = sum_box(r);
        CHECK(got.exact == ref.exact);
        CHECK(got.exact_value == ref.exact_value);
        CHECK(std::memcmp(&got.float_value, &ref.float_value, sizeof(double)) == 0);
      }
    }
  }
}

TEST_CASE("ladder matches individual sums") {
  const std::uint64_t xs[] = {1, 2, 9, 10, 31, 64};
  for (const char* f : kFamilies) {
    for (auto mode : {NumericMode::exact, NumericMode::floating}) {
      auto req = request(f, 3, 0);
      req.mode = mode;
      auto ladder = sum_box_ladder(req, xs);
      REQUIRE(ladder.size() == std::size(xs));
      for (std::size_t i = 0; i < ladder.size(); ++i) {
        auto single = req;
        single.x = xs[i];
        auto r = sum_box(single);
        CHECK(ladder[i].tuple_count == r.tuple_count);
        if (r.exact) {
          CHECK(ladder[i].exact_value == r.exact_value);
        } else {
          CHECK(std::fabs(ladder[i].float_value - r.float_value) <= 1e-13 * std::fabs(r.float_value));
        }
      }
    }
  }
  const std::uint64_t bad[] = {5, 5};
  CHECK_THROWS_AS(sum_box_ladder(request("inv-lcm", 2, 0), bad), std::invalid_argument);
}

TEST_CASE("automatic mode and budget") {
  auto f2 = FamilySpec::builtin("inv-lcm", 2);
  auto f3 = FamilySpec::builtin("inv-lcm", 3);
  CHECK(resolve_mode(f2, 10000, NumericMode::automatic) == NumericMode::exact);
  CHECK(resolve_mode(f2, 10001, NumericMode::automatic) == NumericMode::floating);
  CHECK(resolve_mode(f3, 500, NumericMode::automatic) == NumericMode::exact);
  CHECK(resolve_mode(f3, 501, NumericMode::automatic) == NumericMode::floating);
  CHECK(resolve_mode(FamilySpec::builtin("cyclic", 3), 5000, NumericMode::floating) == NumericMode::exact);

  auto big = request("inv-lcm", 3, 2000);
  try {
    sum_box(big);
    FAIL("expected refusal");
  } catch (const BudgetExceeded& e) {
    CHECK(e.estimated_cost() == doctest::Approx(8e9));
    CHECK(e.budget() == kDefaultWorkBudget);
  }
  auto ball = request("inv-lcm", 3, 2000, Norm::holder(1));
  CHECK(estimated_cost(3, 2000, ball.norm) == doctest::Approx(8e9 / 6));
  ball.work_budget = 1e6;
  CHECK_THROWS_AS(sum_holder(ball), BudgetExceeded);
  CHECK_THROWS_AS(sum_box(request("inv-lcm", 2, 0)), std::invalid_argument);
  CHECK_THROWS_AS(Norm::holder(Rational(1, 2)), std::invalid_argument);
}

TEST_CASE("main_term_prediction examples") {
  const Real one(1L, 256);
  const Real e = exp(one);
  FamilySpec flat = FamilySpec::builtin("inv-lcm", 1);
  flat.rho = 0;
  for (long x : {2L, 10L, 1000L}) {
    CHECK(abs(main_term_prediction(flat, Real(x, 256), one, one) - one) < Real(1e-70, 256));
  }
  const Real C(0.37, 256), K(1.9, 256);
  CHECK(abs(main_term_prediction(FamilySpec::builtin("inv-lcm", 2), e, C, K) - C * K) < Real(1e-70, 256));
  CHECK(abs(main_term_prediction(FamilySpec::builtin("cyclic", 2), e, C, K) - C * K * e * e) < Real(1e-70, 256));
  CHECK_THROWS(main_term_prediction(flat, one, one, one));
}
