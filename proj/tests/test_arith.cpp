#include <random>

#include "doctest.h"
#include "mzeta/arith.hpp"
#include "mzeta/real.hpp"

using namespace mzeta;

TEST_CASE("sieve_primes small limits") {
  CHECK(sieve_primes(10) == std::vector<std::uint64_t>{2, 3, 5, 7});
  CHECK(sieve_primes(2) == std::vector<std::uint64_t>{2});
  CHECK(sieve_primes(1).empty());
  CHECK(sieve_primes(0).empty());
  CHECK(sieve_primes(1000000).size() == 78498);
}

TEST_CASE("factorize examples") {
  FactorizationTable table(100);
  CHECK(table.factorize(12) == std::vector<PrimePower>{{2, 2}, {3, 1}});
  CHECK(table.factorize(1).empty());
  CHECK(table.factorize(97) == std::vector<PrimePower>{{97, 1}});
  CHECK_THROWS_AS(table.factorize(101), std::out_of_range);
  CHECK_THROWS_AS(table.factorize(0), std::out_of_range);
}

TEST_CASE("factorization round trip and smallest prime factor") {
  const std::uint32_t limit = 200000;
  FactorizationTable table(limit);
  for (std::uint32_t m = 1; m <= limit; ++m) {
    auto f = table.factorize(m);
    std::uint64_t prod = 1;
    std::uint64_t last = 0;
    for (auto [p, e] : f) {
      REQUIRE(p > last);
      REQUIRE(e >= 1);
      last = p;
      for (int i = 0; i < e; ++i) prod *= p;
    }
    REQUIRE(prod == m);
    if (m >= 2) REQUIRE(table.smallest_prime_factor(m) == f.front().prime);
  }
  CHECK(factorize_trial(360) == table.factorize(360));
}

TEST_CASE("lcm_gcd_tuple") {
  std::vector<std::uint64_t> a{4, 6};
  auto r = lcm_gcd_tuple(a);
  CHECK(r.lcm == 12);
  CHECK(r.gcd == 2);
  std::vector<std::uint64_t> ones{1, 1, 1};
  r = lcm_gcd_tuple(ones);
  CHECK(r.lcm == 1);
  CHECK(r.gcd == 1);
  std::vector<std::uint64_t> single{5};
  r = lcm_gcd_tuple(single);
  CHECK(r.lcm == 5);
  CHECK(r.gcd == 5);
  CHECK_THROWS_AS(lcm_gcd_tuple(std::span<const std::uint64_t>{}), std::invalid_argument);
}

TEST_CASE("lcm times gcd equals product for pairs; lcm divides product") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> dist(1, 1000000);
  for (int i = 0; i < 20000; ++i) {
    std::vector<std::uint64_t> m{dist(rng), dist(rng)};
    auto r = lcm_gcd_tuple(m);
    REQUIRE(r.lcm * r.gcd == BigInt(static_cast<unsigned long>(m[0])) * static_cast<unsigned long>(m[1]));
    std::vector<std::uint64_t> t{dist(rng) % 500 + 1, dist(rng) % 500 + 1, dist(rng) % 500 + 1, dist(rng) % 500 + 1};
    auto rt = lcm_gcd_tuple(t);
    BigInt prod = 1;
    for (auto v : t) prod *= static_cast<unsigned long>(v);
    REQUIRE(prod % rt.lcm == 0);
  }
}

TEST_CASE("mobius sieve") {
  auto mu = mobius_sieve(10000);
  CHECK(mu[1] == 1);
  CHECK(mu[6] == 1);
  CHECK(mu[4] == 0);
  CHECK(mu[2] == -1);
  CHECK(mu[30] == -1);
  for (std::uint64_t m = 1; m <= 10000; ++m) {
    int s = 0;
    for (std::uint64_t d = 1; d <= m; ++d) {
      if (m % d == 0) s += mu[d];
    }
    REQUIRE(s == (m == 1 ? 1 : 0));
  }
}

TEST_CASE("exact rational arithmetic is lossless") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-1000000000L, 1000000000L);
  std::uniform_int_distribution<long> den(1, 1000000000L);
  for (int i = 0; i < 100000; ++i) {
    Rational a(num(rng), den(rng));
    Rational b(num(rng), den(rng));
    a.canonicalize();
    b.canonicalize();
    Rational back = (a + b) - b;
    REQUIRE(back == a);
    REQUIRE(back.get_den() > 0);
    REQUIRE(gcd(back.get_num(), back.get_den()) == 1);
  }
}

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rational("5/2") == Rational(5, 2));
  CHECK(parse_rational("10/4") == Rational(5, 2));
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("1.25") == Rational(5, 4));
  CHECK(parse_rational("-0.5") == Rational(-1, 2));
  CHECK(to_fraction_string(Rational(11, 3360)) == "11/3360");
  CHECK(to_fraction_string(Rational(4)) == "4/1");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
}

TEST_CASE("Real basics") {
  Real pi = Real::pi(256);
  CHECK(pi.precision() == 256);
  CHECK(std::abs(pi.to_double() - 3.141592653589793) < 1e-15);
  Real back = Real::parse(pi.to_string(), 256);
  CHECK(back == pi);
  CHECK(Real(1, 256) / Real(3, 256) * 3 - Real(1, 256) < Real(1e-70, 256));
  CHECK(gamma(Real(5, 128)).to_double() == doctest::Approx(24.0));
  CHECK(Real(Rational(1, 4), 64).to_string() == "2.5e-1");
  CHECK_THROWS_AS(Real::parse("1.2.3", 64), std::invalid_argument);
}
