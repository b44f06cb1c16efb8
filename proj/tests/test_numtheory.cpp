#include <random>

#include "doctest.h"
#include "icg/numtheory.hpp"
#include "oracles.hpp"

using namespace icg;

namespace {

std::vector<PrimePower> pp(std::initializer_list<std::pair<long long, int>> items) {
  std::vector<PrimePower> out;
  for (auto [p, e] : items) out.push_back({p, e});
  return out;
}

}  // namespace

TEST_SUITE("numtheory") {
  TEST_CASE("factorize examples") {
    CHECK(factorize(36).factors() == pp({{2, 2}, {3, 2}}));
    CHECK(factorize(1).factors().empty());
    CHECK(factorize(1).value() == 1);
    // Frozen from the trial-division oracle.
    CHECK(factorize(30125).factors() == pp({{5, 3}, {241, 1}}));
    CHECK_THROWS_AS(factorize(0), InvalidInput);
    CHECK_THROWS_AS(factorize(-7), InvalidInput);
  }

  TEST_CASE("factorize handles large prime cofactors") {
    // 2^61 - 1 is prime; 1000003 * 1000033 needs the Pollard path.
    const Int mersenne = (Int{1} << 61) - 1;
    CHECK(factorize(mersenne).factors() == std::vector<PrimePower>{{mersenne, 1}});
    CHECK(factorize(Int{1000003} * 1000033).factors() == pp({{1000003, 1}, {1000033, 1}}));
    CHECK(factorize(Int{4294967291} * 4294967279).factors() == pp({{4294967279, 1}, {4294967291, 1}}));
  }

  TEST_CASE("factorize agrees with trial division") {
    for (std::int64_t n = 1; n <= 5000; ++n) {
      auto got = factorize(n).factors();
      auto want = oracle::factorize(n);
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].prime == want[i].first);
        CHECK(got[i].exponent == want[i].second);
      }
    }
  }

  TEST_CASE("from_factors validates") {
    CHECK_THROWS_AS(PrimeFactorization::from_factors(pp({{4, 1}})), InvalidInput);
    CHECK_THROWS_AS(PrimeFactorization::from_factors(pp({{3, 1}, {2, 1}})), InvalidInput);
    CHECK_THROWS_AS(PrimeFactorization::from_factors(pp({{3, 0}})), InvalidInput);
    CHECK_THROWS_AS(PrimeFactorization::from_factors(pp({{2, 200}})), ArithmeticOverflow);
    CHECK(PrimeFactorization::from_factors(pp({{2, 3}, {7, 1}})).value() == 56);
  }

  TEST_CASE("phi and mu examples") {
    CHECK(phi(factorize(8)) == 4);
    CHECK(phi(factorize(1)) == 1);
    CHECK(phi(factorize(36)) == 12);
    CHECK(mu(factorize(1)) == 1);
    CHECK(mu(factorize(4)) == 0);
    CHECK(mu(factorize(30)) == -1);
  }

  TEST_CASE("phi and mu agree with counting oracles") {
    for (std::int64_t n = 1; n <= 600; ++n) {
      CHECK(phi(factorize(n)) == oracle::phi(n));
      CHECK(mu(factorize(n)) == oracle::mu(n));
    }
  }

  TEST_CASE("divisor sums of phi and mu") {
    for (std::int64_t n = 1; n <= 10000; ++n) {
      const auto f = factorize(n);
      Int phi_sum = 0;
      Int mu_sum = 0;
      for (Int d : divisors(f)) {
        const auto df = factorize_divisor(f, d);
        phi_sum += phi(df);
        mu_sum += mu(df);
      }
      REQUIRE(phi_sum == n);
      REQUIRE(mu_sum == (n == 1 ? 1 : 0));
    }
  }

  TEST_CASE("divisors") {
    CHECK(divisors(factorize(12)) == std::vector<Int>{1, 2, 3, 4, 6, 12});
    CHECK(divisors(factorize(8)) == std::vector<Int>{1, 2, 4, 8});
    CHECK(factorize(8).divisor_count() == 4);
    CHECK(divisors(factorize(97)) == std::vector<Int>{1, 97});
    const auto f = factorize(720720);
    CHECK(static_cast<Int>(divisors(f).size()) == f.divisor_count());
  }

  TEST_CASE("primes_in") {
    CHECK(primes_in(2, 10) == std::vector<Int>{2, 3, 5, 7});
    CHECK(primes_in(24, 28).empty());
    CHECK(primes_in(4, 26) == std::vector<Int>{5, 7, 11, 13, 17, 19, 23});
    CHECK(primes_in(0, 1).empty());
    CHECK_THROWS_AS(primes_in(10, 2), InvalidInput);
    // Sparse path: window above the sieve bound squared.
    const Int base = Int{1} << 40;
    for (Int p : primes_in(base, base + 2000)) CHECK(is_prime(p));
  }

  TEST_CASE("factorize inverts product on random factorizations") {
    std::mt19937_64 rng(20261016);
    const auto primes = primes_in(2, 100000);
    std::uniform_int_distribution<std::size_t> pick(0, primes.size() - 1);
    std::uniform_int_distribution<int> exp(1, 3);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<PrimePower> fs;
      std::vector<Int> chosen;
      const int count = 1 + static_cast<int>(rng() % 3);
      while (static_cast<int>(chosen.size()) < count) {
        Int p = primes[pick(rng)];
        if (std::find(chosen.begin(), chosen.end(), p) == chosen.end()) chosen.push_back(p);
      }
      std::sort(chosen.begin(), chosen.end());
      for (Int p : chosen) fs.push_back({p, exp(rng)});
      PrimeFactorization f;
      try {
        f = PrimeFactorization::from_factors(fs);
      } catch (const ArithmeticOverflow&) {
        continue;
      }
      if (f.value() >= (Int{1} << 63)) continue;
      CHECK(factorize(f.value()) == f);
    }
  }

  TEST_CASE("parse_int and to_string") {
    CHECK(parse_int("30125") == 30125);
    CHECK(parse_int("-42") == -42);
    CHECK(to_string(parse_int("-170141183460469231731687303715884105728")) ==
          "-170141183460469231731687303715884105728");
    CHECK_THROWS_AS(parse_int("12a"), InvalidInput);
    CHECK_THROWS_AS(parse_int(""), InvalidInput);
    CHECK_THROWS_AS(parse_int("999999999999999999999999999999999999999999"), ArithmeticOverflow);
  }
}
