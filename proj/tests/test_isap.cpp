#include <map>
#include <numeric>
#include <random>

#include "doctest.h"
#include "icg/isap.hpp"
#include "oracles.hpp"

using namespace icg;

namespace {

std::vector<Int> sorted(std::vector<Int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

PrimeFactorization pf(std::initializer_list<std::pair<long long, int>> items) {
  std::vector<PrimePower> out;
  for (auto [p, e] : items) out.push_back({p, e});
  return PrimeFactorization::from_factors(out);
}

std::uint64_t full_count(const PrimeFactorization& f) { return std::uint64_t{1} << static_cast<int>(f.divisor_count() - 1); }

// Structural properties every RowMatching must have.
void check_matching(std::span<const Int> a, std::span<const Int> b, std::span<const Int> w, const RowMatching& rm) {
  const std::size_t n = w.size();
  std::vector<int> left_cover(n, 0), right_cover(n, 0);
  for (std::size_t r : rm.fixed_rows) {
    CHECK(a[r] == b[r]);
    ++left_cover[r];
    ++right_cover[r];
  }
  for (std::size_t r = 0; r < n; ++r) {
    if (a[r] == b[r]) CHECK(std::find(rm.fixed_rows.begin(), rm.fixed_rows.end(), r) != rm.fixed_rows.end());
  }
  for (const auto& rel : rm.relations) {
    CHECK(rel.relation.disjoint());
    CHECK(rel.relation.balanced(w));
    for (std::size_t r : rel.relation.s1) {
      CHECK(a[r] == rel.value);
      ++left_cover[r];
    }
    for (std::size_t r : rel.relation.s2) {
      CHECK(b[r] == rel.value);
      ++right_cover[r];
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    CHECK(left_cover[r] == 1);
    CHECK(right_cover[r] == 1);
  }
  for (const auto& t : rm.transfers) {
    CHECK(a[t.left] == b[t.right]);
    CHECK(t.amount > 0);
  }
}

}  // namespace

TEST_SUITE("isap") {
  TEST_CASE("phi_vector") {
    const auto f36 = factorize(36);
    const auto pv = phi_vector(f36);
    CHECK(sorted(pv.entries) == sorted({12, 4, 2, 6, 2, 1, 6, 2, 1}));
    CHECK(pv.entries.front() == 1);

    const auto m = compact_matrix(f36);
    const auto idx = exponent_indices(f36);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      ExponentIndex flipped = idx[k];
      for (std::size_t i = 0; i < f36.rank(); ++i) flipped.exponents[i] = f36.factors()[i].exponent - flipped.exponents[i];
      CHECK(pv.entries[k] == m.row_multiplicity(index_position(f36, flipped)));
    }

    CHECK(phi_vector(factorize(13)).entries == std::vector<Int>{1, 12});
    const auto p225 = phi_vector(factorize(225)).entries;
    CHECK(sorted(p225) == sorted({1, 2, 6, 4, 8, 24, 20, 40, 120}));
    Int total = 0;
    for (Int v : p225) total += v;
    CHECK(total == 225);
  }

  TEST_CASE("brute force examples") {
    // Frozen from the full-length eigenvalue oracle.
    const std::map<long long, std::uint64_t> expected{{12, 32}, {16, 16}, {225, 256}, {60, 2048}};
    for (auto [n, count] : expected) {
      const auto v = brute_force_search(factorize(n));
      CHECK(v.status == VerdictStatus::kIsapBruteVerified);
      REQUIRE(v.distinct_spectra);
      CHECK(*v.distinct_spectra == count);
      CHECK_FALSE(v.counterexample);
      CHECK(v.method == "brute-force");
    }
    CHECK(oracle::distinct_spectra_full(12) == 32);
    CHECK(oracle::distinct_spectra_full(60) == 2048);
  }

  TEST_CASE("brute force cap") {
    const auto v = brute_force_search(factorize(1080), {10, 1});
    CHECK(v.status == VerdictStatus::kUnknown);
    CHECK_FALSE(v.distinct_spectra);
    REQUIRE(!v.evidence.empty());
    CHECK(v.evidence.front().find("cap") != std::string::npos);
  }

  TEST_CASE("brute force is independent of the worker count") {
    for (long long n : {60, 72, 120, 225}) {
      const auto f = factorize(n);
      const auto one = brute_force_search(f, {24, 1});
      for (unsigned jobs : {2u, 3u, 8u}) {
        const auto many = brute_force_search(f, {24, jobs});
        CHECK(many.status == one.status);
        CHECK(many.distinct_spectra == one.distinct_spectra);
      }
    }
  }

  TEST_CASE("check_general_nar") {
    CHECK(check_general_nar(factorize(35)).applies);
    for (long long q : {3, 5, 7, 11}) CHECK_FALSE(check_general_nar(factorize(2 * q * q)).applies);
    const auto r15 = check_general_nar(factorize(15));
    CHECK_FALSE(r15.applies);
    REQUIRE(!r15.trace.empty());
    CHECK(r15.trace.back().find("condition 1 i=1") != std::string::npos);
    CHECK_THROWS_AS(check_general_nar(factorize(27)), InvalidInput);
  }

  TEST_CASE("check_general_cos") {
    const auto r = check_general_cos(factorize(45125));
    CHECK(r.applies);
    CHECK(r.trace.back().find("i=1") != std::string::npos);
    CHECK(has_nar(phi_vector(factorize(45125)).entries));
    const auto r15 = check_general_cos(factorize(15));
    CHECK_FALSE(r15.trace.empty());
    CHECK_THROWS_AS(check_general_cos(factorize(49)), InvalidInput);
  }

  TEST_CASE("check_pkqk") {
    CHECK(check_pkqk(pf({{5, 3}, {103, 1}})).applies);
    CHECK_FALSE(check_pkqk(pf({{5, 3}, {7, 1}})).applies);
    CHECK_FALSE(check_pkqk(pf({{3, 2}, {5, 1}})).applies);
    CHECK_THROWS_AS(check_pkqk(factorize(30)), InvalidInput);
  }

  TEST_CASE("check_p2qn") {
    CHECK(check_p2qn(pf({{3, 2}, {11, 2}})).applies);
    CHECK(check_p2qn(pf({{3, 2}, {11, 3}})).applies);
    for (int k : {1, 2, 3}) CHECK_FALSE(check_p2qn(pf({{3, 2}, {5, k}})).applies);
    CHECK_FALSE(check_p2qn(pf({{11, 2}, {13, 2}})).applies);
    CHECK_FALSE(check_p2qn(pf({{2, 2}, {11, 1}})).applies);
    CHECK_THROWS_AS(check_p2qn(pf({{3, 3}, {5, 3}})), InvalidInput);
  }

  TEST_CASE("check_p2q2") {
    CHECK(check_p2q2(factorize(36)).applies);
    CHECK(check_p2q2(factorize(225)).applies);
    CHECK(check_p2q2(pf({{11, 2}, {13, 2}})).applies);
    CHECK_THROWS_AS(check_p2q2(factorize(72)), InvalidInput);
    CHECK_THROWS_AS(check_p2q2(factorize(900)), InvalidInput);
  }

  TEST_CASE("check_far_apart") {
    CHECK(check_far_apart(factorize(15)).applies);
    CHECK_FALSE(check_far_apart(factorize(36)).applies);
    CHECK(check_far_apart(pf({{3, 2}, {31, 1}})).applies);
  }

  TEST_CASE("check_literature") {
    CHECK(check_literature(factorize(8)).method == "literature:p^k");
    CHECK(check_literature(factorize(18)).method == "literature:pq^k");
    CHECK(check_literature(factorize(75)).method == "literature:pq^k");
    CHECK(check_literature(factorize(12)).method == "literature:p^2q");
    CHECK(check_literature(factorize(45)).method == "literature:p^2q");
    CHECK(check_literature(factorize(30)).method == "literature:pqr");
    CHECK_FALSE(check_literature(factorize(24)).applies);
    CHECK_FALSE(check_literature(factorize(36)).applies);
    CHECK_FALSE(check_literature(factorize(60)).applies);
  }

  TEST_CASE("classify examples") {
    const auto v8 = classify(factorize(8));
    CHECK(v8.status == VerdictStatus::kIsapProven);
    CHECK(v8.method == "literature:p^k");

    const auto v36 = classify(factorize(36));
    CHECK(v36.status == VerdictStatus::kIsapProven);
    CHECK(v36.method == "theorem:p2q2");

    const auto v60 = classify(factorize(60));
    CHECK(v60.status == VerdictStatus::kIsapBruteVerified);
    CHECK(v60.method == "brute-force");
    CHECK(v60.distinct_spectra == std::optional<std::uint64_t>{2048});

    const auto big = classify(factorize(1080), {10, 1});
    CHECK(big.status == VerdictStatus::kUnknown);
    CHECK(big.method == "none");
  }

  TEST_CASE("classify only reports applicable checkers") {
    for (long long n = 2; n <= 400; ++n) {
      const auto f = factorize(n);
      const auto v = classify(f, {12, 1});
      CHECK(v.status != VerdictStatus::kCounterexample);
      const std::string& m = v.method;
      if (m.starts_with("literature:")) CHECK(check_literature(f).method == m);
      if (m == "theorem:far-apart") CHECK(check_far_apart(f).applies);
      if (m == "theorem:general-nar") CHECK(check_general_nar(f).applies);
      if (m == "theorem:general-cos") CHECK(check_general_cos(f).applies);
      if (m == "theorem:pkqk") CHECK(check_pkqk(f).applies);
      if (m == "theorem:p2qn") CHECK(check_p2qn(f).applies);
      if (m == "theorem:p2q2") CHECK(check_p2q2(f).applies);
      if (m == "brute-force") CHECK(v.distinct_spectra == std::optional<std::uint64_t>{full_count(f)});
    }
  }

  TEST_CASE("status names round-trip") {
    for (auto s : {VerdictStatus::kIsapProven, VerdictStatus::kIsapBruteVerified, VerdictStatus::kCounterexample,
                   VerdictStatus::kUnknown}) {
      CHECK(parse_status(status_name(s)) == s);
    }
    CHECK_THROWS_AS(parse_status("ISAP"), InvalidInput);
  }

  TEST_CASE("brute force over N <= 100") {
    for (long long n = 2; n <= 100; ++n) {
      const auto f = factorize(n);
      const auto v = brute_force_search(f, {24, 2});
      REQUIRE(v.status == VerdictStatus::kIsapBruteVerified);
      REQUIRE(v.distinct_spectra == std::optional<std::uint64_t>{full_count(f)});
      if (n <= 60) CHECK(oracle::distinct_spectra_full(n) == full_count(f));
      if (!has_nar(phi_vector(f).entries)) CHECK(v.status != VerdictStatus::kCounterexample);
    }
  }

  TEST_CASE("p2q2 agrees with brute force") {
    for (auto [p, q] : std::vector<std::pair<long long, long long>>{{2, 3}, {2, 5}, {3, 5}, {3, 7}, {5, 7}}) {
      const auto f = pf({{p, 2}, {q, 2}});
      CHECK(check_p2q2(f).applies);
      const auto v = brute_force_search(f, {24, 2});
      CHECK(v.status == VerdictStatus::kIsapBruteVerified);
      CHECK(v.distinct_spectra == std::optional<std::uint64_t>{256});
    }
  }

  TEST_CASE("extract_row_nars on synthetic cospectral vectors") {
    const std::vector<Int> a{0, 1, 1, 1, 2, 3, 0, 3, 3};
    const std::vector<Int> b{0, 3, 0, 1, 0, 2, 1, 0, 2};
    const std::vector<Int> w{12, 4, 2, 6, 2, 1, 6, 2, 1};
    const auto rm = extract_row_nars(a, b, w);
    CHECK(rm.fixed_rows == std::vector<std::size_t>{0, 3});
    CHECK(!rm.relations.empty());
    check_matching(a, b, w, rm);

    std::vector<Int> other = b;
    std::swap(other[0], other[1]);
    CHECK_THROWS_AS(extract_row_nars(a, other, w), InvalidInput);
    CHECK_THROWS_AS(extract_row_nars(a, std::vector<Int>{0, 1}, w), InvalidInput);
  }

  TEST_CASE("extract_row_nars with identical symbol sets") {
    const auto f = factorize(36);
    const auto s = SymbolSet::from_divisors(f, std::vector<Int>{1, 6, 12});
    const auto rm = extract_row_nars(f, s, s);
    CHECK(rm.fixed_rows.size() == 9);
    CHECK(rm.relations.empty());
    CHECK_THROWS_AS(extract_row_nars(f, s, SymbolSet::from_divisors(f, std::vector<Int>{1})), InvalidInput);
  }

  TEST_CASE("extract_row_nars on random permuted vectors") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 2 + rng() % 10;
      std::vector<Int> w, a;
      for (std::size_t i = 0; i < n; ++i) {
        w.push_back(1 + static_cast<Int>(rng() % 4));
        a.push_back(static_cast<Int>(rng() % 3));
      }
      // Permuting values among rows of equal weight keeps the spectrum.
      std::vector<Int> b = a;
      for (Int weight = 1; weight <= 4; ++weight) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < n; ++i) {
          if (w[i] == weight) rows.push_back(i);
        }
        std::vector<Int> vals;
        for (std::size_t r : rows) vals.push_back(a[r]);
        std::shuffle(vals.begin(), vals.end(), rng);
        for (std::size_t k = 0; k < rows.size(); ++k) b[rows[k]] = vals[k];
      }
      if (!(canonicalize(a, w) == canonicalize(b, w))) continue;
      check_matching(a, b, w, extract_row_nars(a, b, w));
    }
  }

  TEST_CASE("verify_fixed_row") {
    const auto f = factorize(36);
    const ExponentIndex last{{2, 2}};
    const ExponentIndex first{{0, 0}};
    const auto s = SymbolSet::from_divisors(f, std::vector<Int>{2, 3, 9});
    const std::vector<RowCoefficient> last_only{{last, 1}};
    CHECK(verify_fixed_row(f, s, s, last_only));
    const auto d1 = SymbolSet::from_divisors(f, std::vector<Int>{1});
    const auto d2 = SymbolSet::from_divisors(f, std::vector<Int>{2});
    CHECK_FALSE(verify_fixed_row(f, d1, d2, last_only));
    const std::vector<RowCoefficient> diff{{last, 1}, {first, -1}};
    CHECK(verify_fixed_row(f, s, s, diff));
    // Column (2,2) is d = 1 and column (1,2) is d = 2: delta = 12 - 0 vs 6 - 0.
    CHECK_FALSE(verify_fixed_row(f, d1, d2, diff));
  }
}
