// Elementary number theory over checked 128-bit integers.

#pragma once

#include <cstdint>
#include <vector>

#include "icg/checked.hpp"

namespace icg {

struct PrimePower {
  Int prime;
  int exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// N as an ascending list of (prime, exponent) pairs. The empty list is N = 1.
class PrimeFactorization {
 public:
  PrimeFactorization() = default;

  /// Validates primality, strict ordering and positive exponents.
  static PrimeFactorization from_factors(std::vector<PrimePower> factors);

  const std::vector<PrimePower>& factors() const { return factors_; }
  std::size_t rank() const { return factors_.size(); }
  Int value() const { return value_; }

  /// tau(N) = prod (n_i + 1).
  Int divisor_count() const;

  /// Exponent of `p` in N, 0 if absent.
  int exponent_of(Int p) const;

  friend bool operator==(const PrimeFactorization& a, const PrimeFactorization& b) {
    return a.factors_ == b.factors_;
  }

 private:
  std::vector<PrimePower> factors_;
  Int value_ = 1;
};

/// Deterministic Miller-Rabin, exact for all n < 2^64.
bool is_prime(std::uint64_t n);
bool is_prime(Int n);

/// Trial division over a small sieve, Pollard-Brent for large composite
/// cofactors. Accepts 1 <= n < 2^64.
PrimeFactorization factorize(Int n);

Int phi(const PrimeFactorization& f);
int mu(const PrimeFactorization& f);

/// All positive divisors, ascending. Length is tau(N).
std::vector<Int> divisors(const PrimeFactorization& f);

/// Primes in the closed interval [lo, hi].
std::vector<Int> primes_in(Int lo, Int hi);

/// Factorization of a divisor d of N, reusing N's primes.
PrimeFactorization factorize_divisor(const PrimeFactorization& f, Int d);

}  // namespace icg
