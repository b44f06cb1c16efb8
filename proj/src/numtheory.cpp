#include "icg/numtheory.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

namespace icg {

std::string to_string(Int v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  // Work in the negative range so INT128_MIN does not overflow.
  std::string out;
  Int x = neg ? v : -v;
  while (x != 0) {
    int digit = static_cast<int>(-(x % 10));
    out.push_back(static_cast<char>('0' + digit));
    x /= 10;
  }
  if (neg) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

Int parse_int(std::string_view text) {
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    neg = text[i] == '-';
    ++i;
  }
  if (i == text.size()) throw InvalidInput("expected an integer, got '" + std::string(text) + "'");
  Int v = 0;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c < '0' || c > '9') throw InvalidInput("expected an integer, got '" + std::string(text) + "'");
    v = checked_mul(v, 10);
    v = neg ? checked_sub(v, c - '0') : checked_add(v, c - '0');
  }
  return v;
}

namespace {

constexpr std::uint32_t kSieveLimit = 1u << 16;

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kSieveLimit + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= kSieveLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t{i} * i; j <= kSieveLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return r;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Pollard-Brent; n must be an odd composite.
std::uint64_t find_factor(std::uint64_t n) {
  for (std::uint64_t c = 1;; ++c) {
    auto step = [&](std::uint64_t x) { return (mul_mod(x, x, n) + c) % n; };
    std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
    std::uint64_t r = 1;
    constexpr std::uint64_t kBatch = 128;
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = step(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(kBatch, r - k); ++i) {
          y = step(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = gcd_u64(q, n);
        k += kBatch;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = step(ys);
        g = gcd_u64(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split_large(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  std::uint64_t d = find_factor(n);
  split_large(d, out);
  split_large(n / d, out);
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

bool is_prime(Int n) {
  if (n < 2) return false;
  if (n > static_cast<Int>(UINT64_MAX)) throw InvalidInput("primality test supports n < 2^64 only");
  return is_prime(static_cast<std::uint64_t>(n));
}

PrimeFactorization PrimeFactorization::from_factors(std::vector<PrimePower> factors) {
  PrimeFactorization f;
  Int value = 1;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& pp = factors[i];
    if (pp.exponent < 1) throw InvalidInput("prime exponents must be >= 1");
    if (!is_prime(pp.prime)) throw InvalidInput(to_string(pp.prime) + " is not prime");
    if (i > 0 && factors[i - 1].prime >= pp.prime) throw InvalidInput("primes must be strictly ascending");
    value = checked_mul(value, checked_pow(pp.prime, pp.exponent));
  }
  f.factors_ = std::move(factors);
  f.value_ = value;
  return f;
}

Int PrimeFactorization::divisor_count() const {
  Int t = 1;
  for (const auto& pp : factors_) t = checked_mul(t, pp.exponent + 1);
  return t;
}

int PrimeFactorization::exponent_of(Int p) const {
  for (const auto& pp : factors_) {
    if (pp.prime == p) return pp.exponent;
  }
  return 0;
}

PrimeFactorization factorize(Int n) {
  if (n < 1) throw InvalidInput("factorize: n must be positive, got " + to_string(n));
  if (n > static_cast<Int>(UINT64_MAX)) throw InvalidInput("factorize: n must be below 2^64");
  auto rest = static_cast<std::uint64_t>(n);
  std::vector<PrimePower> factors;
  for (std::uint32_t p : small_primes()) {
    if (std::uint64_t{p} * p > rest) break;
    if (rest % p != 0) continue;
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    factors.push_back({p, e});
  }
  if (rest > 1) {
    std::vector<std::uint64_t> large;
    split_large(rest, large);
    std::sort(large.begin(), large.end());
    for (std::uint64_t p : large) {
      if (!factors.empty() && factors.back().prime == p) {
        ++factors.back().exponent;
      } else {
        factors.push_back({p, 1});
      }
    }
  }
  return PrimeFactorization::from_factors(std::move(factors));
}

Int phi(const PrimeFactorization& f) {
  Int r = 1;
  for (const auto& pp : f.factors()) {
    r = checked_mul(r, checked_mul(checked_pow(pp.prime, pp.exponent - 1), pp.prime - 1));
  }
  return r;
}

int mu(const PrimeFactorization& f) {
  int sign = 1;
  for (const auto& pp : f.factors()) {
    if (pp.exponent >= 2) return 0;
    sign = -sign;
  }
  return sign;
}

std::vector<Int> divisors(const PrimeFactorization& f) {
  std::vector<Int> out{1};
  for (const auto& pp : f.factors()) {
    std::size_t base = out.size();
    Int power = 1;
    for (int e = 1; e <= pp.exponent; ++e) {
      power = checked_mul(power, pp.prime);
      for (std::size_t i = 0; i < base; ++i) out.push_back(checked_mul(out[i], power));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Int> primes_in(Int lo, Int hi) {
  if (lo > hi) throw InvalidInput("primes_in: lo must not exceed hi");
  std::vector<Int> out;
  if (hi < 2) return out;
  if (lo < 2) lo = 2;
  if (hi > static_cast<Int>(UINT64_MAX)) throw InvalidInput("primes_in: hi must be below 2^64");
  constexpr Int kMaxSpan = 100'000'000;
  if (hi - lo > kMaxSpan) throw GuardExceeded("primes_in: interval wider than 1e8");

  auto low = static_cast<std::uint64_t>(lo);
  auto high = static_cast<std::uint64_t>(hi);
  auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(high)));
  while (root * root > high) --root;
  while ((root + 1) * (root + 1) <= high) ++root;

  if (root > kSieveLimit) {
    // Sparse fallback: test each candidate.
    for (std::uint64_t x = low;; ++x) {
      if (is_prime(x)) out.push_back(x);
      if (x == high) break;
    }
    return out;
  }
  std::vector<bool> composite(high - low + 1, false);
  for (std::uint32_t p : small_primes()) {
    if (p > root) break;
    std::uint64_t start = std::max<std::uint64_t>(std::uint64_t{p} * p, (low + p - 1) / p * p);
    for (std::uint64_t j = start; j <= high; j += p) composite[j - low] = true;
  }
  for (std::uint64_t x = low; x <= high; ++x) {
    if (!composite[x - low]) out.push_back(x);
  }
  return out;
}

PrimeFactorization factorize_divisor(const PrimeFactorization& f, Int d) {
  if (d < 1 || f.value() % d != 0) {
    throw InvalidInput(to_string(d) + " does not divide " + to_string(f.value()));
  }
  std::vector<PrimePower> out;
  for (const auto& pp : f.factors()) {
    int e = 0;
    while (d % pp.prime == 0) {
      d /= pp.prime;
      ++e;
    }
    if (e > 0) out.push_back({pp.prime, e});
  }
  return PrimeFactorization::from_factors(std::move(out));
}

}  // namespace icg
