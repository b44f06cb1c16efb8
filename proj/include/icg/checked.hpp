// Checked 128-bit signed arithmetic.
//
// Every quantity in the library (N, divisors, phi values, eigenvalues,
// multiplicities) is an `Int`. Overflow throws ArithmeticOverflow instead of
// wrapping.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace icg {

using Int = __int128;

/// Raised when caller-supplied input violates an operation's precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a checked operation would leave the 128-bit range.
class ArithmeticOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Raised when an input exceeds a size guard (subset-sum length, tensor size...).
class GuardExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in addition");
  return r;
}

inline Int checked_sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in subtraction");
  return r;
}

inline Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in multiplication");
  return r;
}

inline Int checked_pow(Int base, int exp) {
  Int r = 1;
  for (int i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

inline Int abs_int(Int a) { return a < 0 ? checked_sub(0, a) : a; }

inline Int gcd_int(Int a, Int b) {
  a = abs_int(a);
  b = abs_int(b);
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// Narrowing with a range check; used at JSON and hot-loop boundaries.
inline std::int64_t to_i64(Int v) {
  if (v > INT64_MAX || v < INT64_MIN) throw ArithmeticOverflow("value does not fit in 64 bits");
  return static_cast<std::int64_t>(v);
}

std::string to_string(Int v);

/// Parses an optionally signed decimal integer. Throws InvalidInput on junk
/// and ArithmeticOverflow when out of range.
Int parse_int(std::string_view text);

}  // namespace icg
