#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "nto1/error.hpp"

namespace nto1 {

// Trial division; p is capped at 2^31 so this stays cheap.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

/// Distinct prime factors in increasing order.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline std::uint64_t checked_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base)
      fail(ErrorKind::FieldTooLarge, "integer power overflows 64 bits");
    r *= base;
  }
  return r;
}

/// If n = base^k for some k >= 0 returns k, otherwise -1.
inline int exact_log(std::uint64_t n, std::uint64_t base) {
  if (n == 0 || base < 2) return -1;
  int k = 0;
  while (n % base == 0) {
    n /= base;
    ++k;
  }
  return n == 1 ? k : -1;
}

inline std::uint64_t mod_sub(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + p - b;
}

inline std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  b %= p;
  while (e) {
    if (e & 1) r = static_cast<std::uint64_t>((unsigned __int128)r * b % p);
    b = static_cast<std::uint64_t>((unsigned __int128)b * b % p);
    e >>= 1;
  }
  return r;
}

inline std::uint64_t mod_inv(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) fail(ErrorKind::DivisionByZero, "inverse of 0 mod p");
  return mod_pow(a, p - 2, p);
}

/// Reduce a signed exponent into [0, modulus).
inline std::uint64_t reduce_exponent(std::int64_t e, std::uint64_t modulus) {
  const auto m = static_cast<std::int64_t>(modulus);
  std::int64_t r = e % m;
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

}  // namespace nto1
