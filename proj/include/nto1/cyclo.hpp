#pragma once

// Z[w] for w a primitive p-th root of unity.
//
// Coefficients are stored for w^0 .. w^(p-2); the w^(p-1) coefficient is
// eliminated with 1 + w + ... + w^(p-1) = 0, which makes the form canonical.

#include <cstdint>
#include <string>
#include <vector>

#include "nto1/error.hpp"

namespace nto1 {

class CycloInt {
 public:
  CycloInt() = default;
  explicit CycloInt(std::uint64_t p) : p_(p), c_(p - 1, 0) {
    if (p < 2) fail(ErrorKind::InvalidArgument, "p must be at least 2");
  }

  static CycloInt integer(std::uint64_t p, std::int64_t n) {
    CycloInt r(p);
    r.c_[0] = n;
    return r;
  }

  static CycloInt omega_power(std::uint64_t p, std::uint64_t k) {
    std::vector<std::int64_t> g(p, 0);
    g[k % p] = 1;
    return from_group_ring(p, g);
  }

  /// Image of sum_t g[t] X^t under Z[C_p] -> Z[w].
  static CycloInt from_group_ring(std::uint64_t p, const std::vector<std::int64_t>& g) {
    if (g.size() != p) fail(ErrorKind::InvalidArgument, "group ring vector must have length p");
    CycloInt r(p);
    for (std::uint64_t t = 0; t + 1 < p; ++t) r.c_[t] = g[t] - g[p - 1];
    return r;
  }

  std::uint64_t p() const { return p_; }
  const std::vector<std::int64_t>& coeffs() const { return c_; }

  bool is_rational() const {
    for (std::size_t t = 1; t < c_.size(); ++t)
      if (c_[t]) return false;
    return true;
  }

  std::int64_t rational_value() const {
    if (!is_rational()) fail(ErrorKind::InvalidArgument, "not a rational integer");
    return c_.empty() ? 0 : c_[0];
  }

  friend CycloInt operator+(const CycloInt& a, const CycloInt& b) {
    same_p(a, b);
    CycloInt r(a.p_);
    for (std::size_t t = 0; t < r.c_.size(); ++t) r.c_[t] = a.c_[t] + b.c_[t];
    return r;
  }

  friend CycloInt operator-(const CycloInt& a, const CycloInt& b) {
    same_p(a, b);
    CycloInt r(a.p_);
    for (std::size_t t = 0; t < r.c_.size(); ++t) r.c_[t] = a.c_[t] - b.c_[t];
    return r;
  }

  friend CycloInt operator*(const CycloInt& a, const CycloInt& b) {
    same_p(a, b);
    const std::uint64_t p = a.p_;
    std::vector<std::int64_t> g(p, 0);
    for (std::uint64_t i = 0; i + 1 < p; ++i) {
      if (!a.c_[i]) continue;
      for (std::uint64_t j = 0; j + 1 < p; ++j) g[(i + j) % p] += a.c_[i] * b.c_[j];
    }
    return from_group_ring(p, g);
  }

  friend bool operator==(const CycloInt& a, const CycloInt& b) { return a.p_ == b.p_ && a.c_ == b.c_; }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t t = 0; t < c_.size(); ++t) {
      if (t) s += ",";
      s += std::to_string(c_[t]);
    }
    return s + "]";
  }

 private:
  static void same_p(const CycloInt& a, const CycloInt& b) {
    if (a.p_ != b.p_) fail(ErrorKind::InvalidArgument, "cyclotomic integers for different p");
  }

  std::uint64_t p_ = 2;
  std::vector<std::int64_t> c_{0};
};

}  // namespace nto1
