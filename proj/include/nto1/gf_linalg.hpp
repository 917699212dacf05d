#pragma once

// Exact dense linear algebra over any field given through an "ops" object:
//   value_type, zero(), one(), add, sub, mul, inv, is_zero.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "nto1/error.hpp"
#include "nto1/numeric.hpp"

namespace nto1 {

template <class T>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, const T& fill) : rows(r), cols(c), data(r * c, fill) {}

  T& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Arithmetic in Z/pZ on plain integers.
struct PrimeFieldOps {
  using value_type = std::uint64_t;
  std::uint64_t p;

  value_type zero() const { return 0; }
  value_type one() const { return 1 % p; }
  value_type add(value_type a, value_type b) const { return (a + b) % p; }
  value_type sub(value_type a, value_type b) const { return mod_sub(a, b, p); }
  value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>((unsigned __int128)a * b % p);
  }
  value_type inv(value_type a) const { return mod_inv(a, p); }
  bool is_zero(value_type a) const { return a % p == 0; }
};

/// Gauss-Jordan elimination to reduced row echelon form.  Returns the pivot
/// column of each pivot row; its size is the rank.
template <class Ops>
std::vector<std::size_t> row_reduce(const Ops& ops, Matrix<typename Ops::value_type>& a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols && row < a.rows; ++col) {
    std::size_t sel = row;
    while (sel < a.rows && ops.is_zero(a(sel, col))) ++sel;
    if (sel == a.rows) continue;
    if (sel != row)
      for (std::size_t j = 0; j < a.cols; ++j) std::swap(a(sel, j), a(row, j));
    const auto inv = ops.inv(a(row, col));
    for (std::size_t j = col; j < a.cols; ++j) a(row, j) = ops.mul(a(row, j), inv);
    for (std::size_t i = 0; i < a.rows; ++i) {
      if (i == row || ops.is_zero(a(i, col))) continue;
      const auto factor = a(i, col);
      for (std::size_t j = col; j < a.cols; ++j)
        a(i, j) = ops.sub(a(i, j), ops.mul(factor, a(row, j)));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class Ops>
std::size_t rank(const Ops& ops, Matrix<typename Ops::value_type> a) {
  return row_reduce(ops, a).size();
}

/// Solves A x = b for square A; nullopt when A is singular.
template <class Ops>
std::optional<std::vector<typename Ops::value_type>> solve(const Ops& ops,
                                                           const Matrix<typename Ops::value_type>& a,
                                                           const std::vector<typename Ops::value_type>& b) {
  using T = typename Ops::value_type;
  if (a.rows != a.cols || b.size() != a.rows)
    fail(ErrorKind::InvalidArgument, "solve needs a square system");
  const std::size_t n = a.rows;
  Matrix<T> aug(n, n + 1, ops.zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  const auto pivots = row_reduce(ops, aug);
  if (pivots.size() < n || pivots.back() >= n) return std::nullopt;
  std::vector<T> x(n, ops.zero());
  for (std::size_t i = 0; i < n; ++i) x[i] = aug(i, n);
  return x;
}

template <class Ops>
std::optional<Matrix<typename Ops::value_type>> inverse(const Ops& ops,
                                                        const Matrix<typename Ops::value_type>& a) {
  using T = typename Ops::value_type;
  if (a.rows != a.cols) fail(ErrorKind::InvalidArgument, "inverse needs a square matrix");
  const std::size_t n = a.rows;
  Matrix<T> aug(n, 2 * n, ops.zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = ops.one();
  }
  const auto pivots = row_reduce(ops, aug);
  if (pivots.size() < n || pivots.back() >= n) return std::nullopt;
  Matrix<T> out(n, n, ops.zero());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
  return out;
}

}  // namespace nto1
