#pragma once

// Walsh transforms W_F(u, v) = sum_x w^(tr(v F(x)) + tr(u x)) in exact Z[w],
// and the spectral n-to-1 test built from them.
//
// With N_b = #F^{-1}(b), sum_b N_b^j = p^(m - jm) S_j where
// S_j = sum over v_1 + ... + v_j = 0 of prod W_F(0, v_i).  Given phi(X) =
// sum_j A_j X^j with the right sign pattern on the integers, the value
// A_0 + sum_j A_j p^(m-jm) S_j hits its lower bound exactly for n-to-1 maps.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nto1/cyclo.hpp"
#include "nto1/error.hpp"
#include "nto1/ff_core.hpp"
#include "nto1/poly.hpp"

namespace nto1 {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::uint64_t kMaxWalshOrder = std::uint64_t{1} << 12;
inline constexpr std::size_t kMaxCharSumDegree = 3;
inline constexpr std::size_t kMaxPhiDegree = 8;

/// Group-ring form of W(0, v) for every v: row v holds #{x : tr(v F(x)) = t}.
struct WalshZeroTable {
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  std::vector<std::vector<std::int64_t>> counts;  // indexed by code(v), then t

  CycloInt at(std::uint64_t v) const { return CycloInt::from_group_ring(p, counts[v]); }
};

namespace detail {

inline std::vector<std::uint32_t> trace_by_code(const Field& F) {
  std::vector<std::uint32_t> tr(F.order());
  for (std::uint64_t c = 0; c < F.order(); ++c) tr[c] = F.abs_trace(F.from_code(c));
  return tr;
}

inline void check_walsh_size(const Field& F) {
  if (F.order() > kMaxWalshOrder) fail(ErrorKind::DomainTooLarge, "Walsh sums limited to fields of order 2^12");
}

}  // namespace detail

/// W_F(u, v) for F given by its value codes over the whole field.
inline CycloInt walsh(const Field& F, const std::vector<std::uint64_t>& values, const Element& u,
                      const Element& v) {
  detail::check_walsh_size(F);
  if (values.size() != F.order()) fail(ErrorKind::InvalidArgument, "need one value per field element");
  std::vector<std::int64_t> g(F.p(), 0);
  for (std::uint64_t x = 0; x < F.order(); ++x) {
    const Element fx = F.from_code(values[x]);
    const Element xe = F.from_code(x);
    const std::uint64_t t = (F.abs_trace(F.mul(v, fx)) + F.abs_trace(F.mul(u, xe))) % F.p();
    ++g[t];
  }
  return CycloInt::from_group_ring(F.p(), g);
}

inline CycloInt walsh(const PolyMap& f, const Element& u, const Element& v) {
  return walsh(f.field(), f.value_codes(), u, v);
}

inline WalshZeroTable walsh_zero_table(const Field& F, const std::vector<std::uint64_t>& values) {
  detail::check_walsh_size(F);
  if (values.size() != F.order()) fail(ErrorKind::InvalidArgument, "need one value per field element");
  const std::uint64_t q = F.order();
  const std::uint64_t p = F.p();
  CodeOps ops(F);
  const auto tr = detail::trace_by_code(F);
  std::vector<std::int64_t> image(q, 0);
  for (auto y : values) ++image[y];
  WalshZeroTable table{p, q, std::vector<std::vector<std::int64_t>>(q, std::vector<std::int64_t>(p, 0))};
  for (std::uint64_t v = 0; v < q; ++v) {
    auto& row = table.counts[v];
    for (std::uint64_t y = 0; y < q; ++y)
      if (image[y]) row[tr[ops.mul(v, y)]] += image[y];
  }
  return table;
}

/// S_j = sum_{v_1 + ... + v_j = 0} prod_i W(0, v_i), for j <= 3, as an exact
/// integer.  Works in Z[C_p]; the Z[w] image must be rational.
inline BigInt constrained_sum(const Field& F, const WalshZeroTable& W, std::size_t j) {
  const std::uint64_t p = W.p;
  const std::uint64_t q = W.q;
  CodeOps ops(F);
  std::vector<__int128> acc(p, 0);
  auto to_integer = [&]() -> BigInt {
    // rational iff all coefficients of w^1..w^(p-2) vanish after reduction
    for (std::uint64_t t = 1; t + 1 < p; ++t)
      if (acc[t] != acc[p - 1]) fail(ErrorKind::InvalidArgument, "constrained Walsh sum is not rational");
    const __int128 v = acc[0] - acc[p - 1];
    const bool neg = v < 0;
    unsigned __int128 mag = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    BigInt r = static_cast<std::uint64_t>(mag >> 64);
    r <<= 64;
    r += static_cast<std::uint64_t>(mag & 0xffffffffffffffffull);
    return neg ? BigInt(-r) : r;
  };
  switch (j) {
    case 0:
      return BigInt(1);
    case 1:
      for (std::uint64_t t = 0; t < p; ++t) acc[t] = W.counts[0][t];
      return to_integer();
    case 2:
      for (std::uint64_t v = 0; v < q; ++v) {
        const auto& a = W.counts[v];
        const auto& b = W.counts[ops.neg(v)];
        for (std::uint64_t s = 0; s < p; ++s) {
          if (!a[s]) continue;
          for (std::uint64_t t = 0; t < p; ++t) acc[(s + t) % p] += static_cast<__int128>(a[s]) * b[t];
        }
      }
      return to_integer();
    case 3: {
      // C2 = W(v1) * W(v2) in the group ring, then times W(-(v1+v2)).
      // Entries are bounded by q^3 per pair and p q^5 overall.
      std::vector<std::int64_t> c2(p);
      for (std::uint64_t v1 = 0; v1 < q; ++v1) {
        const auto& a = W.counts[v1];
        for (std::uint64_t v2 = 0; v2 < q; ++v2) {
          const auto& b = W.counts[v2];
          const auto& c = W.counts[ops.neg(ops.add(v1, v2))];
          std::fill(c2.begin(), c2.end(), 0);
          for (std::uint64_t s = 0; s < p; ++s) {
            if (!a[s]) continue;
            for (std::uint64_t t = 0; t < p; ++t) c2[(s + t) % p] += a[s] * b[t];
          }
          for (std::uint64_t s = 0; s < p; ++s) {
            if (!c2[s]) continue;
            for (std::uint64_t t = 0; t < p; ++t) acc[(s + t) % p] += static_cast<__int128>(c2[s]) * c[t];
          }
        }
      }
      return to_integer();
    }
    default:
      fail(ErrorKind::DegreeTooHigh, "constrained sums implemented for j <= 3");
  }
}

// --- gadgets -----------------------------------------------------------------------

enum class PhiMode { Nondivisor, Divisor };

struct PhiGadget {
  std::vector<Rational> A;  // phi(X) = sum_j A[j] X^j
  PhiMode mode = PhiMode::Nondivisor;
  std::uint64_t n = 0;      // target multiplicity
  std::uint64_t p = 0;
  unsigned m = 0;
  unsigned k = 0;           // divisor mode: n = p^k

  Rational eval(const Rational& X) const {
    Rational acc = 0;
    for (std::size_t j = A.size(); j-- > 0;) acc = acc * X + A[j];
    return acc;
  }

  /// The bound that the characterization sum reaches exactly for n-to-1 maps.
  int bound() const { return mode == PhiMode::Nondivisor ? 1 : 0; }
};

/// X (X - 2)^2 for 2-to-1 maps in odd characteristic.
inline PhiGadget phi1(std::uint64_t p, unsigned m) {
  return PhiGadget{{0, 4, -4, 1}, PhiMode::Nondivisor, 2, p, m, 0};
}

/// X (X - p^k)^2 for p^k-to-1 maps.
inline PhiGadget phi2(std::uint64_t p, unsigned m, unsigned k) {
  const Rational pk = Rational(BigInt(checked_pow(p, k)));
  return PhiGadget{{0, pk * pk, -2 * pk, 1}, PhiMode::Divisor, checked_pow(p, k), p, m, k};
}

struct PhiCheck {
  bool ok = true;
  std::optional<std::uint64_t> violating_x;
};

/// Checks the gadget's sign pattern at every integer in [0, p^m].
inline PhiCheck validate_phi(const PhiGadget& g) {
  if (g.A.size() > kMaxPhiDegree + 1) fail(ErrorKind::DegreeTooHigh, "phi limited to degree 8");
  const std::uint64_t q = checked_pow(g.p, g.m);
  const std::uint64_t t = g.mode == PhiMode::Nondivisor ? q % g.n : 0;
  for (std::uint64_t X = 0; X <= q; ++X) {
    const Rational v = g.eval(Rational(BigInt(X)));
    bool good;
    if (g.mode == PhiMode::Nondivisor) {
      if (X == 0 || X == g.n)
        good = v == 0;
      else if (X == t)
        good = v == 1;
      else
        good = v > 1;
    } else {
      if (X == 0 || X == g.n)
        good = v == 0;
      else
        good = v > 0;
    }
    if (!good) return {false, X};
  }
  return {};
}

/// A_0 + sum_{j >= 1} A_j p^(m - jm) S_j, exactly.
inline Rational char_sum(const Field& F, const std::vector<std::uint64_t>& values, const PhiGadget& g) {
  detail::check_walsh_size(F);
  if (g.A.size() > kMaxCharSumDegree + 1) fail(ErrorKind::DegreeTooHigh, "char_sum needs deg phi <= 3");
  const WalshZeroTable W = walsh_zero_table(F, values);
  const BigInt q = BigInt(F.order());
  Rational total = g.A.empty() ? Rational(0) : g.A[0];
  BigInt qpow = 1;  // q^(j-1)
  for (std::size_t j = 1; j < g.A.size(); ++j) {
    if (g.A[j] == 0) {
      qpow *= q;
      continue;
    }
    const BigInt S = constrained_sum(F, W, j);
    // p^(m - jm) = 1 / q^(j-1)
    total += g.A[j] * Rational(S, qpow);
    qpow *= q;
  }
  return total;
}

inline Rational char_sum(const PolyMap& f, const PhiGadget& g) { return char_sum(f.field(), f.value_codes(), g); }

inline bool spectral_verdict(const Field& F, const std::vector<std::uint64_t>& values, const PhiGadget& g) {
  return char_sum(F, values, g) == g.bound();
}

inline bool spectral_verdict(const PolyMap& f, const PhiGadget& g) {
  return spectral_verdict(f.field(), f.value_codes(), g);
}

inline std::string to_fraction_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

}  // namespace nto1
