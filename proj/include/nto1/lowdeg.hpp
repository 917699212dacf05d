#pragma once

// 3-to-1 maps of degree at most 4: closed forms for cubics and an exhaustive
// (or sampled) search over normalized quartics x^4 + a x^3 + b x^2 + c x.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "nto1/error.hpp"
#include "nto1/ff_core.hpp"
#include "nto1/nto1_check.hpp"
#include "nto1/poly.hpp"

namespace nto1 {

inline constexpr std::uint64_t kQuarticExhaustiveLimit = 10'000'000;  // q^4 evaluations
inline constexpr std::uint64_t kQuarticSamples = 100'000;
inline constexpr std::uint64_t kQuarticMaxOrder = 343;

/// x^3 + a x^2 + b x, or x^3 + b x when a is absent.
struct CubicSpec {
  Field field;
  std::optional<Element> a;
  Element b;

  PolyMap poly() const {
    std::vector<Term> t{{3, field.one()}, {1, b}};
    if (a) t.push_back({2, *a});
    return PolyMap::from_terms(field, t);
  }
};

inline bool is_nonzero_square(const Field& F, const Element& x) {
  if (F.is_zero(x)) return false;
  if (F.p() == 2) return true;
  return F.pow(x, (F.order() - 1) / 2) == F.one();
}

/// Characteristic 3: 3-to-1 iff a = 0 and -b is a nonzero square.
inline bool cubic_char3_is3to1(const Field& F, const Element& a, const Element& b) {
  if (F.p() != 3) fail(ErrorKind::WrongCharacteristic, "cubic_char3_is3to1 needs p = 3");
  F.check(a);
  F.check(b);
  return F.is_zero(a) && is_nonzero_square(F, F.neg(b));
}

/// p != 3: x^3 + b x is 3-to-1 iff b = 0 and either p = 2 with m even or
/// p > 3 with 3 | p^m - 1.
inline bool cubic_charne3_is3to1(const Field& F, const Element& b) {
  if (F.p() == 3) fail(ErrorKind::WrongCharacteristic, "cubic_charne3_is3to1 needs p != 3");
  F.check(b);
  if (!F.is_zero(b)) return false;
  if (F.p() == 2) return F.m() % 2 == 0;
  return (F.order() - 1) % 3 == 0;
}

inline bool cubic_predicted(const CubicSpec& s) {
  if (s.field.p() == 3) return cubic_char3_is3to1(s.field, s.a.value_or(s.field.zero()), s.b);
  if (s.a && !s.field.is_zero(*s.a)) fail(ErrorKind::InvalidArgument, "x^2 term must vanish when p != 3");
  return cubic_charne3_is3to1(s.field, s.b);
}

struct CubicRow {
  std::uint64_t a = 0;  // code; always 0 when p != 3
  std::uint64_t b = 0;
  bool predicted = false;
  bool brute_force = false;
  bool agree() const { return predicted == brute_force; }
};

/// Every normalized cubic over F: all (a, b) in characteristic 3, all b otherwise.
inline std::vector<CubicRow> cubic_sweep(const Field& F) {
  const std::uint64_t q = F.order();
  const std::uint64_t a_range = F.p() == 3 ? q : 1;
  std::vector<CubicRow> rows;
  rows.reserve(a_range * q);
  for (std::uint64_t a = 0; a < a_range; ++a) {
    for (std::uint64_t b = 0; b < q; ++b) {
      CubicSpec s{F, F.p() == 3 ? std::optional<Element>(F.from_code(a)) : std::nullopt, F.from_code(b)};
      rows.push_back({a, b, cubic_predicted(s), is_n_to_one(code_histogram(s.poly().value_codes(), q), 3)});
    }
  }
  return rows;
}

struct QuarticSearch {
  std::vector<std::array<std::uint64_t, 3>> hits;  // (a, b, c) as codes
  bool sampled = false;
  std::uint64_t triples_checked = 0;
};

namespace detail {

class QuarticScan {
 public:
  explicit QuarticScan(const Field& F) : ops_(F), q_(F.order()), x2_(q_), x3_(q_), x4_(q_), count_(q_, 0) {
    for (std::uint64_t x = 0; x < q_; ++x) {
      x2_[x] = ops_.mul(x, x);
      x3_[x] = ops_.mul(x2_[x], x);
      x4_[x] = ops_.mul(x3_[x], x);
    }
    t1_.resize(q_);
    t2_.resize(q_);
  }

  void set_a(std::uint64_t a) {
    for (std::uint64_t x = 0; x < q_; ++x) t1_[x] = ops_.add(x4_[x], ops_.mul(a, x3_[x]));
  }

  void set_b(std::uint64_t b) {
    for (std::uint64_t x = 0; x < q_; ++x) t2_[x] = ops_.add(t1_[x], ops_.mul(b, x2_[x]));
  }

  /// Whether x^4 + a x^3 + b x^2 + c x is 3-to-1 for the current a, b.
  bool three_to_one(std::uint64_t c) {
    touched_.clear();
    bool ok = true;
    for (std::uint64_t x = 0; x < q_; ++x) {
      const std::uint64_t y = ops_.add(t2_[x], ops_.mul(c, x));
      if (count_[y]++ == 0) touched_.push_back(y);
      if (count_[y] > 3) {
        ok = false;
        break;
      }
    }
    if (ok) {
      std::uint64_t short_values = 0;
      for (auto y : touched_)
        if (count_[y] != 3) ++short_values;
      ok = q_ % 3 == 0 ? short_values == 0 : short_values == 1;
      if (ok && q_ % 3 != 0) {
        for (auto y : touched_)
          if (count_[y] != 3 && count_[y] != q_ % 3) ok = false;
      }
    }
    for (auto y : touched_) count_[y] = 0;
    return ok;
  }

 private:
  CodeOps ops_;
  std::uint64_t q_;
  std::vector<std::uint64_t> x2_, x3_, x4_, t1_, t2_;
  std::vector<std::uint32_t> count_;
  std::vector<std::uint64_t> touched_;
};

}  // namespace detail

/// All 3-to-1 quartics x^4 + a x^3 + b x^2 + c x over F.  Exhaustive while
/// q^4 < 10^7, otherwise 10^5 random triples (sampled = true).
inline QuarticSearch quartic_3to1_search(const Field& F, unsigned workers = 0, std::uint64_t seed = 1) {
  const std::uint64_t q = F.order();
  if (q > kQuarticMaxOrder) fail(ErrorKind::DomainTooLarge, "quartic search limited to q <= 343");
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  QuarticSearch out;
  out.sampled = q * q * q * q >= kQuarticExhaustiveLimit;

  std::vector<std::vector<std::array<std::uint64_t, 3>>> parts(workers);
  std::vector<std::thread> pool;
  std::vector<std::array<std::uint64_t, 3>> samples;
  if (!out.sampled) {
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        detail::QuarticScan scan(F);
        for (std::uint64_t a = w; a < q; a += workers) {
          scan.set_a(a);
          for (std::uint64_t b = 0; b < q; ++b) {
            scan.set_b(b);
            for (std::uint64_t c = 0; c < q; ++c)
              if (scan.three_to_one(c)) parts[w].push_back({a, b, c});
          }
        }
      });
    }
    out.triples_checked = q * q * q;
  } else {
    samples.resize(kQuarticSamples);
    std::mt19937_64 rng(seed);
    for (auto& s : samples) s = {rng() % q, rng() % q, rng() % q};
    std::sort(samples.begin(), samples.end());
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        detail::QuarticScan scan(F);
        const std::size_t lo = samples.size() * w / workers;
        const std::size_t hi = samples.size() * (w + 1) / workers;
        std::optional<std::uint64_t> cur_a, cur_b;
        for (std::size_t i = lo; i < hi; ++i) {
          const auto [a, b, c] = samples[i];
          if (cur_a != a) {
            scan.set_a(a);
            cur_a = a;
            cur_b.reset();
          }
          if (cur_b != b) {
            scan.set_b(b);
            cur_b = b;
          }
          if (scan.three_to_one(c)) parts[w].push_back({a, b, c});
        }
      });
    }
    out.triples_checked = kQuarticSamples;
  }
  for (auto& t : pool) t.join();
  for (auto& part : parts) out.hits.insert(out.hits.end(), part.begin(), part.end());
  std::sort(out.hits.begin(), out.hits.end());
  out.hits.erase(std::unique(out.hits.begin(), out.hits.end()), out.hits.end());
  return out;
}

}  // namespace nto1
