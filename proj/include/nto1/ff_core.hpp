#pragma once

// GF(p^m) in the power basis of a monic irreducible modulus.
//
// A Field is a cheap handle onto immutable shared state; copies compare equal
// and share the lazily built discrete-log table.  Elements are plain values
// tagged with a fingerprint of (p, m, modulus) so that mixing elements of
// different fields is detected at the operation boundary.

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nto1/error.hpp"
#include "nto1/gf_linalg.hpp"
#include "nto1/numeric.hpp"

namespace nto1 {

inline constexpr std::size_t kMaxDegree = 24;
inline constexpr std::uint64_t kLogTableLimit = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 62;
inline constexpr std::uint64_t kMaxCharacteristic = std::uint64_t{1} << 31;

struct Element {
  std::uint64_t tag = 0;
  std::array<std::uint32_t, kMaxDegree> c{};

  friend bool operator==(const Element&, const Element&) = default;
};

namespace detail {

using ModPoly = std::vector<std::uint64_t>;  // low-to-high over Z/pZ

inline void trim(ModPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline ModPoly poly_mod(ModPoly a, const ModPoly& b, std::uint64_t p) {
  trim(a);
  const std::uint64_t lead_inv = mod_inv(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint64_t factor = static_cast<std::uint64_t>((unsigned __int128)a.back() * lead_inv % p);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i)
      a[shift + i] = mod_sub(a[shift + i], static_cast<std::uint64_t>((unsigned __int128)factor * b[i] % p), p);
    trim(a);
  }
  return a;
}

inline ModPoly poly_gcd(ModPoly a, ModPoly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    ModPoly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline std::uint64_t fingerprint(std::uint64_t p, unsigned m, const std::vector<std::uint32_t>& modulus) {
  // FNV-1a over the defining data; never zero so default elements never match.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  mix(p);
  mix(m);
  for (auto c : modulus) mix(c);
  return h == 0 ? 1 : h;
}

}  // namespace detail

class Field {
 public:
  /// Builds GF(p^m).  Without a modulus the lexicographically smallest monic
  /// irreducible is used, comparing (c_0, c_1, ..., c_{m-1}) with c_0 first.
  static Field make(std::uint64_t p, unsigned m,
                    std::optional<std::vector<std::uint32_t>> modulus = std::nullopt) {
    if (p >= kMaxCharacteristic) fail(ErrorKind::InvalidArgument, "characteristic must be below 2^31");
    if (!is_prime(p)) fail(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
    if (m < 1) fail(ErrorKind::DegreeMismatch, "extension degree must be at least 1");
    if (m > kMaxDegree) fail(ErrorKind::FieldTooLarge, "extension degree above " + std::to_string(kMaxDegree));
    std::uint64_t q = 1;
    for (unsigned i = 0; i < m; ++i) {
      if (q > kMaxOrder / p) fail(ErrorKind::FieldTooLarge, "field order above 2^62");
      q *= p;
    }

    if (modulus) {
      if (modulus->size() != m + 1 || modulus->back() != 1)
        fail(ErrorKind::DegreeMismatch, "modulus must be monic of degree " + std::to_string(m));
      for (auto c : *modulus)
        if (c >= p) fail(ErrorKind::InvalidArgument, "modulus coefficient out of range");
      auto impl = std::make_shared<Impl>(p, m, q, *modulus);
      if (!irreducible(*impl)) fail(ErrorKind::ReducibleModulus, "modulus is reducible over GF(p)");
      impl->finish();
      return Field(std::move(impl));
    }

    // Enumerate tails with c_0 as the most significant digit.
    std::vector<std::uint32_t> mod(m + 1, 0);
    mod[m] = 1;
    for (std::uint64_t idx = 0; idx < q; ++idx) {
      std::uint64_t rest = idx;
      for (unsigned i = 0; i < m; ++i) {
        mod[m - 1 - i] = static_cast<std::uint32_t>(rest % p);
        rest /= p;
      }
      if (m > 1 && mod[0] == 0) continue;
      auto impl = std::make_shared<Impl>(p, m, q, mod);
      if (!irreducible(*impl)) continue;
      impl->finish();
      return Field(std::move(impl));
    }
    fail(ErrorKind::ReducibleModulus, "no irreducible polynomial found");
  }

  std::uint64_t p() const { return impl_->p; }
  unsigned m() const { return impl_->m; }
  std::uint64_t order() const { return impl_->q; }
  const std::vector<std::uint32_t>& modulus() const { return impl_->modulus; }
  const Element& beta() const { return impl_->beta; }
  std::uint64_t tag() const { return impl_->tag; }

  friend bool operator==(const Field& a, const Field& b) {
    return a.impl_ == b.impl_ ||
           (a.p() == b.p() && a.m() == b.m() && a.modulus() == b.modulus());
  }

  // --- element construction / codec -------------------------------------

  Element zero() const { return blank(); }
  Element one() const { return from_int(1); }

  Element from_int(std::int64_t v) const {
    Element e = blank();
    const auto p = static_cast<std::int64_t>(impl_->p);
    std::int64_t r = v % p;
    if (r < 0) r += p;
    e.c[0] = static_cast<std::uint32_t>(r);
    return e;
  }

  Element from_coeffs(std::span<const std::int64_t> coeffs) const {
    if (coeffs.size() > m()) fail(ErrorKind::DegreeMismatch, "too many coefficients for this field");
    Element e = blank();
    const auto p = static_cast<std::int64_t>(impl_->p);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      std::int64_t r = coeffs[i] % p;
      if (r < 0) r += p;
      e.c[i] = static_cast<std::uint32_t>(r);
    }
    return e;
  }

  Element from_coeffs(std::initializer_list<std::int64_t> coeffs) const {
    std::vector<std::int64_t> v(coeffs);
    return from_coeffs(std::span<const std::int64_t>(v));
  }

  /// Codec order: code(x) = sum c_i p^i.
  Element from_code(std::uint64_t code) const {
    if (code >= impl_->q) fail(ErrorKind::InvalidArgument, "element code out of range");
    Element e = blank();
    for (unsigned i = 0; i < m(); ++i) {
      e.c[i] = static_cast<std::uint32_t>(code % impl_->p);
      code /= impl_->p;
    }
    return e;
  }

  std::uint64_t code(const Element& x) const {
    check(x);
    std::uint64_t r = 0;
    for (unsigned i = m(); i-- > 0;) r = r * impl_->p + x.c[i];
    return r;
  }

  std::vector<std::int64_t> coeffs(const Element& x) const {
    check(x);
    return std::vector<std::int64_t>(x.c.begin(), x.c.begin() + m());
  }

  /// The generator x of the power basis.
  Element x() const {
    if (m() == 1) return from_int(static_cast<std::int64_t>(mod_sub(0, impl_->modulus[0], impl_->p)));
    Element e = blank();
    e.c[1] = 1;
    return e;
  }

  /// All elements in codec order; cached for orders up to 2^20.
  const std::vector<Element>& elements() const {
    if (impl_->q > kLogTableLimit) fail(ErrorKind::DomainTooLarge, "field too large to enumerate");
    std::call_once(impl_->elements_once, [this] {
      impl_->all.reserve(impl_->q);
      for (std::uint64_t i = 0; i < impl_->q; ++i) impl_->all.push_back(from_code(i));
    });
    return impl_->all;
  }

  std::vector<Element> nonzero_elements() const {
    const auto& all = elements();
    return std::vector<Element>(all.begin() + 1, all.end());
  }

  bool is_zero(const Element& x) const {
    check(x);
    for (unsigned i = 0; i < m(); ++i)
      if (x.c[i]) return false;
    return true;
  }

  // --- arithmetic ----------------------------------------------------------

  Element add(const Element& a, const Element& b) const {
    check(a);
    check(b);
    Element r = blank();
    const auto p = impl_->p;
    for (unsigned i = 0; i < m(); ++i) {
      std::uint64_t s = std::uint64_t{a.c[i]} + b.c[i];
      r.c[i] = static_cast<std::uint32_t>(s >= p ? s - p : s);
    }
    return r;
  }

  Element sub(const Element& a, const Element& b) const {
    check(a);
    check(b);
    Element r = blank();
    for (unsigned i = 0; i < m(); ++i)
      r.c[i] = static_cast<std::uint32_t>(mod_sub(a.c[i], b.c[i], impl_->p));
    return r;
  }

  Element neg(const Element& a) const { return sub(zero(), a); }

  Element mul(const Element& a, const Element& b) const {
    check(a);
    check(b);
    const unsigned n = m();
    const std::uint64_t p = impl_->p;
    std::array<std::uint64_t, 2 * kMaxDegree> t{};
    if (p < (1u << 16)) {
      // products < 2^32, at most kMaxDegree of them per slot
      for (unsigned i = 0; i < n; ++i) {
        if (!a.c[i]) continue;
        for (unsigned j = 0; j < n; ++j) t[i + j] += std::uint64_t{a.c[i]} * b.c[j];
      }
      for (unsigned i = 0; i + 1 < 2 * n; ++i) t[i] %= p;
    } else {
      for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) t[i + j] = (t[i + j] + std::uint64_t{a.c[i]} * b.c[j] % p) % p;
    }
    const auto& negmod = impl_->neg_modulus;
    for (unsigned d = 2 * n - 2; d >= n && d < 2 * n; --d) {
      const std::uint64_t c = t[d];
      if (!c) continue;
      for (unsigned k = 0; k < n; ++k)
        t[d - n + k] = (t[d - n + k] + c * negmod[k]) % p;
      t[d] = 0;
    }
    Element r = blank();
    for (unsigned i = 0; i < n; ++i) r.c[i] = static_cast<std::uint32_t>(t[i]);
    return r;
  }

  Element scale(const Element& a, std::int64_t k) const { return mul(from_int(k), a); }

  Element pow(const Element& a, std::uint64_t e) const {
    check(a);
    if (e == 0) return one();
    if (is_zero(a)) return zero();
    e %= (impl_->q - 1);
    if (e == 0) return one();
    Element base = a;
    Element r = one();
    while (e) {
      if (e & 1) r = mul(r, base);
      e >>= 1;
      if (e) base = mul(base, base);
    }
    return r;
  }

  /// Signed exponent, reduced mod q-1; the base must be nonzero for e < 0.
  Element pow_signed(const Element& a, std::int64_t e) const {
    if (e >= 0) return pow(a, static_cast<std::uint64_t>(e));
    if (is_zero(a)) fail(ErrorKind::DivisionByZero, "negative power of zero");
    return pow(a, reduce_exponent(e, impl_->q - 1));
  }

  Element inv(const Element& a) const {
    if (is_zero(a)) fail(ErrorKind::DivisionByZero, "inverse of zero");
    return pow(a, impl_->q - 2);
  }

  Element div(const Element& a, const Element& b) const { return mul(a, inv(b)); }

  /// x -> x^(p^k)
  Element frobenius(const Element& a, unsigned k) const {
    Element r = a;
    for (unsigned i = 0; i < k % m(); ++i) r = pow(r, impl_->p);
    return r;
  }

  std::uint64_t multiplicative_order(const Element& a) const {
    if (is_zero(a)) fail(ErrorKind::ZeroInput, "zero has no multiplicative order");
    std::uint64_t ord = impl_->q - 1;
    for (auto r : impl_->group_primes) {
      while (ord % r == 0 && pow(a, ord / r) == one()) ord /= r;
    }
    return ord;
  }

  // --- traces and subfields ------------------------------------------------

  /// tr_{p^m / p^k}(x) as an element of this field (it lies in GF(p^k)).
  Element trace_to(const Element& x, unsigned k) const {
    if (k == 0 || m() % k != 0) fail(ErrorKind::InvalidArgument, "subfield degree must divide m");
    Element acc = zero();
    Element y = x;
    for (unsigned i = 0; i < m() / k; ++i) {
      acc = add(acc, y);
      y = frobenius(y, k);
    }
    return acc;
  }

  /// Absolute trace into Z/pZ, computed from the traces of the basis.
  std::uint32_t abs_trace(const Element& x) const {
    check(x);
    std::uint64_t s = 0;
    const auto p = impl_->p;
    for (unsigned i = 0; i < m(); ++i) s = (s + std::uint64_t{x.c[i]} * impl_->basis_trace[i]) % p;
    return static_cast<std::uint32_t>(s);
  }

  bool in_subfield(const Element& x, unsigned k) const {
    if (k == 0 || m() % k != 0) fail(ErrorKind::InvalidArgument, "subfield degree must divide m");
    return frobenius(x, k) == x;
  }

  /// GF(p^k) inside this field, in codec order.
  std::vector<Element> subfield_elements(unsigned k) const {
    if (k == 0 || m() % k != 0) fail(ErrorKind::InvalidArgument, "subfield degree must divide m");
    const std::uint64_t qs = checked_pow(p(), k);
    const Element gamma = pow(beta(), (order() - 1) / (qs - 1));
    std::vector<Element> out{zero()};
    Element y = one();
    for (std::uint64_t j = 0; j + 1 < qs; ++j) {
      out.push_back(y);
      y = mul(y, gamma);
    }
    std::sort(out.begin(), out.end(), [&](const Element& a, const Element& b) { return code(a) < code(b); });
    return out;
  }

  // --- discrete logs and power classes -------------------------------------

  /// Exponent and log tables over element codes, built once on first use.
  /// exp[t] = code(beta^t) for 0 <= t < q-1; log[code(x)] = t (log[0] unused).
  struct CodeTables {
    std::vector<std::uint32_t> exp;
    std::vector<std::uint32_t> log;
  };

  bool has_tables() const { return impl_->q <= kLogTableLimit; }

  const CodeTables& tables() const {
    if (!has_tables()) fail(ErrorKind::FieldTooLarge, "log table gated at 2^20 elements");
    std::call_once(impl_->log_once, [this] {
      auto& t = impl_->tables;
      t.exp.assign(impl_->q - 1, 0);
      t.log.assign(impl_->q, 0);
      Element y = one();
      for (std::uint64_t i = 0; i + 1 < impl_->q; ++i) {
        const auto c = static_cast<std::uint32_t>(code(y));
        t.exp[i] = c;
        t.log[c] = static_cast<std::uint32_t>(i);
        y = mul(y, beta());
      }
    });
    return impl_->tables;
  }

  std::uint64_t discrete_log(const Element& x) const {
    if (is_zero(x)) fail(ErrorKind::ZeroInput, "log of zero");
    if (!has_tables()) fail(ErrorKind::FieldTooLarge, "log table gated at 2^20 elements");
    return tables().log[code(x)];
  }

  /// j such that x^((q-1)/g) = w^j with w = beta^((q-1)/g), g = gcd(k, q-1).
  std::uint64_t power_class(const Element& x, std::uint64_t k) const {
    if (k == 0) fail(ErrorKind::InvalidArgument, "power class index must be positive");
    if (is_zero(x)) fail(ErrorKind::ZeroInput, "power class of zero");
    const std::uint64_t g = std::gcd(k, impl_->q - 1);
    if (g == 1) return 0;
    if (impl_->q <= kLogTableLimit && g > 64) return discrete_log(x) % g;
    const Element y = pow(x, (impl_->q - 1) / g);
    const Element w = pow(beta(), (impl_->q - 1) / g);
    Element acc = one();
    for (std::uint64_t j = 0; j < g; ++j) {
      if (acc == y) return j;
      acc = mul(acc, w);
    }
    fail(ErrorKind::InvalidArgument, "power class not found; beta is not primitive");
  }

  /// Whether x is a nonzero k-th power within the subfield GF(p^sub_degree).
  bool is_subfield_power(const Element& x, unsigned sub_degree, std::uint64_t k) const {
    if (!in_subfield(x, sub_degree)) fail(ErrorKind::InvalidArgument, "element not in the subfield");
    if (is_zero(x)) return false;
    const std::uint64_t qs = checked_pow(p(), sub_degree);
    const std::uint64_t g = std::gcd(k, qs - 1);
    return pow(x, (qs - 1) / g) == one();
  }

  void check(const Element& x) const {
    if (x.tag != impl_->tag) fail(ErrorKind::FieldMismatch, "element belongs to a different field");
  }

 private:
  struct Impl {
    std::uint64_t p;
    unsigned m;
    std::uint64_t q;
    std::vector<std::uint32_t> modulus;
    std::array<std::uint64_t, kMaxDegree> neg_modulus{};
    std::uint64_t tag;
    Element beta;
    std::vector<std::uint64_t> group_primes;
    std::array<std::uint32_t, kMaxDegree> basis_trace{};

    mutable std::once_flag log_once;
    mutable CodeTables tables;
    mutable std::once_flag elements_once;
    mutable std::vector<Element> all;

    Impl(std::uint64_t p_, unsigned m_, std::uint64_t q_, std::vector<std::uint32_t> mod)
        : p(p_), m(m_), q(q_), modulus(std::move(mod)), tag(detail::fingerprint(p_, m_, modulus)) {
      for (unsigned k = 0; k < m; ++k) neg_modulus[k] = mod_sub(0, modulus[k], p);
    }

    // Needs a Field view over this Impl; called once the modulus is accepted.
    void finish();
  };

  explicit Field(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  explicit Field(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

  Element blank() const {
    Element e;
    e.tag = impl_->tag;
    return e;
  }

  // gcd(modulus, x^(p^i) - x) = 1 for 1 <= i <= m/2.
  static bool irreducible(const Impl& impl) {
    if (impl.m == 1) return true;
    Field ring(std::shared_ptr<const Impl>(&impl, [](const Impl*) {}));
    const Element x = ring.x();
    Element xp = x;
    detail::ModPoly f(impl.modulus.begin(), impl.modulus.end());
    for (unsigned i = 1; i <= impl.m / 2; ++i) {
      xp = ring.pow(xp, impl.p);
      const Element d = ring.sub(xp, x);
      detail::ModPoly g(d.c.begin(), d.c.begin() + impl.m);
      detail::trim(g);
      if (g.empty()) return false;
      if (detail::poly_gcd(f, g, impl.p).size() > 1) return false;
    }
    return true;
  }

  std::shared_ptr<const Impl> impl_;
};

inline void Field::Impl::finish() {
  group_primes = prime_factors(q - 1);
  Field view(std::shared_ptr<const Impl>(this, [](const Impl*) {}));
  // basis traces: tr(X^i) via repeated Frobenius
  for (unsigned i = 0; i < m; ++i) {
    Element basis = view.blank();
    basis.c[i] = 1;
    Element acc = view.zero();
    Element y = basis;
    for (unsigned j = 0; j < m; ++j) {
      acc = view.add(acc, y);
      y = view.pow(y, p);
    }
    basis_trace[i] = acc.c[0];
  }
  if (q == 2) {
    beta = view.one();
    return;
  }
  for (std::uint64_t code = 1; code < q; ++code) {
    Element cand = view.from_code(code);
    bool primitive = true;
    for (auto r : group_primes) {
      if (view.pow(cand, (q - 1) / r) == view.one()) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      beta = cand;
      return;
    }
  }
  fail(ErrorKind::InvalidArgument, "no primitive element found");
}

/// Arithmetic directly on element codes through the exp/log tables, for the
/// exhaustive loops.  Only valid for fields small enough to have tables.
class CodeOps {
 public:
  explicit CodeOps(const Field& field)
      : field_(field), t_(&field.tables()), p_(field.p()), m_(field.m()), n_(field.order() - 1) {
    pw_[0] = 1;
    for (unsigned i = 1; i <= m_; ++i) pw_[i] = pw_[i - 1] * p_;
  }

  const Field& field() const { return field_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    if (p_ == 2) return a ^ b;
    std::uint64_t r = 0;
    for (unsigned i = 0; i < m_; ++i) {
      std::uint64_t s = a % p_ + b % p_;
      if (s >= p_) s -= p_;
      r += s * pw_[i];
      a /= p_;
      b /= p_;
    }
    return r;
  }

  std::uint64_t neg(std::uint64_t a) const {
    if (p_ == 2) return a;
    std::uint64_t r = 0;
    for (unsigned i = 0; i < m_; ++i) {
      const std::uint64_t d = a % p_;
      r += (d ? p_ - d : 0) * pw_[i];
      a /= p_;
    }
    return r;
  }

  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return add(a, neg(b)); }

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    if (!a || !b) return 0;
    std::uint64_t e = std::uint64_t{t_->log[a]} + t_->log[b];
    if (e >= n_) e -= n_;
    return t_->exp[e];
  }

  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
    if (e == 0) return 1;
    if (!a) return 0;
    return t_->exp[static_cast<std::uint64_t>((unsigned __int128)t_->log[a] * (e % n_) % n_)];
  }

  std::uint64_t inv(std::uint64_t a) const {
    if (!a) fail(ErrorKind::DivisionByZero, "inverse of zero");
    return t_->exp[(n_ - t_->log[a]) % n_];
  }

  std::uint64_t log(std::uint64_t a) const {
    if (!a) fail(ErrorKind::ZeroInput, "log of zero");
    return t_->log[a];
  }

  std::uint64_t exp(std::uint64_t t) const { return t_->exp[t % n_]; }

 private:
  Field field_;
  const Field::CodeTables* t_;
  std::uint64_t p_;
  unsigned m_;
  std::uint64_t n_;
  std::array<std::uint64_t, kMaxDegree + 1> pw_{};
};

/// GF(p^k) sitting inside GF(p^m) through a fixed root of the small modulus.
class SubfieldEmbed {
 public:
  SubfieldEmbed(Field big, Field sub) : big_(std::move(big)), sub_(std::move(sub)) {
    if (big_.p() != sub_.p()) fail(ErrorKind::FieldMismatch, "characteristics differ");
    if (big_.m() % sub_.m() != 0) fail(ErrorKind::InvalidArgument, "subfield degree must divide m");
    const unsigned k = sub_.m();
    const unsigned m = big_.m();

    // first root, in powers of gamma, of the subfield modulus
    const std::uint64_t qs = sub_.order();
    const Element gamma = big_.pow(big_.beta(), (big_.order() - 1) / (qs - 1));
    auto eval_modulus = [&](const Element& t) {
      Element acc = big_.zero();
      const auto& mod = sub_.modulus();
      for (std::size_t i = mod.size(); i-- > 0;) acc = big_.add(big_.mul(acc, t), big_.from_int(mod[i]));
      return acc;
    };
    bool found = false;
    if (k == 1) {
      theta_ = big_.from_int(static_cast<std::int64_t>(mod_sub(0, sub_.modulus()[0], sub_.p())));
      found = true;
    } else {
      Element t = gamma;
      for (std::uint64_t j = 1; j + 1 < qs && !found; ++j) {
        if (big_.is_zero(eval_modulus(t))) {
          theta_ = t;
          found = true;
        }
        t = big_.mul(t, gamma);
      }
    }
    if (!found) fail(ErrorKind::InvalidArgument, "subfield modulus has no root in the big field");

    // column i of basis_ = coordinates of theta^i
    basis_ = Matrix<std::uint64_t>(m, k, 0);
    Element t = big_.one();
    for (unsigned i = 0; i < k; ++i) {
      for (unsigned r = 0; r < m; ++r) basis_(r, i) = t.c[r];
      t = big_.mul(t, theta_);
    }
    // pick k independent coordinate rows and invert that block once
    PrimeFieldOps ops{big_.p()};
    Matrix<std::uint64_t> tr(k, m, 0);
    for (unsigned r = 0; r < m; ++r)
      for (unsigned i = 0; i < k; ++i) tr(i, r) = basis_(r, i);
    rows_ = row_reduce(ops, tr);
    Matrix<std::uint64_t> block(k, k, 0);
    for (unsigned a = 0; a < k; ++a)
      for (unsigned i = 0; i < k; ++i) block(a, i) = basis_(rows_[a], i);
    section_ = *inverse(ops, block);
  }

  const Field& big() const { return big_; }
  const Field& sub() const { return sub_; }
  unsigned sub_degree() const { return sub_.m(); }
  const Element& root() const { return theta_; }

  Element embed(const Element& y) const {
    sub_.check(y);
    Element acc = big_.zero();
    Element t = big_.one();
    for (unsigned i = 0; i < sub_.m(); ++i) {
      acc = big_.add(acc, big_.mul(big_.from_int(y.c[i]), t));
      t = big_.mul(t, theta_);
    }
    return acc;
  }

  /// Inverse of embed on the image; throws when z is outside GF(p^k).
  Element coerce(const Element& z) const {
    big_.check(z);
    const unsigned k = sub_.m();
    PrimeFieldOps ops{big_.p()};
    std::vector<std::int64_t> a(k, 0);
    for (unsigned i = 0; i < k; ++i) {
      std::uint64_t s = 0;
      for (unsigned j = 0; j < k; ++j) s = ops.add(s, ops.mul(section_(i, j), z.c[rows_[j]]));
      a[i] = static_cast<std::int64_t>(s);
    }
    Element y = sub_.from_coeffs(std::span<const std::int64_t>(a));
    if (embed(y) != z) fail(ErrorKind::InvalidArgument, "element is not in the subfield");
    return y;
  }

  Element trace(const Element& x) const { return coerce(big_.trace_to(x, sub_.m())); }

 private:
  Field big_;
  Field sub_;
  Element theta_;
  Matrix<std::uint64_t> basis_;
  std::vector<std::size_t> rows_;
  Matrix<std::uint64_t> section_;
};

}  // namespace nto1
