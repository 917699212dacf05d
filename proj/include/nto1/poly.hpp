#pragma once

// Univariate polynomials over a Field, viewed both as data and as maps.
//
// Terms are kept sparse and sorted by exponent; the dense view is produced on
// demand.  Exponents may exceed the field order (up to q^2 - 1) and are only
// folded mod x^q - x through reduce().

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "nto1/error.hpp"
#include "nto1/ff_core.hpp"
#include "nto1/gf_linalg.hpp"
#include "nto1/numeric.hpp"

namespace nto1 {

inline constexpr std::size_t kMaxComposeDegree = 64;
inline constexpr std::uint64_t kMaxDenseDegree = std::uint64_t{1} << 22;

struct Term {
  std::uint64_t exp;
  Element coeff;
};

class PolyMap {
 public:
  explicit PolyMap(Field field) : field_(std::move(field)) {}

  /// Sparse input; repeated exponents are summed and zero terms dropped.
  static PolyMap from_terms(const Field& field, const std::vector<Term>& terms) {
    std::map<std::uint64_t, Element> acc;
    for (const auto& t : terms) {
      field.check(t.coeff);
      check_exponent(field, t.exp);
      auto it = acc.find(t.exp);
      if (it == acc.end())
        acc.emplace(t.exp, t.coeff);
      else
        it->second = field.add(it->second, t.coeff);
    }
    PolyMap out(field);
    for (auto& [e, c] : acc)
      if (!field.is_zero(c)) out.terms_.push_back({e, c});
    return out;
  }

  /// Dense input, low-to-high.
  static PolyMap from_dense(const Field& field, const std::vector<Element>& coeffs) {
    PolyMap out(field);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      field.check(coeffs[i]);
      if (!field.is_zero(coeffs[i])) out.terms_.push_back({i, coeffs[i]});
    }
    return out;
  }

  static PolyMap monomial(const Field& field, const Element& c, std::uint64_t e) {
    return from_terms(field, {{e, c}});
  }
  static PolyMap identity(const Field& field) { return monomial(field, field.one(), 1); }
  static PolyMap constant(const Field& field, const Element& c) { return monomial(field, c, 0); }

  const Field& field() const { return field_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Degree of the stated polynomial; -1 for the zero polynomial.
  std::int64_t degree() const { return terms_.empty() ? -1 : static_cast<std::int64_t>(terms_.back().exp); }

  Element coeff(std::uint64_t e) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                               [](const Term& t, std::uint64_t v) { return t.exp < v; });
    return (it != terms_.end() && it->exp == e) ? it->coeff : field_.zero();
  }

  Element leading_coeff() const {
    if (terms_.empty()) fail(ErrorKind::ConstantPolynomial, "zero polynomial has no leading coefficient");
    return terms_.back().coeff;
  }

  std::vector<Element> dense() const {
    const auto d = degree();
    if (d < 0) return {};
    if (static_cast<std::uint64_t>(d) >= kMaxDenseDegree) fail(ErrorKind::DegreeTooHigh, "dense view above 2^22 coefficients");
    std::vector<Element> out(static_cast<std::size_t>(d) + 1, field_.zero());
    for (const auto& t : terms_) out[t.exp] = t.coeff;
    return out;
  }

  // --- evaluation --------------------------------------------------------------

  Element eval(const Element& x) const { return eval_sparse(x); }
  Element operator()(const Element& x) const { return eval(x); }

  Element eval_horner(const Element& x) const {
    field_.check(x);
    const auto d = dense();
    Element acc = field_.zero();
    for (std::size_t i = d.size(); i-- > 0;) acc = field_.add(field_.mul(acc, x), d[i]);
    return acc;
  }

  Element eval_sparse(const Element& x) const {
    field_.check(x);
    Element acc = field_.zero();
    for (const auto& t : terms_) acc = field_.add(acc, field_.mul(t.coeff, field_.pow(x, t.exp)));
    return acc;
  }

  /// f(x) for every x in codec order, as codes.  Uses the exp/log tables.
  std::vector<std::uint64_t> value_codes() const {
    const std::uint64_t q = field_.order();
    if (!field_.has_tables()) fail(ErrorKind::DomainTooLarge, "field too large to tabulate");
    CodeOps ops(field_);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> t;  // (exp, coeff code)
    for (const auto& term : terms_) t.emplace_back(term.exp, field_.code(term.coeff));
    std::vector<std::uint64_t> out(q, 0);
    for (std::uint64_t x = 0; x < q; ++x) {
      std::uint64_t acc = 0;
      for (const auto& [e, c] : t) acc = ops.add(acc, ops.mul(c, ops.pow(x, e)));
      out[x] = acc;
    }
    return out;
  }

  // --- ring operations ---------------------------------------------------------

  friend PolyMap operator+(const PolyMap& a, const PolyMap& b) {
    same_field(a, b);
    std::vector<Term> all = a.terms_;
    all.insert(all.end(), b.terms_.begin(), b.terms_.end());
    return from_terms(a.field_, all);
  }

  PolyMap operator-() const {
    PolyMap out(field_);
    for (const auto& t : terms_) out.terms_.push_back({t.exp, field_.neg(t.coeff)});
    return out;
  }

  friend PolyMap operator-(const PolyMap& a, const PolyMap& b) { return a + (-b); }

  friend PolyMap operator*(const PolyMap& a, const PolyMap& b) {
    same_field(a, b);
    const Field& F = a.field_;
    std::map<std::uint64_t, Element> acc;
    for (const auto& s : a.terms_) {
      for (const auto& t : b.terms_) {
        const std::uint64_t e = s.exp + t.exp;
        check_exponent(F, e);
        const Element c = F.mul(s.coeff, t.coeff);
        auto it = acc.find(e);
        if (it == acc.end())
          acc.emplace(e, c);
        else
          it->second = F.add(it->second, c);
      }
    }
    PolyMap out(F);
    for (auto& [e, c] : acc)
      if (!F.is_zero(c)) out.terms_.push_back({e, c});
    return out;
  }

  PolyMap scaled(const Element& c) const {
    PolyMap out(field_);
    if (field_.is_zero(c)) return out;
    for (const auto& t : terms_) out.terms_.push_back({t.exp, field_.mul(c, t.coeff)});
    return out;
  }

  /// Coefficients raised to p^k and exponents multiplied by p^k: f(x)^(p^k).
  PolyMap frobenius(unsigned k) const {
    PolyMap out(field_);
    std::vector<Term> t;
    const std::uint64_t pk = checked_pow(field_.p(), k);
    for (const auto& term : terms_) {
      if (term.exp != 0 && term.exp > (field_.order() * field_.order()) / pk)
        fail(ErrorKind::DegreeTooHigh, "exponent above q^2 - 1");
      t.push_back({term.exp * pk, field_.frobenius(term.coeff, k)});
    }
    return from_terms(field_, t);
  }

  /// Symbolic power, expanded digit by digit in base p.
  PolyMap pow(std::uint64_t e) const {
    PolyMap result = constant(field_, field_.one());
    if (e == 0) return result;
    PolyMap base = *this;
    const std::uint64_t p = field_.p();
    unsigned k = 0;
    while (e) {
      const std::uint64_t d = e % p;
      if (d) {
        PolyMap fk = base.frobenius(k);
        for (std::uint64_t i = 0; i < d; ++i) result = result * fk;
      }
      e /= p;
      ++k;
    }
    return result;
  }

  /// Representative of degree < q of the same map (mod x^q - x).
  PolyMap reduce() const {
    const std::uint64_t q = field_.order();
    std::vector<Term> t;
    for (const auto& term : terms_) {
      const std::uint64_t e = term.exp == 0 ? 0 : ((term.exp - 1) % (q - 1)) + 1;
      t.push_back({e, term.coeff});
    }
    return from_terms(field_, t);
  }

  /// this(inner(x)); both operands must have degree at most 64.
  PolyMap compose(const PolyMap& inner) const {
    same_field(*this, inner);
    if (degree() > static_cast<std::int64_t>(kMaxComposeDegree) ||
        inner.degree() > static_cast<std::int64_t>(kMaxComposeDegree))
      fail(ErrorKind::DegreeTooHigh, "symbolic composition limited to degree 64");
    PolyMap acc(field_);
    PolyMap power = constant(field_, field_.one());
    std::uint64_t cur = 0;
    for (const auto& t : terms_) {
      while (cur < t.exp) {
        power = power * inner;
        ++cur;
      }
      acc = acc + power.scaled(t.coeff);
    }
    return acc;
  }

  /// f(x + b), expanded binomially with coefficients reduced by Lucas.
  PolyMap shift(const Element& b) const {
    field_.check(b);
    if (degree() > static_cast<std::int64_t>(std::uint64_t{1} << 16))
      fail(ErrorKind::DegreeTooHigh, "shift limited to degree 2^16");
    std::vector<Term> out;
    const std::uint64_t p = field_.p();
    for (const auto& t : terms_) {
      for (std::uint64_t k = 0; k <= t.exp; ++k) {
        const std::uint64_t binom = lucas_binomial(t.exp, k, p);
        if (!binom) continue;
        const Element c = field_.mul(field_.scale(t.coeff, static_cast<std::int64_t>(binom)),
                                     field_.pow(b, t.exp - k));
        out.push_back({k, c});
      }
    }
    return from_terms(field_, out);
  }

  friend bool operator==(const PolyMap& a, const PolyMap& b) {
    if (!(a.field_ == b.field_) || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].exp != b.terms_[i].exp || a.terms_[i].coeff != b.terms_[i].coeff) return false;
    return true;
  }

  static std::uint64_t lucas_binomial(std::uint64_t n, std::uint64_t k, std::uint64_t p) {
    std::uint64_t r = 1;
    while (n || k) {
      const std::uint64_t a = n % p;
      const std::uint64_t b = k % p;
      if (b > a) return 0;
      // C(a, b) mod p with a < p, via multiplicative formula
      std::uint64_t num = 1;
      std::uint64_t den = 1;
      for (std::uint64_t i = 0; i < b; ++i) {
        num = num * ((a - i) % p) % p;
        den = den * ((i + 1) % p) % p;
      }
      r = r * num % p * mod_inv(den, p) % p;
      n /= p;
      k /= p;
    }
    return r;
  }

 private:
  static void check_exponent(const Field& field, std::uint64_t e) {
    const std::uint64_t q = field.order();
    if (q < (std::uint64_t{1} << 31) && e > q * q - 1)
      fail(ErrorKind::DegreeTooHigh, "exponent " + std::to_string(e) + " above q^2 - 1");
  }

  static void same_field(const PolyMap& a, const PolyMap& b) {
    if (!(a.field_ == b.field_)) fail(ErrorKind::FieldMismatch, "polynomials over different fields");
  }

  Field field_;
  std::vector<Term> terms_;
};

/// The unique polynomial of degree < q taking the given values (codec order).
/// Coefficient of x^k for 1 <= k <= q-1 is -sum_a f(a) a^(q-1-k); c_0 = f(0).
inline PolyMap interpolate(const Field& field, const std::vector<Element>& values) {
  const std::uint64_t q = field.order();
  if (values.size() != q) fail(ErrorKind::InvalidArgument, "need one value per field element");
  std::vector<Element> c(q, field.zero());
  c[0] = values[0];
  const auto& elems = field.elements();
  for (std::uint64_t a = 1; a < q; ++a) {
    if (field.is_zero(values[a])) continue;
    // a^(q-1-k) for k = q-1 down to 1
    Element pw = field.one();
    for (std::uint64_t k = q - 1; k >= 1; --k) {
      c[k] = field.sub(c[k], field.mul(values[a], pw));
      pw = field.mul(pw, elems[a]);
    }
  }
  // the a = 0 term contributes only to k = q-1 (0^0 = 1)
  c[q - 1] = field.sub(c[q - 1], values[0]);
  return PolyMap::from_dense(field, c);
}

// --- normalization -------------------------------------------------------------

struct Normalized {
  PolyMap g;
  Element a;
  Element b;
  Element c;
};

/// g(x) = a f(x + b) + c, monic with g(0) = 0, and with the x^(d-1) term
/// removed when gcd(p, d) = 1.
inline Normalized normalize(const PolyMap& f) {
  const Field& F = f.field();
  if (f.degree() < 1) fail(ErrorKind::ConstantPolynomial, "normalize needs degree at least 1");
  const auto d = static_cast<std::uint64_t>(f.degree());
  const Element lc = f.leading_coeff();
  const Element a = F.inv(lc);
  Element b = F.zero();
  if (d % F.p() != 0) {
    const Element denom = F.mul(F.from_int(static_cast<std::int64_t>(d % F.p())), lc);
    b = F.neg(F.div(f.coeff(d - 1), denom));
  }
  const Element c = F.neg(F.mul(a, f.eval(b)));
  PolyMap g = f.shift(b).scaled(a) + PolyMap::constant(F, c);
  return {std::move(g), a, b, c};
}

/// a f(x + b) + c, evaluated pointwise.
inline Element affine_eval(const PolyMap& f, const Element& a, const Element& b, const Element& c,
                           const Element& x) {
  const Field& F = f.field();
  return F.add(F.mul(a, f.eval(F.add(x, b))), c);
}

// --- additivity ------------------------------------------------------------------

/// Structural: the reduced representative is a sum of x^(p^i) terms.
inline bool is_additive(const PolyMap& f) {
  const PolyMap r = f.reduce();
  for (const auto& t : r.terms())
    if (exact_log(t.exp, f.field().p()) < 0) return false;
  return true;
}

inline bool is_additive_exhaustive(const PolyMap& f) {
  const Field& F = f.field();
  if (F.order() > (std::uint64_t{1} << 10)) fail(ErrorKind::DomainTooLarge, "exhaustive additivity check limited to 2^10");
  const auto v = f.value_codes();
  CodeOps ops(F);
  for (std::uint64_t x = 0; x < F.order(); ++x)
    for (std::uint64_t y = x; y < F.order(); ++y)
      if (v[ops.add(x, y)] != ops.add(v[x], v[y])) return false;
  return true;
}

// --- linearized polynomials --------------------------------------------------------

/// L(x) = sum_i a_i x^(q^i) over GF(q^m), q = p^e.
class LinearizedPoly {
 public:
  LinearizedPoly(Field field, unsigned base_degree, std::vector<Element> coeffs)
      : field_(std::move(field)), e_(base_degree), a_(std::move(coeffs)) {
    if (e_ == 0 || field_.m() % e_ != 0) fail(ErrorKind::InvalidArgument, "base degree must divide m");
    if (a_.size() > field_.m() / e_) fail(ErrorKind::DegreeMismatch, "too many q-coefficients");
    for (const auto& c : a_) field_.check(c);
    a_.resize(field_.m() / e_, field_.zero());
  }

  /// tr_{q^m/q} as a q-polynomial.
  static LinearizedPoly trace(const Field& field, unsigned base_degree) {
    return LinearizedPoly(field, base_degree, std::vector<Element>(field.m() / base_degree, field.one()));
  }

  const Field& field() const { return field_; }
  unsigned base_degree() const { return e_; }
  std::uint64_t q_sub() const { return checked_pow(field_.p(), e_); }
  unsigned ext_degree() const { return field_.m() / e_; }
  const std::vector<Element>& coeffs() const { return a_; }

  Element eval(const Element& x) const {
    Element acc = field_.zero();
    Element y = x;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (!field_.is_zero(a_[i])) acc = field_.add(acc, field_.mul(a_[i], y));
      y = field_.frobenius(y, e_);
    }
    return acc;
  }
  Element operator()(const Element& x) const { return eval(x); }

  PolyMap to_poly() const {
    std::vector<Term> t;
    std::uint64_t qi = 1;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      t.push_back({qi, a_[i]});
      if (i + 1 < a_.size()) qi *= q_sub();
    }
    return PolyMap::from_terms(field_, t);
  }

  /// Matrix over GF(p) of L in the power basis; column j holds L(x^j).
  Matrix<std::uint64_t> prime_matrix() const {
    const unsigned M = field_.m();
    Matrix<std::uint64_t> mat(M, M, 0);
    for (unsigned j = 0; j < M; ++j) {
      std::vector<std::int64_t> basis(M, 0);
      basis[j] = 1;
      const Element img = eval(field_.from_coeffs(std::span<const std::int64_t>(basis)));
      for (unsigned i = 0; i < M; ++i) mat(i, j) = img.c[i];
    }
    return mat;
  }

 private:
  Field field_;
  unsigned e_;
  std::vector<Element> a_;
};

/// Rank of L as a GF(q)-linear map.  The GF(p)-rank of a GF(q)-linear map is
/// e times its GF(q)-rank, so the prime-field matrix suffices.
inline unsigned linearized_rank(const LinearizedPoly& L) {
  const auto r = rank(PrimeFieldOps{L.field().p()}, L.prime_matrix());
  return static_cast<unsigned>(r / L.base_degree());
}

}  // namespace nto1
