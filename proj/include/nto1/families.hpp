#pragma once

// Explicit n-to-1 constructions obtained from commutative squares:
//   h(psi(x)) phi(x) + g(psi(x)),  L1(x) + L2(x) g(L3(x)),  x^r h(x^s),
//   g(x^(q^k) - x + delta) + c x  and the cubic/binary families built on it.
// Every generator returns the map on the big set, the reduced map on the
// quotient, the wiring (lam, lambar) and the closed-form predicate.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "nto1/agw.hpp"
#include "nto1/error.hpp"
#include "nto1/ff_core.hpp"
#include "nto1/gf_linalg.hpp"
#include "nto1/nto1_check.hpp"
#include "nto1/poly.hpp"

namespace nto1 {

enum class Mode { Strict, Permissive };

/// Field arithmetic on Elements in the shape gf_linalg expects.
struct ElementOps {
  using value_type = Element;
  const Field* F;

  Element zero() const { return F->zero(); }
  Element one() const { return F->one(); }
  Element add(const Element& a, const Element& b) const { return F->add(a, b); }
  Element sub(const Element& a, const Element& b) const { return F->sub(a, b); }
  Element mul(const Element& a, const Element& b) const { return F->mul(a, b); }
  Element inv(const Element& a) const { return F->inv(a); }
  bool is_zero(const Element& a) const { return F->is_zero(a); }
};

/// A construction together with its commutative square.  Tables are indexed
/// by element code; g_table is meaningful on S only.
struct FamilyInstance {
  std::string family;
  Field field;
  PolyMap f;
  std::uint64_t n = 1;
  bool predicate = false;
  std::vector<std::uint64_t> A, S, Sbar;
  std::vector<std::uint64_t> f_table, lam_table, lambar_table, g_table;
  std::vector<std::string> warnings;
  std::map<std::string, std::string> params;
};

struct FamilyVerdict {
  bool predicate = false;
  bool f_nto1 = false;      // brute force over A
  bool reduced_nto1 = false;  // brute force over S
  bool agree() const { return predicate == f_nto1; }
  bool equivalence() const { return f_nto1 == reduced_nto1; }
};

namespace detail {

class Hypotheses {
 public:
  Hypotheses(Mode mode, std::vector<std::string>& warnings) : mode_(mode), warnings_(warnings) {}

  void require(bool ok, const std::string& name, const std::string& witness = {}) {
    if (ok) return;
    const std::string msg = witness.empty() ? name : name + " (witness " + witness + ")";
    if (mode_ == Mode::Strict) fail(ErrorKind::HypothesisViolated, msg);
    warnings_.push_back(msg);
  }

 private:
  Mode mode_;
  std::vector<std::string>& warnings_;
};

inline FamilyInstance new_instance(std::string family, const Field& F) {
  FamilyInstance I{std::move(family), F, PolyMap(F), 1, false, {}, {}, {}, {}, {}, {}, {}, {}, {}};
  return I;
}

inline std::vector<std::uint64_t> all_codes(const Field& F) {
  std::vector<std::uint64_t> v(F.order());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

inline std::vector<std::uint64_t> nonzero_codes(const Field& F) {
  std::vector<std::uint64_t> v(F.order() - 1);
  std::iota(v.begin(), v.end(), 1);
  return v;
}

inline std::vector<std::uint64_t> image_of(const std::vector<std::uint64_t>& domain,
                                           const std::vector<std::uint64_t>& table) {
  std::set<std::uint64_t> img;
  for (auto x : domain) img.insert(table[x]);
  return {img.begin(), img.end()};
}

inline std::vector<std::uint64_t> tabulate(const Field& F, const std::function<Element(const Element&)>& fn) {
  std::vector<std::uint64_t> t(F.order());
  for (std::uint64_t c = 0; c < F.order(); ++c) t[c] = F.code(fn(F.from_code(c)));
  return t;
}

inline bool nto1_on(const std::vector<std::uint64_t>& domain, const std::vector<std::uint64_t>& table,
                    std::uint64_t range, std::uint64_t n) {
  std::vector<std::uint64_t> vals;
  vals.reserve(domain.size());
  for (auto x : domain) vals.push_back(table[x]);
  return is_n_to_one(code_histogram(vals, range), n);
}

inline std::string code_str(const Field& F, const Element& x) { return std::to_string(F.code(x)); }

}  // namespace detail

/// sum_j g_j inner^j, reduced mod x^q - x.
inline PolyMap compose_sparse(const PolyMap& g, const PolyMap& inner) {
  PolyMap acc(g.field());
  for (const auto& t : g.terms()) acc = acc + inner.pow(t.exp).reduce().scaled(t.coeff);
  return acc.reduce();
}

inline DiagramSpec<std::uint64_t> diagram(const FamilyInstance& I) {
  DiagramSpec<std::uint64_t> d;
  d.A = I.A;
  d.S = I.S;
  d.Sbar = I.Sbar;
  d.f = [t = I.f_table](const std::uint64_t& x) { return t[x]; };
  d.g = [t = I.g_table](const std::uint64_t& x) { return t[x]; };
  d.lam = [t = I.lam_table](const std::uint64_t& x) { return t[x]; };
  d.lambar = [t = I.lambar_table](const std::uint64_t& x) { return t[x]; };
  d.n = I.n;
  return d;
}

inline FamilyVerdict evaluate(const FamilyInstance& I) {
  FamilyVerdict v;
  v.predicate = I.predicate;
  v.f_nto1 = detail::nto1_on(I.A, I.f_table, I.field.order(), I.n);
  v.reduced_nto1 = detail::nto1_on(I.S, I.g_table, I.field.order(), I.n);
  return v;
}

// --- h(psi(x)) phi(x) + g(psi(x)) ------------------------------------------------------

/// psi, phi additive; psibar a q-polynomial (q = p^e).  Reduced map
/// fbar(x) = h(x) phi(x) + psibar(g(x)) on psi(F).
inline FamilyInstance build_psi_family(const Field& F, unsigned e, const PolyMap& psi, const PolyMap& phi,
                                       const LinearizedPoly& psibar, const PolyMap& h, const PolyMap& g,
                                       std::uint64_t n, Mode mode = Mode::Strict) {
  FamilyInstance I = detail::new_instance("psi", F);
  I.n = n;
  detail::Hypotheses hyp(mode, I.warnings);
  if (F.m() % e) fail(ErrorKind::InvalidArgument, "base degree must divide m");
  const std::uint64_t q = checked_pow(F.p(), e);
  hyp.require(is_additive(psi), "psi additive");
  hyp.require(is_additive(phi), "phi additive");
  hyp.require(psibar.base_degree() == e, "psibar is a q-polynomial");
  hyp.require(q % n == 0, "n | q");

  const auto psi_t = psi.value_codes();
  const auto phi_t = phi.value_codes();
  const auto h_t = h.value_codes();
  const auto g_t = g.value_codes();
  const auto psibar_t = psibar.to_poly().value_codes();
  CodeOps ops(F);
  I.A = detail::all_codes(F);
  I.S = detail::image_of(I.A, psi_t);
  I.Sbar = detail::image_of(I.A, psibar_t);
  hyp.require(I.S.size() == I.Sbar.size() && I.S.size() > 1, "#psi(F) = #psibar(F) > 1");
  hyp.require(I.S.size() % n == 0, "n | #psi(F)");
  for (auto s : I.S)
    if (!F.in_subfield(F.from_code(h_t[s]), e) || h_t[s] == 0) {
      hyp.require(false, "h(psi(F)) in GF(q)*", std::to_string(s));
      break;
    }
  for (auto x : I.A)
    if (x && psi_t[x] == 0 && phi_t[x] == 0) {
      hyp.require(false, "ker(phi) and ker(psi) meet only in 0", std::to_string(x));
      break;
    }
  for (auto x : I.A)
    if (phi_t[psi_t[x]] != psibar_t[phi_t[x]]) {
      hyp.require(false, "phi o psi = psibar o phi", std::to_string(x));
      break;
    }
  std::uint64_t kp = 0, kpb = 0;
  for (auto x : I.A) {
    kp += psi_t[x] == 0;
    kpb += psibar_t[x] == 0;
  }
  hyp.require(kp == kpb, "dim ker psi = dim ker psibar");

  I.f_table.resize(F.order());
  for (auto x : I.A) I.f_table[x] = ops.add(ops.mul(h_t[psi_t[x]], phi_t[x]), g_t[psi_t[x]]);
  I.lam_table = psi_t;
  I.lambar_table = psibar_t;
  I.g_table.assign(F.order(), 0);
  for (auto s : I.S) I.g_table[s] = ops.add(ops.mul(h_t[s], phi_t[s]), psibar_t[g_t[s]]);
  for (auto x : I.A)
    if (psibar_t[I.f_table[x]] != I.g_table[psi_t[x]]) {
      hyp.require(false, "psibar(f(x)) = fbar(psi(x))", std::to_string(x));
      break;
    }
  I.f = compose_sparse(h, psi) * phi + compose_sparse(g, psi);
  I.f = I.f.reduce();
  I.predicate = detail::nto1_on(I.S, I.g_table, F.order(), n);
  return I;
}

/// a tr(x)^d + g(tr(x)) over GF(q^m), tr = tr_{q^m/q}; predicate gcd(d, q - 1) = n.
/// The displayed map is not of the form h(psi) phi + g(psi) with h nonvanishing
/// (h = a x^d vanishes at 0), so strict mode rejects it.
inline FamilyInstance build_trace_corollary(const Field& F, unsigned e, const Element& a, std::uint64_t d,
                                            const PolyMap& g, std::uint64_t n, Mode mode = Mode::Strict) {
  const std::uint64_t q = checked_pow(F.p(), e);
  const auto tr = LinearizedPoly::trace(F, e);
  FamilyInstance I = detail::new_instance("trace-corollary", F);
  I.n = n;
  detail::Hypotheses hyp(mode, I.warnings);
  hyp.require(!F.is_zero(a), "a != 0");
  for (const auto& y : F.subfield_elements(e))
    if (!F.is_zero(F.trace_to(g.eval(y), e))) {
      hyp.require(false, "g(GF(q)) in ker tr", detail::code_str(F, y));
      break;
    }
  hyp.require(F.is_zero(g.eval(F.zero())), "g(0) = 0");
  hyp.require(false, "h(psi(F)) in GF(q)*", "0");  // h = a x^d at psi(0) = 0

  const PolyMap trp = tr.to_poly();
  I.f = (trp.pow(d).reduce().scaled(a) + compose_sparse(g, trp)).reduce();
  I.f_table = I.f.value_codes();
  I.A = detail::all_codes(F);
  I.lam_table = I.lambar_table = trp.value_codes();
  I.S = I.Sbar = detail::image_of(I.A, I.lam_table);
  I.g_table.assign(F.order(), 0);
  const auto h_t = PolyMap::monomial(F, a, d).value_codes();
  for (auto s : I.S) I.g_table[s] = h_t[s];
  I.predicate = std::gcd(d, q - 1) == n;
  return I;
}

/// tr(x) x^2 - tr(x) x + x^2 - x + g(tr(x)) over GF(q^m), q = 3^e, m odd;
/// predicate: always 3-to-1.  phi = x^2 - x is not additive and h = x + 1
/// vanishes at -1, so strict mode rejects it.
inline FamilyInstance build_char3_corollary(const Field& F, unsigned e, const PolyMap& g,
                                            Mode mode = Mode::Strict) {
  if (F.p() != 3) fail(ErrorKind::WrongCharacteristic, "characteristic 3 corollary");
  FamilyInstance I = detail::new_instance("char3-corollary", F);
  I.n = 3;
  detail::Hypotheses hyp(mode, I.warnings);
  hyp.require((F.m() / e) % 2 == 1, "m odd");
  const PolyMap phi = PolyMap::from_terms(F, {{2, F.one()}, {1, F.from_int(-1)}});
  hyp.require(is_additive(phi), "phi = x^2 - x additive");
  hyp.require(false, "h(psi(F)) in GF(q)*", detail::code_str(F, F.from_int(-1)));
  const PolyMap trp = LinearizedPoly::trace(F, e).to_poly();
  const PolyMap one_plus = trp + PolyMap::constant(F, F.one());
  I.f = (one_plus * phi + compose_sparse(g, trp)).reduce();
  I.f_table = I.f.value_codes();
  I.A = detail::all_codes(F);
  I.lam_table = I.lambar_table = trp.value_codes();
  I.S = I.Sbar = detail::image_of(I.A, I.lam_table);
  I.g_table.assign(F.order(), 0);
  const auto cube = PolyMap::from_terms(F, {{3, F.one()}, {1, F.from_int(-1)}}).value_codes();
  for (auto s : I.S) I.g_table[s] = cube[s];
  I.predicate = true;
  return I;
}

// --- L1(x) + L2(x) g(L3(x)) --------------------------------------------------------------

/// L1, L2, L3 q-polynomials with coefficients in GF(q).  Reduced map
/// fbar(x) = L1(x) + L2(x) g(x) on L3(F).
inline FamilyInstance build_l1l2l3(const Field& F, const LinearizedPoly& L1, const LinearizedPoly& L2,
                                   const LinearizedPoly& L3, const PolyMap& g, std::uint64_t n,
                                   Mode mode = Mode::Strict) {
  const unsigned e = L3.base_degree();
  if (L1.base_degree() != e || L2.base_degree() != e) fail(ErrorKind::InvalidArgument, "mixed base fields");
  const std::uint64_t q = checked_pow(F.p(), e);
  FamilyInstance I = detail::new_instance("l1l2l3", F);
  I.n = n;
  detail::Hypotheses hyp(mode, I.warnings);
  for (const auto* L : {&L1, &L2, &L3})
    for (const auto& c : L->coeffs()) hyp.require(F.in_subfield(c, e), "L_i in GF(q)[x]", detail::code_str(F, c));
  hyp.require(q % n == 0, "n | q");

  const auto l1 = L1.to_poly().value_codes();
  const auto l2 = L2.to_poly().value_codes();
  const auto l3 = L3.to_poly().value_codes();
  const auto gt = g.value_codes();
  CodeOps ops(F);
  I.A = detail::all_codes(F);
  I.S = I.Sbar = detail::image_of(I.A, l3);
  hyp.require(I.S.size() % n == 0, "n | #L3(F)");
  hyp.require(I.S.size() % n == q % n, "#L3(F) = q (mod n)");
  for (auto y : I.S)
    if (!F.in_subfield(F.from_code(gt[y]), e)) {
      hyp.require(false, "g(L3(F)) in GF(q)", std::to_string(y));
      break;
    }
  for (auto y : I.S) {
    bool bad = false;
    for (auto x : I.A)
      if (x && l3[x] == 0 && ops.add(l1[x], ops.mul(l2[x], gt[y])) == 0) {
        hyp.require(false, "ker(F_y) and ker(L3) meet only in 0", std::to_string(x));
        bad = true;
        break;
      }
    if (bad) break;
  }
  I.f_table.resize(F.order());
  for (auto x : I.A) I.f_table[x] = ops.add(l1[x], ops.mul(l2[x], gt[l3[x]]));
  I.lam_table = I.lambar_table = l3;
  I.g_table.assign(F.order(), 0);
  for (auto s : I.S) I.g_table[s] = ops.add(l1[s], ops.mul(l2[s], gt[s]));
  I.f = (L1.to_poly() + L2.to_poly() * compose_sparse(g, L3.to_poly())).reduce();
  I.predicate = detail::nto1_on(I.S, I.g_table, F.order(), n);
  return I;
}

/// x^2 + x (tr(x)^2 - tr(x) - a) over GF(q^m), q = 3^e, 3 does not divide m;
/// predicate: a is a square in GF(q).  L1 = x^2 is not q-linearized, so strict
/// mode rejects it.
inline FamilyInstance build_l1l2l3_corollary(const Field& F, unsigned e, const Element& a, Mode mode = Mode::Strict) {
  if (F.p() != 3) fail(ErrorKind::WrongCharacteristic, "characteristic 3 corollary");
  FamilyInstance I = detail::new_instance("l1l2l3-corollary", F);
  I.n = 3;
  detail::Hypotheses hyp(mode, I.warnings);
  hyp.require((F.m() / e) % 3 != 0, "3 does not divide m");
  hyp.require(F.in_subfield(a, e), "a in GF(q)");
  hyp.require(false, "L1 = x^2 is q-linearized");
  const PolyMap trp = LinearizedPoly::trace(F, e).to_poly();
  const PolyMap x = PolyMap::identity(F);
  const PolyMap inner = (trp * trp).reduce() - trp - PolyMap::constant(F, a);
  I.f = (PolyMap::monomial(F, F.one(), 2) + x * inner).reduce();
  I.f_table = I.f.value_codes();
  I.A = detail::all_codes(F);
  I.lam_table = I.lambar_table = trp.value_codes();
  I.S = I.Sbar = detail::image_of(I.A, I.lam_table);
  I.g_table.assign(F.order(), 0);
  const auto fbar = PolyMap::from_terms(F, {{3, F.one()}, {1, F.neg(a)}}).value_codes();
  for (auto s : I.S) I.g_table[s] = fbar[s];
  I.predicate = F.is_zero(a) || F.pow(a, (checked_pow(3, e) - 1) / 2) == F.one();
  return I;
}

// --- x^r h(x^s) ------------------------------------------------------------------------

/// On GF(q)* with lam = lambar = x^s onto mu_{(q-1)/s}; g(x) = x^r h(x)^s.
inline FamilyInstance build_xr_hxs(const Field& F, std::uint64_t r, std::uint64_t s, const PolyMap& h, std::uint64_t n,
                                   Mode mode = Mode::Strict) {
  const std::uint64_t q = F.order();
  if (s == 0 || (q - 1) % s) fail(ErrorKind::InvalidArgument, "s must divide q - 1");
  const std::uint64_t ell = (q - 1) / s;
  FamilyInstance I = detail::new_instance("xr-hxs", F);
  I.n = n;
  detail::Hypotheses hyp(mode, I.warnings);
  hyp.require(std::gcd(r, s) == 1, "gcd(r, s) = 1");
  hyp.require(ell % n == 0, "n | (q-1)/s");
  CodeOps ops(F);
  const auto ht = h.value_codes();
  I.A = detail::nonzero_codes(F);
  I.lam_table.assign(q, 0);
  for (auto x : I.A) I.lam_table[x] = ops.pow(x, s);
  I.lambar_table = I.lam_table;
  I.S = I.Sbar = detail::image_of(I.A, I.lam_table);
  for (auto y : I.S)
    if (ht[y] == 0) {
      hyp.require(false, "h nonvanishing on mu", std::to_string(y));
      break;
    }
  std::vector<Term> terms;
  for (const auto& t : h.terms()) terms.push_back({r + s * t.exp, t.coeff});
  I.f = PolyMap::from_terms(F, terms);
  I.f_table = I.f.value_codes();
  I.g_table.assign(q, 0);
  for (auto y : I.S) I.g_table[y] = ops.mul(ops.pow(y, r), ops.pow(ht[y], s));
  I.predicate = detail::nto1_on(I.S, I.g_table, q, n);
  I.params = {{"r", std::to_string(r)}, {"s", std::to_string(s)}};
  return I;
}

/// x^r h(x^s) with h(y)^s = alpha y^t on mu_{(q-1)/s}: n-to-1 iff gcd(r + t, (q-1)/s) = n.
inline bool monomial_corollary_predicate(std::uint64_t r, std::uint64_t t, std::uint64_t ell, std::uint64_t n) {
  return std::gcd(r + t, ell) == n;
}

// --- piecewise construction ------------------------------------------------------------

struct PiecewiseSpec {
  Field field;
  std::uint64_t ell = 1;  // order of the subgroup mu_ell, ell = (q-1)/s
  std::uint64_t n = 1;
  std::uint64_t r = 1;
  std::vector<std::uint64_t> a;  // a_0..a_{ell-1}
  std::vector<std::uint64_t> m;  // 0 <= m_i <= s-1

  std::uint64_t s() const { return (field.order() - 1) / ell; }
};

inline void validate(const PiecewiseSpec& P) {
  const std::uint64_t q = P.field.order();
  if (P.ell == 0 || (q - 1) % P.ell) fail(ErrorKind::InvalidArgument, "ell must divide q - 1");
  if (P.n == 0 || P.ell % P.n) fail(ErrorKind::InvalidArgument, "n must divide ell");
  if (std::gcd(P.r, P.s()) != 1) fail(ErrorKind::InvalidArgument, "gcd(r, s) must be 1");
  if (P.a.size() != P.ell || P.m.size() != P.ell) fail(ErrorKind::InvalidArgument, "need ell values of a_i and m_i");
  std::map<std::uint64_t, std::uint64_t> mult;
  for (auto v : P.a) {
    if (v >= P.ell) fail(ErrorKind::InvalidArgument, "a_i must lie in [0, ell)");
    ++mult[v];
  }
  for (const auto& [v, c] : mult)
    if (c != P.n) fail(ErrorKind::InvalidArgument, "every a-value must occur exactly n times");
  for (auto v : P.m)
    if (v >= P.s()) fail(ErrorKind::InvalidArgument, "m_i must lie in [0, s)");
}

struct PiecewiseSolution {
  PolyMap h;  // degree < ell
  PolyMap f;  // x^r h(x^s)
  Element omega;
  std::vector<Element> B;
};

/// Solves A H = B with A_{ij} = omega^(ij), B_i = beta^(ell m_i + a_i - i r).
inline PiecewiseSolution solve_piecewise(const PiecewiseSpec& P) {
  validate(P);
  const Field& F = P.field;
  const std::uint64_t q = F.order();
  const std::uint64_t s = P.s();
  const Element omega = F.pow(F.beta(), s);
  Matrix<Element> A(P.ell, P.ell, F.zero());
  std::vector<Element> B(P.ell);
  for (std::uint64_t i = 0; i < P.ell; ++i) {
    const Element wi = F.pow(omega, i);
    Element acc = F.one();
    for (std::uint64_t j = 0; j < P.ell; ++j) {
      A(i, j) = acc;
      acc = F.mul(acc, wi);
    }
    const std::int64_t ex = static_cast<std::int64_t>((P.ell * P.m[i] + P.a[i]) % (q - 1)) -
                            static_cast<std::int64_t>((i * P.r) % (q - 1));
    B[i] = F.pow_signed(F.beta(), ex);
  }
  const auto H = solve(ElementOps{&F}, A, B);
  if (!H) fail(ErrorKind::SingularVandermonde, "Vandermonde system is singular");
  PiecewiseSolution out{PolyMap::from_dense(F, *H), PolyMap(F), omega, B};
  for (std::uint64_t i = 0; i < P.ell; ++i)
    if (out.h.eval(F.pow(omega, i)) != B[i]) fail(ErrorKind::SingularVandermonde, "solution does not interpolate B");
  std::vector<Term> terms;
  for (const auto& t : out.h.terms()) terms.push_back({P.r + s * t.exp, t.coeff});
  out.f = PolyMap::from_terms(F, terms);
  return out;
}

/// A random admissible spec for the given ell and n.
inline PiecewiseSpec random_piecewise_spec(const Field& F, std::uint64_t ell, std::uint64_t n, std::mt19937_64& rng) {
  PiecewiseSpec P{F, ell, n, 1, {}, {}};
  const std::uint64_t s = P.s();
  std::vector<std::uint64_t> residues(ell);
  std::iota(residues.begin(), residues.end(), 0);
  std::shuffle(residues.begin(), residues.end(), rng);
  for (std::uint64_t i = 0; i < ell / n; ++i)
    for (std::uint64_t j = 0; j < n; ++j) P.a.push_back(residues[i]);
  std::shuffle(P.a.begin(), P.a.end(), rng);
  for (std::uint64_t i = 0; i < ell; ++i) P.m.push_back(rng() % s);
  do {
    P.r = 1 + rng() % (F.order() - 1);
  } while (std::gcd(P.r, s) != 1);
  return P;
}

// --- piecewise monomials on the cosets of mu_ell (n = ell) ---------------------------------

/// Power-residue class j of y: y^((q-1)/ell) = omega^j with omega = beta^((q-1)/ell).
inline std::uint64_t residue_class(const Field& F, const Element& y, std::uint64_t ell) {
  return F.power_class(y, ell) % ell;
}

/// x^r h(x^s), s = (q-1)/ell, with h of degree < ell interpolating
/// h(omega^i) = values[i].  n = ell.  Predicate: for some j, values[i] lies in
/// S_{omega^(j - i r)} for every i.
inline FamilyInstance construct_mu(const Field& F, std::uint64_t ell, std::uint64_t r,
                                   const std::vector<Element>& values, Mode mode = Mode::Strict) {
  const std::uint64_t q = F.order();
  if (ell < 2 || (q - 1) % ell) fail(ErrorKind::InvalidArgument, "ell must divide q - 1");
  if (values.size() != ell) fail(ErrorKind::InvalidArgument, "need one value per coset");
  const std::uint64_t s = (q - 1) / ell;
  std::vector<std::string> warnings;
  detail::Hypotheses hyp(mode, warnings);
  hyp.require(std::gcd(r, s) == 1, "gcd(r, s) = 1");
  for (const auto& v : values) hyp.require(!F.is_zero(v), "coset values nonzero");
  const Element omega = F.pow(F.beta(), s);
  Matrix<Element> A(ell, ell, F.zero());
  for (std::uint64_t i = 0; i < ell; ++i)
    for (std::uint64_t j = 0; j < ell; ++j) A(i, j) = F.pow(omega, i * j);
  const auto H = solve(ElementOps{&F}, A, values);
  if (!H) fail(ErrorKind::SingularVandermonde, "Vandermonde system is singular");
  const PolyMap h = PolyMap::from_dense(F, *H);
  FamilyInstance I = build_xr_hxs(F, r, s, h.is_zero() ? PolyMap::constant(F, F.one()) : h, ell, Mode::Permissive);
  if (h.is_zero()) {
    I.f = PolyMap(F);
    I.f_table.assign(q, 0);
  }
  I.warnings.insert(I.warnings.begin(), warnings.begin(), warnings.end());
  bool pred = false;
  if (std::none_of(values.begin(), values.end(), [&](const Element& v) { return F.is_zero(v); })) {
    for (std::uint64_t j = 0; j < ell && !pred; ++j) {
      bool all = true;
      for (std::uint64_t i = 0; i < ell && all; ++i) {
        const std::uint64_t want = (j + ell - (i * r) % ell) % ell;
        all = residue_class(F, values[i], ell) == want;
      }
      pred = all;
    }
  }
  I.predicate = pred;
  // the remark: f(0) = 0, so n-to-1 on GF(q)* carries over to GF(q)
  I.A = detail::all_codes(F);
  I.lam_table[0] = 0;
  I.lambar_table[0] = 0;
  I.family = "mu" + std::to_string(ell);
  return I;
}

/// ((a-b)/2) x^((q-1)/2 + r) + ((a+b)/2) x^r, q = 3 (mod 4); n = 2.
inline FamilyInstance construct_miu2(const Field& F, std::uint64_t r, const Element& a, const Element& b,
                                     Mode mode = Mode::Strict) {
  const std::uint64_t q = F.order();
  if (F.p() == 2 || q % 4 != 3) fail(ErrorKind::InvalidArgument, "miu2 needs q = 3 (mod 4)");
  const std::uint64_t s = (q - 1) / 2;
  FamilyInstance I = construct_mu(F, 2, r, {a, b}, mode);
  const Element half = F.inv(F.from_int(2));
  I.f = PolyMap::from_terms(F, {{s + r, F.mul(half, F.sub(a, b))}, {r, F.mul(half, F.add(a, b))}});
  I.f_table = I.f.value_codes();
  // the displayed condition: a in S_1, b in S_{(-1)^r}, or a in S_{-1}, b in S_{(-1)^(r+1)}
  auto chi = [&](const Element& y) { return F.pow(y, s) == F.one() ? 1 : -1; };
  const int sign_r = r % 2 ? -1 : 1;
  I.predicate = !F.is_zero(a) && !F.is_zero(b) &&
                ((chi(a) == 1 && chi(b) == sign_r) || (chi(a) == -1 && chi(b) == -sign_r));
  I.family = "miu2";
  I.params = {{"r", std::to_string(r)}, {"a", std::to_string(F.code(a))}, {"b", std::to_string(F.code(b))}};
  return I;
}

inline FamilyInstance construct_miu3(const Field& F, std::uint64_t r, const Element& a, const Element& b,
                                     const Element& c, Mode mode = Mode::Strict) {
  if ((F.order() - 1) % 3) fail(ErrorKind::InvalidArgument, "miu3 needs 3 | q - 1");
  FamilyInstance I = construct_mu(F, 3, r, {a, b, c}, mode);
  I.family = "miu3";
  I.params = {{"r", std::to_string(r)}, {"a", std::to_string(F.code(a))}, {"b", std::to_string(F.code(b))},
              {"c", std::to_string(F.code(c))}};
  return I;
}

inline FamilyInstance construct_nmiu3(const Field& F, std::uint64_t r, const Element& a, const Element& b,
                                      const Element& c, const Element& d, Mode mode = Mode::Strict) {
  if (F.p() == 2 || (F.order() - 1) % 4) fail(ErrorKind::InvalidArgument, "nmiu3 needs odd q with 4 | q - 1");
  FamilyInstance I = construct_mu(F, 4, r, {a, b, c, d}, mode);
  I.family = "nmiu3";
  I.params = {{"r", std::to_string(r)}, {"a", std::to_string(F.code(a))}, {"b", std::to_string(F.code(b))},
              {"c", std::to_string(F.code(c))}, {"d", std::to_string(F.code(d))}};
  return I;
}

// --- lifting to an extension ---------------------------------------------------------------

/// f(x) = x^r h(x^((q^m-1)/(q-1)))^(1/p^t) over GF(q^m)*, where h has
/// coefficients in GF(q) = GF(p^e) and the root is the inverse Frobenius.
/// Predicate: x^r (h^(1/p^t))(x)^m is n-to-1 over GF(q)*.
inline FamilyInstance lift_to_extension(const Field& big, unsigned e, const PolyMap& h_sub, std::uint64_t r,
                                        std::uint64_t n, unsigned t = 0, Mode mode = Mode::Strict) {
  const Field& sub = h_sub.field();
  if (sub.p() != big.p() || sub.m() != e || big.m() % e) fail(ErrorKind::InvalidArgument, "h must live on a subfield");
  const SubfieldEmbed emb(big, sub);
  const std::uint64_t q = sub.order();
  const std::uint64_t m = big.m() / e;
  const std::uint64_t Q = big.order();
  const std::uint64_t S = (Q - 1) / (q - 1);
  FamilyInstance I = detail::new_instance("lift", big);
  I.n = n;
  detail::Hypotheses hyp(mode, I.warnings);
  hyp.require(std::gcd(q - 1, m) == 1, "gcd(q - 1, m) = 1");
  hyp.require((q - 1) % n == 0, "n | q - 1");
  // carried over from x^r h(x^s): fibres are cosets of mu_S, h must not vanish
  hyp.require(std::gcd(r, S) == 1, "gcd(r, (q^m-1)/(q-1)) = 1");
  for (const auto& y : sub.nonzero_elements())
    if (sub.is_zero(h_sub.eval(y))) {
      hyp.require(false, "h nonvanishing on GF(q)*", detail::code_str(sub, y));
      break;
    }
  const unsigned M = big.m();
  const unsigned root_big = (M - (t % M)) % M;  // x^(p^root_big) = x^(1/p^t) on GF(Q)

  // f = x^r * sum_j c_j^(1/p^t) x^(j S p^root_big mod (Q-1))
  std::vector<Term> terms;
  for (const auto& term : h_sub.terms()) {
    const Element c = big.frobenius(emb.embed(term.coeff), root_big);
    std::uint64_t ex = 0;
    if (term.exp) {
      unsigned __int128 v = static_cast<unsigned __int128>(term.exp % (Q - 1)) * S % (Q - 1);
      for (unsigned i = 0; i < root_big; ++i) v = v * big.p() % (Q - 1);
      ex = static_cast<std::uint64_t>(v);
      if (ex == 0) ex = Q - 1;
    }
    terms.push_back({r + ex, c});
  }
  I.f = PolyMap::from_terms(big, terms).reduce();
  I.f_table = I.f.value_codes();
  CodeOps ops(big);
  I.A = detail::nonzero_codes(big);
  I.lam_table.assign(Q, 0);
  for (auto x : I.A) I.lam_table[x] = ops.pow(x, S);
  I.lambar_table = I.lam_table;
  I.S = I.Sbar = detail::image_of(I.A, I.lam_table);
  // h^(1/p^t) evaluated pointwise on GF(Q)
  const auto hb = detail::tabulate(big, [&](const Element& y) {
    Element acc = big.zero();
    for (const auto& term : h_sub.terms()) acc = big.add(acc, big.mul(emb.embed(term.coeff), big.pow(y, term.exp)));
    return big.frobenius(acc, root_big);
  });
  I.g_table.assign(Q, 0);
  for (auto y : I.S) I.g_table[y] = ops.mul(ops.pow(y, r), ops.pow(hb[y], S));

  // predicate on the subfield itself: x^r h'(x)^m over GF(q)*, h' = h^(1/p^t)
  const unsigned root_sub = (e - (t % e)) % e;
  CodeOps sops(sub);
  const auto hs = h_sub.value_codes();
  std::vector<std::uint64_t> vals;
  for (std::uint64_t y = 1; y < q; ++y) {
    const std::uint64_t hr = sub.code(sub.frobenius(sub.from_code(hs[y]), root_sub));
    vals.push_back(sops.mul(sops.pow(y, r), sops.pow(hr, m)));
  }
  I.predicate = is_n_to_one(code_histogram(vals, q), n);
  I.params = {{"r", std::to_string(r)}, {"m", std::to_string(m)}, {"t", std::to_string(t)}};
  return I;
}

// --- g(x^(q^k) - x + delta) + c x ------------------------------------------------------------

/// F = GF(q^m), q = p^e.  h(x) = g(x)^(q^k) - g(x) + c x + (1 - c) delta on
/// S_delta = {x^(q^k) - x + delta}; c must lie in GF(q^l)*, l = gcd(k, m).
inline FamilyInstance zcriterion(const Field& F, unsigned e, unsigned k, const Element& delta, const Element& c,
                                 const PolyMap& g, std::uint64_t n, Mode mode = Mode::Strict) {
  if (e == 0 || F.m() % e) fail(ErrorKind::InvalidArgument, "base degree must divide m");
  const unsigned m = F.m() / e;
  if (k < 1 || k >= m) fail(ErrorKind::InvalidArgument, "need 1 <= k <= m - 1");
  const unsigned ell = std::gcd(k, m);
  const std::uint64_t Q = F.order();
  FamilyInstance I = detail::new_instance("zcriterion", F);
  I.n = n;
  detail::Hypotheses hyp(mode, I.warnings);
  hyp.require(!F.is_zero(c) && F.in_subfield(c, e * ell), "c in GF(q^l)*", detail::code_str(F, c));
  hyp.require(Q % n == 0, "n | q^m");
  const std::uint64_t s_size = checked_pow(checked_pow(F.p(), e), m - ell);
  hyp.require(s_size % n == 0, "n | #S_delta");

  const unsigned shift = e * k;
  const PolyMap phi = PolyMap::from_terms(
      F, {{checked_pow(F.p(), shift), F.one()}, {1, F.from_int(-1)}, {0, delta}});
  I.f = (compose_sparse(g, phi) + PolyMap::monomial(F, c, 1)).reduce();
  I.f_table = I.f.value_codes();
  I.A = detail::all_codes(F);
  I.lam_table = detail::tabulate(F, [&](const Element& x) { return F.add(F.sub(F.frobenius(x, shift), x), delta); });
  I.lambar_table = I.lam_table;
  I.S = I.Sbar = detail::image_of(I.A, I.lam_table);
  const auto gt = g.value_codes();
  const Element one_minus_c_delta = F.mul(F.sub(F.one(), c), delta);
  I.g_table.assign(Q, 0);
  for (auto y : I.S) {
    const Element gy = F.from_code(gt[y]);
    const Element v = F.add(F.add(F.sub(F.frobenius(gy, shift), gy), F.mul(c, F.from_code(y))), one_minus_c_delta);
    I.g_table[y] = F.code(v);
  }
  I.predicate = detail::nto1_on(I.S, I.g_table, Q, n);
  I.params = {{"k", std::to_string(k)}, {"delta", std::to_string(F.code(delta))}, {"c", std::to_string(F.code(c))}};
  return I;
}

/// tr_{q^2/q}(x) = x + x^q on GF(q^2), q = p^e.
inline Element trace_q2(const Field& F, unsigned e, const Element& x) { return F.add(x, F.frobenius(x, e)); }

/// One delta per value T of tr_{Q/q}, q = p^e: the first element in code
/// order with that trace.  Sorted by the code of T.
inline std::vector<std::pair<Element, Element>> trace_class_representatives(const Field& F, unsigned e) {
  std::map<std::uint64_t, Element> first;
  for (std::uint64_t c = 0; c < F.order(); ++c) {
    const Element d = F.from_code(c);
    first.emplace(F.code(F.trace_to(d, e)), d);
  }
  std::vector<std::pair<Element, Element>> out;
  for (const auto& [t, d] : first) out.emplace_back(F.from_code(t), d);
  return out;
}

/// The closed-form delta-condition of the cubic families, on T = tr_{q^2/q}(delta).
inline bool gouzao_predicate(int variant, const Field& F, unsigned e, std::uint64_t q1, const Element& T) {
  const std::uint64_t q = checked_pow(F.p(), e);
  auto nonsquare = [&](const Element& y) { return !F.is_zero(y) && !F.is_subfield_power(y, e, 2); };
  switch (variant) {
    case 1:
      return nonsquare(T);
    case 2: {
      if (F.is_zero(T)) return false;
      return nonsquare(F.div(F.sub(F.pow(T, 3 * q1), F.one()), T));
    }
    case 3:
      return nonsquare(F.sub(F.mul(T, T), F.one()));
    default:
      (void)q;
      fail(ErrorKind::InvalidArgument, "variant must be 1, 2 or 3");
  }
}

/// (x^q - x + delta)^e + x over GF(q^2), q = q1^m a power of 3, with
/// e = 6 q1, 3 q1 + 1, 2 q + 1 for variants 1, 2, 3; n = 3.
inline FamilyInstance construct_gouzao(int variant, const Field& F, std::uint64_t q1, const Element& delta,
                                       Mode mode = Mode::Strict) {
  if (F.p() != 3 || F.m() % 2) fail(ErrorKind::InvalidArgument, "gouzao families live on GF(3^(2e))");
  const unsigned e = F.m() / 2;
  const std::uint64_t q = checked_pow(3, e);
  if (exact_log(q1, 3) <= 0 || e % static_cast<unsigned>(exact_log(q1, 3)) != 0)
    fail(ErrorKind::InvalidArgument, "q must be a power of q1");
  std::vector<std::string> warnings;
  detail::Hypotheses hyp(mode, warnings);
  if (variant == 1 || variant == 2) {
    // (3 q1 q - 1)/2 computed without overflow for the sizes in play
    const std::uint64_t a = (3 * q1 * q - 1) / 2;
    hyp.require(std::gcd(a, q - 1) == 1, "gcd((3 q1 q - 1)/2, q - 1) = 1");
  }
  std::uint64_t ex = 0;
  switch (variant) {
    case 1: ex = 6 * q1; break;
    case 2: ex = 3 * q1 + 1; break;
    case 3: ex = 2 * q + 1; break;
    default: fail(ErrorKind::InvalidArgument, "variant must be 1, 2 or 3");
  }
  FamilyInstance I = zcriterion(F, e, 1, delta, F.one(), PolyMap::monomial(F, F.one(), ex), 3, mode);
  I.warnings.insert(I.warnings.begin(), warnings.begin(), warnings.end());
  I.family = "gouzao" + std::to_string(variant);
  I.predicate = gouzao_predicate(variant, F, e, q1, trace_q2(F, e, delta));
  I.params["q1"] = std::to_string(q1);
  I.params["exponent"] = std::to_string(ex);
  return I;
}

/// Variant A: (x^q + x + delta)^(q1+1) + x, n = q1, q = q1^m.
/// Variant B: (x^q + x + delta)^(3q) + x, n = 2.  Both over GF(q^2), p = 2.
inline bool binary_predicate(char variant, const Field& F, unsigned e, std::uint64_t q1, const Element& T) {
  if (variant == 'A') {
    if (F.is_zero(T)) return false;
    return F.is_subfield_power(F.add(F.one(), F.inv(T)), e, q1 - 1);
  }
  if (variant == 'B') return !F.is_zero(T) && T != F.one();
  fail(ErrorKind::InvalidArgument, "variant must be A or B");
}

inline FamilyInstance construct_binary(char variant, const Field& F, std::uint64_t q1, const Element& delta,
                                       Mode mode = Mode::Strict) {
  if (F.p() != 2 || F.m() % 2) fail(ErrorKind::InvalidArgument, "binary families live on GF(2^(2e))");
  const unsigned e = F.m() / 2;
  const std::uint64_t q = checked_pow(2, e);
  std::uint64_t ex = 0, n = 0;
  if (variant == 'A') {
    const int j = exact_log(q1, 2);
    if (j <= 0 || e % static_cast<unsigned>(j) != 0) fail(ErrorKind::InvalidArgument, "q must be a power of q1 >= 2");
    ex = q1 + 1;
    n = q1;
  } else if (variant == 'B') {
    ex = 3 * q;
    n = 2;
  } else {
    fail(ErrorKind::InvalidArgument, "variant must be A or B");
  }
  FamilyInstance I = zcriterion(F, e, 1, delta, F.one(), PolyMap::monomial(F, F.one(), ex), n, mode);
  I.family = std::string("2gouzao") + (variant == 'A' ? "1" : "2");
  I.predicate = binary_predicate(variant, F, e, q1, trace_q2(F, e, delta));
  I.params["q1"] = std::to_string(q1);
  I.params["exponent"] = std::to_string(ex);
  return I;
}

struct SweepRow {
  std::uint64_t trace = 0;  // code of T
  std::uint64_t delta = 0;  // code of the representative
  bool predicate = false;
  bool brute_force = false;
  bool agree() const { return predicate == brute_force; }
};

/// Runs build(delta) on one delta per trace class, in parallel.
template <class Build>
std::vector<SweepRow> trace_sweep(const Field& F, unsigned e, Build&& build, unsigned workers = 0) {
  const auto reps = trace_class_representatives(F, e);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(reps.size()));
  std::vector<SweepRow> rows(reps.size());
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < reps.size(); i += workers) {
          const auto inst = build(reps[i].second);
          const auto v = evaluate(inst);
          rows[i] = {F.code(reps[i].first), F.code(reps[i].second), v.predicate, v.f_nto1};
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& ep : errors)
    if (ep) std::rethrow_exception(ep);
  return rows;
}

}  // namespace nto1
