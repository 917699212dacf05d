#pragma once

// Acceptance criteria, one per theorem id.  Every threshold is pinned here;
// a criterion passes only if the check agrees everywhere and finishes within
// its time limit.

#include <chrono>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nto1/agw.hpp"
#include "nto1/families.hpp"
#include "nto1/ff_core.hpp"
#include "nto1/lowdeg.hpp"
#include "nto1/nto1_check.hpp"
#include "nto1/poly.hpp"
#include "nto1/walsh.hpp"

namespace nto1 {

struct CriterionResult {
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct Criterion {
  std::string id;
  std::string title;
  double time_limit_s;
  std::function<CriterionResult(unsigned workers)> run;
};

namespace acceptance {

inline constexpr std::uint64_t kSeed = 20240601;

/// Prime powers q <= bound as (p, m).
inline std::vector<std::pair<std::uint64_t, unsigned>> prime_powers(std::uint64_t bound) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p <= bound; ++p) {
    if (!is_prime(p)) continue;
    std::uint64_t q = p;
    for (unsigned m = 1; q <= bound; ++m, q *= p) out.emplace_back(p, m);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return checked_pow(a.first, a.second) < checked_pow(b.first, b.second);
  });
  return out;
}

class Tally {
 public:
  void check(bool ok, const std::string& witness) {
    ++checked_;
    if (!ok && failures_++ == 0) first_ = witness;
  }
  std::uint64_t checked() const { return checked_; }
  std::uint64_t failures() const { return failures_; }
  const std::string& first() const { return first_; }
  std::string summary() const {
    std::string s = std::to_string(checked_) + " checked, " + std::to_string(failures_) + " disagreements";
    if (failures_) s += " (first: " + first_ + ")";
    return s;
  }

 private:
  std::uint64_t checked_ = 0, failures_ = 0;
  std::string first_;
};

inline std::string field_name(const Field& F) {
  return "GF(" + std::to_string(F.p()) + (F.m() > 1 ? "^" + std::to_string(F.m()) : "") + ")";
}

inline std::vector<std::uint64_t> random_n_to_one_values(std::uint64_t q, std::uint64_t n, std::mt19937_64& rng) {
  std::vector<std::uint64_t> targets(q);
  std::iota(targets.begin(), targets.end(), 0);
  std::shuffle(targets.begin(), targets.end(), rng);
  std::vector<std::uint64_t> values;
  std::uint64_t b = 0;
  while (values.size() + n <= q) {
    for (std::uint64_t i = 0; i < n; ++i) values.push_back(targets[b]);
    ++b;
  }
  while (values.size() < q) values.push_back(targets[b]);
  std::shuffle(values.begin(), values.end(), rng);
  return values;
}

// --- criteria ----------------------------------------------------------------------------

inline CriterionResult monomial(unsigned) {
  Tally t;
  for (auto [p, m] : prime_powers(128)) {
    const Field F = Field::make(p, m);
    const std::uint64_t q = F.order();
    for (std::uint64_t d = 1; d < q; ++d) {
      const auto r = classify(PolyMap::monomial(F, F.one(), d));
      const std::uint64_t n = std::gcd(d, q - 1);
      const bool exc_ok = n > 1 ? (r.exception && r.exception->first == 0 && r.exception->second == 1) : !r.exception;
      t.check(r.n == n && exc_ok, field_name(F) + " d=" + std::to_string(d));
    }
  }
  return {t.failures() == 0, t.summary()};
}

inline CriterionResult linear(unsigned) {
  std::mt19937_64 rng(kSeed);
  Tally t;
  std::map<std::uint64_t, std::uint64_t> ranks_seen;
  for (auto [p, M] : prime_powers(4096)) {
    if (M < 2) continue;
    const Field F = Field::make(p, M);
    for (unsigned e = 1; e < M; ++e) {
      if (M % e) continue;
      const unsigned m = M / e;
      const auto prime = F.subfield_elements(1);
      for (int i = 0; i < 100; ++i) {
        std::vector<Element> c(m);
        for (auto& x : c) {
          switch (i % 3) {
            case 0: x = F.from_code(rng() % F.order()); break;
            case 1: x = prime[rng() % prime.size()]; break;
            default: x = rng() % 2 ? F.zero() : prime[rng() % prime.size()];
          }
        }
        const LinearizedPoly L(F, e, c);
        if (std::all_of(c.begin(), c.end(), [&](const Element& x) { return F.is_zero(x); })) continue;
        const auto r = classify(L.to_poly());
        const std::uint64_t want = linearized_oracle(L);
        ++ranks_seen[linearized_rank(L)];
        t.check(r.n == want && !r.exception, field_name(F) + " over GF(" + std::to_string(checked_pow(p, e)) + ")");
      }
    }
  }
  return {t.failures() == 0 && ranks_seen.size() > 1, t.summary() + ", " + std::to_string(ranks_seen.size()) + " distinct ranks"};
}

inline CriterionResult de3p3(unsigned) {
  Tally t;
  std::uint64_t pos27 = 0;
  for (unsigned m : {2u, 3u}) {
    const Field F = Field::make(3, m);
    for (const auto& row : cubic_sweep(F)) {
      t.check(row.agree(), field_name(F) + " a=" + std::to_string(row.a) + " b=" + std::to_string(row.b));
      if (m == 3) pos27 += row.brute_force;
    }
  }
  return {t.failures() == 0 && pos27 == 13, t.summary() + ", GF(27) positives " + std::to_string(pos27) + " (want 13)"};
}

inline CriterionResult de3pne3(unsigned) {
  Tally t;
  for (auto [p, m] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 2}, {5, 1}, {7, 1}, {2, 3}, {13, 1}, {2, 4}}) {
    const Field F = Field::make(p, m);
    for (const auto& row : cubic_sweep(F)) t.check(row.agree(), field_name(F) + " b=" + std::to_string(row.b));
  }
  return {t.failures() == 0, t.summary()};
}

inline CriterionResult quartic(unsigned workers) {
  std::string detail;
  bool ok = true;
  for (std::uint64_t q : {5, 7, 8, 9, 11, 13, 16, 17, 25, 27, 49}) {
    const auto [p, m] = [&] {
      for (auto pm : prime_powers(q))
        if (checked_pow(pm.first, pm.second) == q) return pm;
      return std::pair<std::uint64_t, unsigned>{0, 0};
    }();
    const auto res = quartic_3to1_search(Field::make(p, m), workers, kSeed);
    if (!res.hits.empty()) {
      ok = false;
      const auto& h = res.hits.front();
      detail += "q=" + std::to_string(q) + ": " + std::to_string(res.hits.size()) + " hits, e.g. (a,b,c)=(" +
                std::to_string(h[0]) + "," + std::to_string(h[1]) + "," + std::to_string(h[2]) + "); ";
    }
  }
  return {ok, detail.empty() ? "no 3-to-1 quartics for 4 < q <= 49" : detail};
}

inline CriterionResult walsh(unsigned) {
  std::mt19937_64 rng(kSeed);
  Tally t;
  for (auto [p, m] : std::vector<std::pair<std::uint64_t, unsigned>>{{3, 2}, {5, 2}, {3, 3}}) {
    const Field F = Field::make(p, m);
    const std::uint64_t q = F.order();
    const auto g1 = phi1(p, m);
    const auto g2 = phi2(p, m, 1);
    for (int i = 0; i < 500; ++i) {
      std::vector<std::uint64_t> values;
      switch (i % 4) {
        case 0: values = random_n_to_one_values(q, 2, rng); break;
        case 1: values = random_n_to_one_values(q, p, rng); break;
        case 2: {
          const PolyMap f = PolyMap::from_terms(
              F, {{1 + rng() % (q - 1), F.from_code(rng() % q)}, {1 + rng() % 6, F.from_code(rng() % q)}});
          values = f.value_codes();
          break;
        }
        default:
          values.resize(q);
          for (auto& v : values) v = rng() % q;
      }
      const auto h = code_histogram(values, q);
      const std::string w = field_name(F) + " map #" + std::to_string(i);
      t.check(spectral_verdict(F, values, g1) == is_n_to_one(h, 2), w + " phi1");
      t.check(spectral_verdict(F, values, g2) == is_n_to_one(h, p), w + " phi2");
    }
  }
  return {t.failures() == 0, t.summary()};
}

inline CriterionResult agwcore2(unsigned workers) {
  std::mt19937_64 rng(kSeed);
  std::uint64_t forward = 0, backward_applies = 0, backward_ok = 0, bad = 0;
  for (int i = 0; i < 200; ++i) {
    const auto d = random_diagram(random_diagram_params(rng, 100), rng);
    const auto c = verify_diagram(d, std::max(1u, workers));
    if (!c.ok()) {
      ++bad;
      continue;
    }
    const auto v = transfer(c);
    forward += v.forward_holds();
    if (v.backward_applies()) {
      ++backward_applies;
      backward_ok += v.f_nto1;
    }
  }
  std::ostringstream os;
  os << "forward " << forward << "/200, backward " << backward_ok << "/" << backward_applies << ", unverified " << bad;
  return {bad == 0 && forward == 200 && backward_ok == backward_applies, os.str()};
}

inline CriterionResult miu2(unsigned) {
  Tally t;
  for (std::uint64_t p : {7, 11}) {
    const Field F = Field::make(p, 1);
    const std::uint64_t s = (p - 1) / 2;
    const Element half = F.inv(F.from_int(2));
    for (std::uint64_t r = 1; r < p; ++r) {
      if (std::gcd(r, s) != 1) continue;
      for (std::uint64_t a = 1; a < p; ++a)
        for (std::uint64_t b = 1; b < p; ++b) {
          const Element A = F.from_code(a), B = F.from_code(b);
          const auto I = construct_miu2(F, r, A, B);
          std::vector<std::uint64_t> vals;
          for (const auto& x : F.elements())
            vals.push_back(F.code(F.add(F.mul(F.mul(half, F.sub(A, B)), F.pow(x, s + r)),
                                        F.mul(F.mul(half, F.add(A, B)), F.pow(x, r)))));
          t.check(I.predicate == is_n_to_one(code_histogram(vals, p), 2),
                  "GF(" + std::to_string(p) + ") r=" + std::to_string(r) + " a=" + std::to_string(a) + " b=" + std::to_string(b));
        }
    }
  }
  return {t.failures() == 0, t.summary()};
}

inline CriterionResult mu_sweep(std::uint64_t ell) {
  const Field F = Field::make(13, 1);
  const std::uint64_t s = 12 / ell;
  std::vector<Element> reps;
  for (std::uint64_t j = 0; j < ell; ++j) reps.push_back(F.pow(F.beta(), j));
  Tally t;
  std::uint64_t positives = 0;
  for (std::uint64_t r = 1; r < 13; ++r) {
    if (std::gcd(r, s) != 1) continue;
    std::vector<std::size_t> idx(ell, 0);
    for (;;) {
      std::vector<Element> v;
      for (auto i : idx) v.push_back(reps[i]);
      const auto I = ell == 3 ? construct_miu3(F, r, v[0], v[1], v[2]) : construct_nmiu3(F, r, v[0], v[1], v[2], v[3]);
      const bool brute = is_n_to_one(code_histogram(I.f_table, 13), ell);
      positives += brute;
      std::string w = "r=" + std::to_string(r) + " classes";
      for (auto i : idx) w += " " + std::to_string(i);
      t.check(I.predicate == brute, w);
      std::size_t k = 0;
      while (k < ell && ++idx[k] == ell) idx[k++] = 0;
      if (k == ell) break;
    }
  }
  return {t.failures() == 0 && positives > 0, t.summary() + ", " + std::to_string(positives) + " positive"};
}

inline CriterionResult piecewise(unsigned) {
  std::mt19937_64 rng(kSeed);
  Tally t;
  for (auto [p, m] : std::vector<std::pair<std::uint64_t, unsigned>>{{7, 1}, {13, 1}, {5, 2}}) {
    const Field F = Field::make(p, m);
    const std::uint64_t q = F.order();
    std::vector<std::uint64_t> ells;
    for (std::uint64_t l = 2; l < q; ++l)
      if ((q - 1) % l == 0) ells.push_back(l);
    for (int i = 0; i < 100; ++i) {
      const std::uint64_t ell = ells[rng() % ells.size()];
      std::vector<std::uint64_t> ns;
      for (std::uint64_t n = 1; n <= ell; ++n)
        if (ell % n == 0) ns.push_back(n);
      const auto P = random_piecewise_spec(F, ell, ns[rng() % ns.size()], rng);
      const auto sol = solve_piecewise(P);
      bool post = true;
      for (std::uint64_t k = 0; k < ell; ++k) {
        const std::int64_t ex = static_cast<std::int64_t>(ell * P.m[k] + P.a[k]) - static_cast<std::int64_t>(k * P.r);
        post = post && sol.h.eval(F.pow(sol.omega, k)) == F.pow_signed(F.beta(), ex);
      }
      t.check(post && classify(sol.f).n == P.n,
              field_name(F) + " ell=" + std::to_string(ell) + " n=" + std::to_string(P.n) + " r=" + std::to_string(P.r));
    }
  }
  return {t.failures() == 0, t.summary()};
}

inline CriterionResult sweep_count(const std::vector<SweepRow>& rows, std::uint64_t want) {
  Tally t;
  std::uint64_t positives = 0;
  for (const auto& r : rows) {
    t.check(r.agree(), "trace code " + std::to_string(r.trace) + " delta code " + std::to_string(r.delta));
    positives += r.brute_force;
  }
  return {t.failures() == 0 && positives == want,
          std::to_string(rows.size()) + " trace classes, " + std::to_string(positives) + " positive (want " +
              std::to_string(want) + "), " + std::to_string(t.failures()) + " predicate disagreements"};
}

inline CriterionResult gouzao(int variant, std::uint64_t want, unsigned workers) {
  const Field F = Field::make(3, 6);
  return sweep_count(trace_sweep(F, 3, [&](const Element& d) { return construct_gouzao(variant, F, 27, d); }, workers),
                     want);
}

inline CriterionResult binary(char variant, unsigned workers) {
  if (variant == 'A') {
    const Field F = Field::make(2, 12);
    return sweep_count(trace_sweep(F, 6, [&](const Element& d) { return construct_binary('A', F, 4, d); }, workers), 20);
  }
  const Field F = Field::make(2, 8);
  return sweep_count(trace_sweep(F, 4, [&](const Element& d) { return construct_binary('B', F, 0, d); }, workers), 14);
}

inline CriterionResult zcriterion_random(unsigned) {
  std::mt19937_64 rng(kSeed);
  const std::vector<std::pair<std::uint64_t, unsigned>> fields{{2, 2}, {2, 3}, {3, 2}, {2, 4}, {3, 3},
                                                              {2, 6}, {5, 2}, {2, 8}, {3, 4}, {2, 10}};
  Tally t;
  std::uint64_t positives = 0;
  for (int i = 0; i < 100; ++i) {
    const auto [p, M] = fields[i % fields.size()];
    const Field F = Field::make(p, M);
    std::vector<unsigned> es;
    for (unsigned e = 1; e < M; ++e)
      if (M % e == 0) es.push_back(e);
    const unsigned e = es[rng() % es.size()];
    const unsigned m = M / e;
    const unsigned k = 1 + rng() % (m - 1);
    const unsigned ell = std::gcd(k, m);
    const auto sub = F.subfield_elements(e * ell);
    Element c = sub[rng() % sub.size()];
    if (F.is_zero(c)) c = F.one();
    const std::uint64_t s_size = checked_pow(checked_pow(p, e), m - ell);
    std::vector<std::uint64_t> ns;
    for (std::uint64_t n = 1; n <= s_size; n *= p) ns.push_back(n);
    const std::uint64_t n = ns[rng() % ns.size()];
    // half of the maps are monomials g = x^d, which reach the n-to-1 regime more often
    const PolyMap g = rng() % 2 ? PolyMap::monomial(F, F.one(), 1 + rng() % (F.order() - 1))
                                : PolyMap::from_terms(F, {{1 + rng() % (F.order() - 1), F.from_code(rng() % F.order())},
                                                          {rng() % 6, F.from_code(rng() % F.order())}});
    const Element delta = F.from_code(rng() % F.order());
    const auto I = zcriterion(F, e, k, delta, c, g, n);
    const auto v = evaluate(I);
    positives += v.f_nto1;
    t.check(v.equivalence(), field_name(F) + " e=" + std::to_string(e) + " k=" + std::to_string(k) +
                                 " n=" + std::to_string(n) + " delta=" + std::to_string(F.code(delta)));
  }
  return {t.failures() == 0, t.summary() + ", " + std::to_string(positives) + " n-to-1"};
}

inline CriterionResult normalize_invariance(unsigned) {
  std::mt19937_64 rng(kSeed);
  Tally t;
  for (auto [p, m] : prime_powers(343)) {
    const Field F = Field::make(p, m);
    const std::uint64_t q = F.order();
    for (int i = 0; i < 200; ++i) {
      std::vector<Term> terms;
      const std::uint64_t deg = 1 + rng() % std::min<std::uint64_t>(8, q - 1);
      terms.push_back({deg, F.from_code(1 + rng() % (q - 1))});
      for (std::uint64_t j = 0; j < deg; ++j)
        if (rng() % 2) terms.push_back({j, F.from_code(rng() % q)});
      const PolyMap f = PolyMap::from_terms(F, terms);
      const Element a = F.from_code(1 + rng() % (q - 1)), b = F.from_code(rng() % q), c = F.from_code(rng() % q);
      std::vector<std::uint64_t> vals(q);
      for (std::uint64_t x = 0; x < q; ++x) vals[x] = F.code(affine_eval(f, a, b, c, F.from_code(x)));
      const auto r1 = classify(f);
      const auto r2 = classify_values(vals, q);
      const bool same = r1.n == r2.n && r1.exception.has_value() == r2.exception.has_value() &&
                        (!r1.exception || r1.exception->second == r2.exception->second);
      t.check(same, field_name(F) + " sample " + std::to_string(i));
    }
  }
  return {t.failures() == 0, t.summary()};
}

}  // namespace acceptance

/// The frozen criterion registry, in report order.
inline const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"monomial", "x^d is gcd(d, q-1)-to-1 for q <= 128", 10, acceptance::monomial},
      {"linear", "q-polynomials are q^(m-rank)-to-1 for q^m <= 2^12", 60, acceptance::linear},
      {"de3p3", "cubics in characteristic 3 over GF(9), GF(27)", 5, acceptance::de3p3},
      {"de3pne3", "cubics x^3 + bx for p != 3", 5, acceptance::de3pne3},
      {"quartic", "no 3-to-1 normalized quartics for 4 < q <= 49", 60, acceptance::quartic},
      {"walsh", "Walsh characterization over GF(9), GF(25), GF(27)", 300, acceptance::walsh},
      {"agwcore2", "transfer theorem on 200 random diagrams", 60, acceptance::agwcore2},
      {"miu2", "two-coset construction over GF(7), GF(11)", 10, acceptance::miu2},
      {"miu3", "three-coset construction over GF(13)", 10, [](unsigned) { return acceptance::mu_sweep(3); }},
      {"nmiu3", "four-coset construction over GF(13)", 10, [](unsigned) { return acceptance::mu_sweep(4); }},
      {"piecewisegenerel", "Vandermonde piecewise construction", 30, acceptance::piecewise},
      {"gouzao1", "(x^q - x + d)^(6 q1) + x at q = q1 = 27", 120, [](unsigned w) { return acceptance::gouzao(1, 13, w); }},
      {"gouzao2", "(x^q - x + d)^(3 q1 + 1) + x at q = q1 = 27", 120, [](unsigned w) { return acceptance::gouzao(2, 13, w); }},
      {"gouzao3", "(x^q - x + d)^(2q + 1) + x at q = 27", 120, [](unsigned w) { return acceptance::gouzao(3, 6, w); }},
      {"2gouzao1", "(x^q + x + d)^(q1 + 1) + x at q1 = 4, q = 64", 300, [](unsigned w) { return acceptance::binary('A', w); }},
      {"2gouzao2", "(x^q + x + d)^(3q) + x at q = 16", 60, [](unsigned w) { return acceptance::binary('B', w); }},
      {"Zcriterion", "g(x^(q^k) - x + d) + cx transfer on 100 random instances", 60, acceptance::zcriterion_random},
      {"normalize", "classification is invariant under a f(x + b) + c", 60, acceptance::normalize_invariance},
  };
  return all;
}

inline const Criterion* find_criterion(const std::string& id) {
  for (const auto& c : criteria())
    if (c.id == id) return &c;
  return nullptr;
}

/// Runs one criterion; exceptions count as failures.
inline CriterionResult run_criterion(const Criterion& c, unsigned workers = 0) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = c.run(workers);
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.pass && r.seconds > c.time_limit_s) {
    r.pass = false;
    r.detail += "; over time limit";
  }
  return r;
}

inline std::string format_result(const Criterion& c, const CriterionResult& r) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << (r.pass ? "PASS " : "FAIL ") << c.id << ": " << r.detail << " [" << r.seconds << " s, limit " << c.time_limit_s
     << " s]";
  return os.str();
}

}  // namespace nto1
