#pragma once

// Commutative squares
//
//        f
//    A -----> A
//    |        |
//  lam      lambar
//    v   g    v
//    S -----> Sbar
//
// with f bijective from every fibre lam^-1(s) onto lambar^-1(g(s)).  Under
// #S = #Sbar > 1 and #A = #S (mod n), f n-to-1 implies g n-to-1, and the
// converse holds when n | #S or the exceptional value of g has a one-point
// lambar-fibre.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "nto1/error.hpp"
#include "nto1/nto1_check.hpp"

namespace nto1 {

inline constexpr std::uint64_t kMaxDiagramSet = std::uint64_t{1} << 20;

template <class Label>
struct DiagramSpec {
  std::vector<Label> A, S, Sbar;
  std::function<Label(const Label&)> f, g, lam, lambar;
  std::uint64_t n = 1;
};

enum class Hypothesis { Cardinality, Membership, LamSurjective, LambarSurjective, Commutation, FiberBijective };

inline const char* to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::Cardinality: return "cardinality";
    case Hypothesis::Membership: return "membership";
    case Hypothesis::LamSurjective: return "lam-surjective";
    case Hypothesis::LambarSurjective: return "lambar-surjective";
    case Hypothesis::Commutation: return "commutation";
    case Hypothesis::FiberBijective: return "fiber-bijective";
  }
  return "?";
}

/// A failed hypothesis.  Witness indices point into the named set.
struct Violation {
  Hypothesis kind;
  std::string detail;
  std::optional<std::size_t> witness_a;  // index into A
  std::optional<std::size_t> witness_s;  // index into S (or Sbar for lambar-surjective)
};

struct FiberEntry {
  std::uint64_t fiber_size = 0;        // #lam^-1(s)
  std::uint64_t image_fiber_size = 0;  // #lambar^-1(g(s))
  bool bijective = false;
};

/// Index tables for the four maps plus per-s fibre data.
struct FiberReport {
  std::vector<std::size_t> f, lam, lambar, g;
  std::vector<FiberEntry> fibers;  // indexed by S
  std::uint64_t size_a = 0, size_s = 0, size_sbar = 0, n = 1;
};

struct DiagramCheck {
  FiberReport report;
  std::optional<Violation> violation;
  bool ok() const { return !violation; }
};

namespace detail {

template <class Label>
std::map<Label, std::size_t> index_of(const std::vector<Label>& set, const char* name) {
  std::map<Label, std::size_t> idx;
  for (std::size_t i = 0; i < set.size(); ++i)
    if (!idx.emplace(set[i], i).second) fail(ErrorKind::InvalidArgument, std::string("duplicate element in ") + name);
  return idx;
}

}  // namespace detail

/// Checks every hypothesis, stopping at the first violation (cardinality,
/// membership, surjectivity, commutation, then fibres in S order).
template <class Label>
DiagramCheck verify_diagram(const DiagramSpec<Label>& d, unsigned workers = 1) {
  for (auto sz : {d.A.size(), d.S.size(), d.Sbar.size()})
    if (sz > kMaxDiagramSet) fail(ErrorKind::SetTooLarge, "diagram sets limited to 2^20 elements");
  if (d.n == 0) fail(ErrorKind::InvalidArgument, "n must be positive");
  DiagramCheck out;
  auto& r = out.report;
  r.size_a = d.A.size();
  r.size_s = d.S.size();
  r.size_sbar = d.Sbar.size();
  r.n = d.n;
  auto violate = [&](Hypothesis h, std::string msg, std::optional<std::size_t> a = {},
                     std::optional<std::size_t> s = {}) {
    out.violation = Violation{h, std::move(msg), a, s};
    return out;
  };

  if (r.size_s != r.size_sbar || r.size_s <= 1)
    return violate(Hypothesis::Cardinality, "#S = #Sbar > 1 fails");
  if (r.size_a % d.n != r.size_s % d.n) return violate(Hypothesis::Cardinality, "#A != #S (mod n)");

  const auto ia = detail::index_of(d.A, "A");
  const auto is = detail::index_of(d.S, "S");
  const auto isb = detail::index_of(d.Sbar, "Sbar");
  auto lookup = [](const auto& idx, const Label& x) -> std::optional<std::size_t> {
    auto it = idx.find(x);
    if (it == idx.end()) return std::nullopt;
    return it->second;
  };

  r.f.resize(r.size_a);
  r.lam.resize(r.size_a);
  r.lambar.resize(r.size_a);
  r.g.resize(r.size_s);
  for (std::size_t i = 0; i < r.size_a; ++i) {
    const auto fi = lookup(ia, d.f(d.A[i]));
    const auto li = lookup(is, d.lam(d.A[i]));
    const auto bi = lookup(isb, d.lambar(d.A[i]));
    if (!fi || !li || !bi) return violate(Hypothesis::Membership, "map leaves its codomain", i);
    r.f[i] = *fi;
    r.lam[i] = *li;
    r.lambar[i] = *bi;
  }
  for (std::size_t s = 0; s < r.size_s; ++s) {
    const auto gi = lookup(isb, d.g(d.S[s]));
    if (!gi) return violate(Hypothesis::Membership, "g leaves Sbar", std::nullopt, s);
    r.g[s] = *gi;
  }

  std::vector<std::uint64_t> lam_size(r.size_s, 0), lambar_size(r.size_sbar, 0);
  for (std::size_t i = 0; i < r.size_a; ++i) {
    ++lam_size[r.lam[i]];
    ++lambar_size[r.lambar[i]];
  }
  for (std::size_t s = 0; s < r.size_s; ++s)
    if (!lam_size[s]) return violate(Hypothesis::LamSurjective, "lam misses an element of S", std::nullopt, s);
  for (std::size_t s = 0; s < r.size_sbar; ++s)
    if (!lambar_size[s])
      return violate(Hypothesis::LambarSurjective, "lambar misses an element of Sbar", std::nullopt, s);

  for (std::size_t i = 0; i < r.size_a; ++i)
    if (r.lambar[r.f[i]] != r.g[r.lam[i]])
      return violate(Hypothesis::Commutation, "lambar(f(x)) != g(lam(x))", i);

  // Commutation puts f(lam^-1(s)) inside lambar^-1(g(s)); bijective iff f is
  // injective on the fibre and the sizes agree.
  std::vector<std::vector<std::size_t>> fiber(r.size_s);
  for (std::size_t i = 0; i < r.size_a; ++i) fiber[r.lam[i]].push_back(i);
  r.fibers.assign(r.size_s, {});
  std::vector<std::optional<std::size_t>> bad_a(r.size_s);
  auto check_range = [&](std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> images;
    for (std::size_t s = lo; s < hi; ++s) {
      auto& e = r.fibers[s];
      e.fiber_size = fiber[s].size();
      e.image_fiber_size = lambar_size[r.g[s]];
      images.clear();
      for (auto i : fiber[s]) images.push_back(r.f[i]);
      std::sort(images.begin(), images.end());
      const auto dup = std::adjacent_find(images.begin(), images.end());
      e.bijective = dup == images.end() && e.fiber_size == e.image_fiber_size;
      if (!e.bijective) {
        if (dup != images.end()) {
          for (auto i : fiber[s])
            if (r.f[i] == *dup) {
              bad_a[s] = i;
              break;
            }
        } else {
          bad_a[s] = fiber[s].front();
        }
      }
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(r.size_s)));
  if (workers == 1) {
    check_range(0, r.size_s);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back(check_range, r.size_s * w / workers, r.size_s * (w + 1) / workers);
    for (auto& t : pool) t.join();
  }
  for (std::size_t s = 0; s < r.size_s; ++s)
    if (!r.fibers[s].bijective)
      return violate(Hypothesis::FiberBijective, "f is not a bijection lam^-1(s) -> lambar^-1(g(s))", bad_a[s], s);
  return out;
}

struct TransferVerdict {
  NTo1Report<std::uint64_t> f_report;  // keys are indices into A
  NTo1Report<std::uint64_t> g_report;  // keys are indices into Sbar
  bool f_nto1 = false;                 // statement (1)
  bool g_nto1 = false;                 // statement (2)
  bool condition3 = false;             // statement (3)
  std::optional<std::size_t> exception_sbar;

  bool forward_holds() const { return !f_nto1 || g_nto1; }
  bool backward_applies() const { return g_nto1 && condition3; }
  bool backward_holds() const { return !backward_applies() || f_nto1; }
};

namespace detail {

inline std::vector<std::uint64_t> counts_of(const std::vector<std::size_t>& map, std::size_t range) {
  std::vector<std::uint64_t> c(range, 0);
  for (auto y : map) ++c[y];
  return c;
}

inline std::vector<std::pair<std::uint64_t, std::uint64_t>> nonzero_counts(const std::vector<std::uint64_t>& c) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (std::size_t y = 0; y < c.size(); ++y)
    if (c[y]) out.emplace_back(y, c[y]);
  return out;
}

}  // namespace detail

/// Evaluates statements (1), (2), (3) on a verified diagram.
inline TransferVerdict transfer(const DiagramCheck& check) {
  if (!check.ok()) fail(ErrorKind::HypothesesNotVerified, "diagram hypotheses failed: " + check.violation->detail);
  const auto& r = check.report;
  TransferVerdict v;
  const auto fc = detail::counts_of(r.f, r.size_a);
  const auto gc = detail::counts_of(r.g, r.size_sbar);
  const auto fnz = detail::nonzero_counts(fc);
  const auto gnz = detail::nonzero_counts(gc);
  v.f_report = detail::classify_counts<std::uint64_t>(fnz, r.size_a);
  v.g_report = detail::classify_counts<std::uint64_t>(gnz, r.size_s);
  v.f_nto1 = detail::is_n_to_one_counts<std::uint64_t>(fnz, r.size_a, r.n);
  v.g_nto1 = detail::is_n_to_one_counts<std::uint64_t>(gnz, r.size_s, r.n);

  if (r.size_s % r.n == 0) {
    v.condition3 = true;
  } else {
    const std::uint64_t t = r.size_a % r.n;
    std::vector<std::size_t> exceptional;
    for (const auto& [y, c] : gnz)
      if (c != r.n) exceptional.push_back(y);
    // a tie means g is irregular and there is no well-defined exception
    if (exceptional.size() == 1 && gc[exceptional[0]] == t) {
      v.exception_sbar = exceptional[0];
      std::uint64_t fibre = 0;
      for (auto b : r.lambar) fibre += b == exceptional[0];
      v.condition3 = fibre == 1;
    }
  }
  return v;
}

template <class Label>
TransferVerdict transfer(const DiagramSpec<Label>& d) {
  return transfer(verify_diagram(d));
}

// --- random diagrams ------------------------------------------------------------

/// Parameters of a random balanced diagram: #S = #Sbar = k, every lambar-fibre
/// has m points, so #A = k m.
struct RandomDiagramParams {
  std::uint64_t n = 2;
  std::uint64_t k = 4;
  std::uint64_t m = 1;
  bool g_n_to_one = true;  // build g as an n-to-1 map, else uniformly random
};

/// Labels are 0..#set-1.  lambar(a) = a / m; lam is a random balanced
/// surjection; f sends lam^-1(s) bijectively onto lambar^-1(g(s)).
inline DiagramSpec<std::uint64_t> random_diagram(const RandomDiagramParams& P, std::mt19937_64& rng) {
  if (P.k < 2 || P.m < 1 || P.n < 1) fail(ErrorKind::InvalidArgument, "need k >= 2, m >= 1, n >= 1");
  const std::uint64_t k = P.k, m = P.m, size_a = k * m;
  std::vector<std::uint64_t> g(k);
  if (P.g_n_to_one) {
    std::vector<std::uint64_t> targets(k);
    std::iota(targets.begin(), targets.end(), 0);
    std::shuffle(targets.begin(), targets.end(), rng);
    for (std::uint64_t s = 0; s < k; ++s) g[s] = targets[s / P.n];
    std::shuffle(g.begin(), g.end(), rng);
  } else {
    for (auto& y : g) y = rng() % k;
  }
  std::vector<std::uint64_t> perm(size_a);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::uint64_t> lam(size_a), f(size_a);
  for (std::uint64_t s = 0; s < k; ++s) {
    std::vector<std::uint64_t> image(m);
    std::iota(image.begin(), image.end(), g[s] * m);
    std::shuffle(image.begin(), image.end(), rng);
    for (std::uint64_t j = 0; j < m; ++j) {
      const std::uint64_t a = perm[s * m + j];
      lam[a] = s;
      f[a] = image[j];
    }
  }
  DiagramSpec<std::uint64_t> d;
  d.A.resize(size_a);
  std::iota(d.A.begin(), d.A.end(), 0);
  d.S.resize(k);
  std::iota(d.S.begin(), d.S.end(), 0);
  d.Sbar = d.S;
  d.f = [f](const std::uint64_t& a) { return f[a]; };
  d.g = [g](const std::uint64_t& s) { return g[s]; };
  d.lam = [lam](const std::uint64_t& a) { return lam[a]; };
  d.lambar = [m](const std::uint64_t& a) { return a / m; };
  d.n = P.n;
  return d;
}

/// Random parameters with k m <= max_a and k (m - 1) = 0 (mod n).
inline RandomDiagramParams random_diagram_params(std::mt19937_64& rng, std::uint64_t max_a = 100) {
  for (;;) {
    RandomDiagramParams P;
    P.n = 1 + rng() % 5;
    P.k = 2 + rng() % 30;
    P.m = 1 + rng() % 4;
    P.g_n_to_one = rng() % 4 != 0;
    if (P.k * P.m <= max_a && (P.k * (P.m - 1)) % P.n == 0) return P;
  }
}

}  // namespace nto1
