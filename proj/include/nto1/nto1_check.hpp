#pragma once

// Brute-force n-to-1 classification.
//
// A map f: A -> B is n-to-1 when every value has n or 0 preimages, except that
// when n does not divide #A exactly one value has #A mod n preimages.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "nto1/error.hpp"
#include "nto1/ff_core.hpp"
#include "nto1/poly.hpp"

namespace nto1 {

inline constexpr std::uint64_t kMaxDomain = std::uint64_t{1} << 22;

template <class Key>
using Histogram = std::map<Key, std::uint64_t>;

template <class Key>
struct NTo1Report {
  std::uint64_t n = 0;  // 0 when irregular
  std::optional<std::pair<Key, std::uint64_t>> exception;
  std::uint64_t domain_size = 0;
  std::uint64_t image_size = 0;
  std::vector<std::uint64_t> conflict;  // two smallest conflicting counts when irregular

  bool irregular() const { return n == 0; }
};

namespace detail {

// counts: (key, count) pairs with count > 0, in key order.
template <class Key>
NTo1Report<Key> classify_counts(const std::vector<std::pair<Key, std::uint64_t>>& counts, std::uint64_t domain) {
  if (domain == 0) fail(ErrorKind::InvalidArgument, "empty domain");
  NTo1Report<Key> r;
  r.domain_size = domain;
  r.image_size = counts.size();
  std::uint64_t total = 0;
  std::map<std::uint64_t, std::uint64_t> mult;  // count -> how many values have it
  for (const auto& [k, c] : counts) {
    total += c;
    ++mult[c];
  }
  if (total != domain) fail(ErrorKind::InvalidArgument, "histogram does not sum to the domain size");

  if (mult.size() == 1) {
    r.n = mult.begin()->first;
    return r;
  }
  if (mult.size() == 2) {
    const auto [small, small_mult] = *mult.begin();
    const auto big = std::prev(mult.end())->first;
    if (small_mult == 1 && domain % big == small) {
      r.n = big;
      for (const auto& [k, c] : counts)
        if (c == small) r.exception = std::make_pair(k, c);
      return r;
    }
  }
  auto it = mult.begin();
  r.conflict.push_back(it->first);
  r.conflict.push_back(std::next(it)->first);
  return r;
}

template <class Key>
bool is_n_to_one_counts(const std::vector<std::pair<Key, std::uint64_t>>& counts, std::uint64_t domain,
                        std::uint64_t n) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "n must be positive");
  const std::uint64_t t = domain % n;
  std::uint64_t exceptional = 0;
  for (const auto& [k, c] : counts) {
    if (c == n) continue;
    if (t != 0 && c == t && exceptional == 0) {
      exceptional = 1;
      continue;
    }
    return false;
  }
  return t == 0 || exceptional == 1;
}

}  // namespace detail

// --- generic maps over enumerated domains ---------------------------------------

template <class Key, class Domain, class Fn>
Histogram<Key> histogram(const Domain& domain, Fn&& f) {
  if (std::size(domain) > kMaxDomain) fail(ErrorKind::DomainTooLarge, "domain above 2^22");
  Histogram<Key> h;
  for (const auto& x : domain) ++h[static_cast<Key>(f(x))];
  return h;
}

/// Same histogram computed over disjoint chunks and merged.
template <class Key, class Domain, class Fn>
Histogram<Key> histogram_parallel(const Domain& domain, Fn&& f, unsigned workers) {
  const std::size_t n = std::size(domain);
  if (n > kMaxDomain) fail(ErrorKind::DomainTooLarge, "domain above 2^22");
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::vector<Histogram<Key>> parts(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = n * w / workers;
      const std::size_t hi = n * (w + 1) / workers;
      auto it = std::begin(domain);
      std::advance(it, lo);
      for (std::size_t i = lo; i < hi; ++i, ++it) ++parts[w][static_cast<Key>(f(*it))];
    });
  }
  for (auto& t : pool) t.join();
  Histogram<Key> merged;
  for (const auto& part : parts)
    for (const auto& [k, c] : part) merged[k] += c;
  return merged;
}

template <class Key>
NTo1Report<Key> classify(const Histogram<Key>& h, std::uint64_t domain_size) {
  std::vector<std::pair<Key, std::uint64_t>> counts(h.begin(), h.end());
  return detail::classify_counts(counts, domain_size);
}

template <class Key>
bool is_n_to_one(const Histogram<Key>& h, std::uint64_t domain_size, std::uint64_t n) {
  std::vector<std::pair<Key, std::uint64_t>> counts(h.begin(), h.end());
  return detail::is_n_to_one_counts(counts, domain_size, n);
}

template <class Key, class Domain, class Fn>
NTo1Report<Key> classify_map(const Domain& domain, Fn&& f) {
  return classify(histogram<Key>(domain, std::forward<Fn>(f)), std::size(domain));
}

// --- maps on field elements, keyed by element code ------------------------------

/// Preimage counts indexed by value code.
struct CodeHistogram {
  std::vector<std::uint32_t> count;
  std::uint64_t domain_size = 0;

  std::vector<std::pair<std::uint64_t, std::uint64_t>> nonzero() const {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    for (std::uint64_t v = 0; v < count.size(); ++v)
      if (count[v]) out.emplace_back(v, count[v]);
    return out;
  }
};

/// values[i] is the code of f at the i-th domain point; codes are < range.
inline CodeHistogram code_histogram(const std::vector<std::uint64_t>& values, std::uint64_t range) {
  if (values.size() > kMaxDomain) fail(ErrorKind::DomainTooLarge, "domain above 2^22");
  CodeHistogram h;
  h.count.assign(range, 0);
  h.domain_size = values.size();
  for (auto v : values) {
    if (v >= range) fail(ErrorKind::InvalidArgument, "value code out of range");
    ++h.count[v];
  }
  return h;
}

inline NTo1Report<std::uint64_t> classify(const CodeHistogram& h) {
  return detail::classify_counts(h.nonzero(), h.domain_size);
}

inline bool is_n_to_one(const CodeHistogram& h, std::uint64_t n) {
  return detail::is_n_to_one_counts(h.nonzero(), h.domain_size, n);
}

inline NTo1Report<std::uint64_t> classify_values(const std::vector<std::uint64_t>& values, std::uint64_t range) {
  return classify(code_histogram(values, range));
}

/// Classification of a polynomial over its whole field.
inline NTo1Report<std::uint64_t> classify(const PolyMap& f) {
  return classify_values(f.value_codes(), f.field().order());
}

/// Classification of any field map over a subset of its field (codes).
template <class Fn>
NTo1Report<std::uint64_t> classify_on(const Field& F, const std::vector<std::uint64_t>& domain, Fn&& f) {
  std::vector<std::uint64_t> values;
  values.reserve(domain.size());
  for (auto x : domain) values.push_back(f(x));
  return classify_values(values, F.order());
}

inline bool reports_equal(const NTo1Report<std::uint64_t>& a, const NTo1Report<std::uint64_t>& b) {
  return a.n == b.n && a.exception == b.exception && a.domain_size == b.domain_size;
}

// --- closed-form oracles --------------------------------------------------------

/// a x^d over GF(q) is gcd(d, q-1)-to-1.
inline std::uint64_t monomial_oracle(const Field& F, const Element& a, std::uint64_t d) {
  if (F.is_zero(a)) fail(ErrorKind::ZeroInput, "monomial coefficient must be nonzero");
  if (d == 0) fail(ErrorKind::InvalidArgument, "exponent must be positive");
  return std::gcd(d, F.order() - 1);
}

/// A q-polynomial of rank k over GF(q^m) is q^(m-k)-to-1.
inline std::uint64_t linearized_oracle(const LinearizedPoly& L) {
  return checked_pow(L.q_sub(), L.ext_degree() - linearized_rank(L));
}

}  // namespace nto1
