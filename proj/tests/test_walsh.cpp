#include <gtest/gtest.h>

#include <random>

#include "nto1/nto1_check.hpp"
#include "nto1/walsh.hpp"

using namespace nto1;

namespace {

// sum_b phi(#f^{-1}(b)) straight from the histogram.
Rational direct_sum(const Field& F, const std::vector<std::uint64_t>& values, const PhiGadget& g) {
  const auto h = code_histogram(values, F.order());
  Rational total = 0;
  for (auto n : h.count) total += g.eval(Rational(BigInt(n)));
  return total;
}

std::vector<std::uint64_t> random_n_to_one(const Field& F, std::uint64_t n, std::mt19937_64& rng) {
  const std::uint64_t q = F.order();
  std::vector<std::uint64_t> targets(q);
  for (std::uint64_t b = 0; b < q; ++b) targets[b] = b;
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

}  // namespace

TEST(Cyclo, RingIdentities) {
  const auto w = CycloInt::omega_power(5, 1);
  auto acc = CycloInt::integer(5, 1);
  for (int i = 0; i < 5; ++i) acc = acc * w;
  EXPECT_EQ(acc, CycloInt::integer(5, 1));
  auto sum = CycloInt::integer(5, 0);
  for (std::uint64_t k = 0; k < 5; ++k) sum = sum + CycloInt::omega_power(5, k);
  EXPECT_TRUE(sum.is_rational());
  EXPECT_EQ(sum.rational_value(), 0);
  // |1 - w|^2 in Z[w] is 2 - w - w^{-1}, not rational
  const auto d = CycloInt::integer(5, 1) - w;
  EXPECT_FALSE((d * (CycloInt::integer(5, 1) - CycloInt::omega_power(5, 4))).is_rational());
  EXPECT_THROW(CycloInt::integer(3, 1) + CycloInt::integer(5, 1), Error);
  // p = 2: w = -1
  EXPECT_EQ(CycloInt::omega_power(2, 1).rational_value(), -1);
}

TEST(Walsh, ZeroDirection) {
  auto F = Field::make(3, 2);
  const auto f = PolyMap::monomial(F, F.one(), 2);
  EXPECT_EQ(walsh(f, F.zero(), F.zero()).rational_value(), 9);
  // W(u, 0) = q [u = 0]
  EXPECT_EQ(walsh(f, F.one(), F.zero()).rational_value(), 0);
}

TEST(Walsh, QuadraticGaussSumOverF3) {
  // sum_x w^(x^2) over GF(3) = 1 + 2w, with |.|^2 = 3
  auto F = Field::make(3, 1);
  const auto W = walsh(PolyMap::monomial(F, F.one(), 2), F.zero(), F.one());
  EXPECT_EQ(W.coeffs(), (std::vector<std::int64_t>{1, 2}));
  EXPECT_EQ((W * CycloInt::from_group_ring(3, {1, 0, 2})).rational_value(), 3);
}

TEST(Walsh, FourierInversion) {
  // sum_v W(0, v) = q #f^{-1}(0)
  std::mt19937_64 rng(31);
  for (auto [p, m] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 4}, {3, 2}, {5, 2}, {7, 1}}) {
    auto F = Field::make(p, m);
    std::vector<std::uint64_t> values(F.order());
    for (auto& v : values) v = rng() % F.order();
    const auto table = walsh_zero_table(F, values);
    auto sum = CycloInt::integer(p, 0);
    for (std::uint64_t v = 0; v < F.order(); ++v) sum = sum + table.at(v);
    const auto zeros = static_cast<std::int64_t>(std::count(values.begin(), values.end(), 0));
    EXPECT_EQ(sum.rational_value(), static_cast<std::int64_t>(F.order()) * zeros);
    // the table agrees with the pointwise transform
    for (std::uint64_t v = 0; v < F.order(); v += 3)
      EXPECT_EQ(table.at(v), walsh(F, values, F.zero(), F.from_code(v)));
  }
}

TEST(Walsh, ConstrainedSumsMatchPowerSums) {
  // sum_b N_b^j = q^(1-j) S_j
  std::mt19937_64 rng(32);
  for (auto [p, m] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 3}, {3, 2}, {5, 1}, {3, 3}}) {
    auto F = Field::make(p, m);
    std::vector<std::uint64_t> values(F.order());
    for (auto& v : values) v = rng() % F.order();
    const auto W = walsh_zero_table(F, values);
    const auto h = code_histogram(values, F.order());
    for (std::size_t j = 1; j <= 3; ++j) {
      BigInt direct = 0;
      for (auto n : h.count) direct += boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(j));
      const BigInt qj = boost::multiprecision::pow(BigInt(F.order()), static_cast<unsigned>(j - 1));
      EXPECT_EQ(constrained_sum(F, W, j), direct * qj);
    }
    EXPECT_THROW(constrained_sum(F, W, 4), Error);
  }
}

TEST(Walsh, SingleTermSum) {
  auto F = Field::make(3, 2);
  PhiGadget g{{0, 1}, PhiMode::Divisor, 1, 3, 2, 0};
  std::mt19937_64 rng(33);
  std::vector<std::uint64_t> values(9);
  for (auto& v : values) v = rng() % 9;
  EXPECT_EQ(char_sum(F, values, g), Rational(9));
}

TEST(Phi, Validation) {
  EXPECT_TRUE(validate_phi(phi1(3, 2)).ok);
  EXPECT_TRUE(validate_phi(phi1(5, 2)).ok);
  EXPECT_TRUE(validate_phi(phi2(3, 2, 1)).ok);
  EXPECT_TRUE(validate_phi(phi2(2, 4, 2)).ok);
  PhiGadget bad{{0, 1}, PhiMode::Nondivisor, 2, 3, 2, 0};
  const auto r = validate_phi(bad);
  EXPECT_FALSE(r.ok);
  ASSERT_TRUE(r.violating_x);
  EXPECT_EQ(*r.violating_x, 2u);
}

TEST(Phi, Examples) {
  auto F9 = Field::make(3, 2);
  const auto sq = PolyMap::monomial(F9, F9.one(), 2);
  EXPECT_EQ(char_sum(sq, phi1(3, 2)), Rational(1));
  EXPECT_EQ(char_sum(sq, phi1(3, 2)), direct_sum(F9, sq.value_codes(), phi1(3, 2)));
  const auto f = PolyMap::from_terms(F9, {{3, F9.one()}, {1, F9.from_int(-1)}});
  EXPECT_EQ(char_sum(f, phi2(3, 2, 1)), Rational(0));
  EXPECT_TRUE(spectral_verdict(f, phi2(3, 2, 1)));
  EXPECT_FALSE(spectral_verdict(PolyMap::identity(F9), phi2(3, 2, 1)));
  EXPECT_EQ(to_fraction_string(Rational(3, 6)), "1/2");
}

TEST(Phi, AgreesWithDirectPredicateOnRandomMaps) {
  std::mt19937_64 rng(34);
  struct Case {
    std::uint64_t p;
    unsigned m;
    PhiGadget g;
  };
  for (const auto& c : std::vector<Case>{{3, 2, phi1(3, 2)}, {5, 2, phi1(5, 2)}, {7, 2, phi1(7, 2)},
                                         {3, 3, phi2(3, 3, 1)}, {2, 4, phi2(2, 4, 1)}, {2, 4, phi2(2, 4, 2)}}) {
    auto F = Field::make(c.p, c.m);
    for (int i = 0; i < 30; ++i) {
      std::vector<std::uint64_t> values;
      if (i % 2 == 0) {
        values = random_n_to_one(F, c.g.n, rng);
      } else {
        values.resize(F.order());
        for (auto& v : values) v = rng() % F.order();
      }
      const auto s = char_sum(F, values, c.g);
      EXPECT_EQ(s, direct_sum(F, values, c.g));
      EXPECT_GE(s, c.g.bound());
      EXPECT_EQ(s == c.g.bound(), is_n_to_one(code_histogram(values, F.order()), c.g.n));
    }
  }
}

TEST(Phi, Gates) {
  auto F = Field::make(2, 13);
  std::vector<std::uint64_t> values(F.order(), 0);
  EXPECT_THROW(char_sum(F, values, phi2(2, 13, 1)), Error);
  PhiGadget quartic{{0, 0, 0, 0, 1}, PhiMode::Divisor, 1, 3, 1, 0};
  auto F3 = Field::make(3, 1);
  try {
    char_sum(F3, {0, 1, 2}, quartic);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegreeTooHigh);
  }
}
