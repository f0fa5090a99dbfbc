#include <map>

#include <gtest/gtest.h>

#include "nclab/guewick.hpp"

using namespace nclab;

namespace {

std::vector<std::vector<int>> all_words(int max_len, int alphabet) {
  std::vector<std::vector<int>> out, layer{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& w : layer)
      for (int a = 1; a <= alphabet; ++a) {
        auto v = w;
        v.push_back(a);
        next.push_back(v);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// At N = 1 the matrices are independent N(0,1) scalars: E = prod over colors of (n_c - 1)!!.
Rational scalar_gaussian_moment(const std::vector<int>& w) {
  std::map<int, int> count;
  for (int i : w) ++count[i];
  Integer r = 1;
  for (const auto& [i, n] : count) {
    if (n % 2) return 0;
    for (int k = n - 1; k > 1; k -= 2) r *= k;
  }
  return Rational(r);
}

}  // namespace

TEST(GueWick, Examples) {
  NPoly two;
  two.add(0, 1);
  EXPECT_EQ(gue_word_expectation(base_word({1, 1})), two);
  const NPoly x4 = gue_word_expectation(base_word({1, 1, 1, 1}));
  EXPECT_EQ(x4.coefficient(0), 2);
  EXPECT_EQ(x4.coefficient(1), 1);
  const NPoly x6 = gue_word_expectation(base_word({1, 1, 1, 1, 1, 1}));
  EXPECT_EQ(x6.coefficient(0), 5);
  EXPECT_EQ(x6.coefficient(1), 10);
  EXPECT_EQ(coefficient(gue_word_expectation(base_word({1, 1})), 1), 0);
  EXPECT_DOUBLE_EQ(x4.evaluate(4), 2 + 1.0 / 16);
}

TEST(GueWick, OrderZeroIsFreeMoment) {
  const auto id = CovarianceKernel::identity();
  for (const auto& w : all_words(8, 2)) {
    const Word word = base_word(w);
    EXPECT_EQ(QPoly::constant(gue_word_expectation(word).coefficient(0)), semicircular_moment(word, id));
  }
}

TEST(GueWick, ScalarCaseSumsAllPairings) {
  for (const auto& w : all_words(8, 3)) {
    const NPoly p = gue_word_expectation(base_word(w));
    Rational total = 0;
    for (const auto& [g, c] : p.terms()) total += c;
    EXPECT_EQ(total, scalar_gaussian_moment(w));
  }
}

TEST(GueWick, OddTracialAndIntegral) {
  for (const auto& w : all_words(7, 2)) {
    const NPoly p = gue_word_expectation(base_word(w));
    if (w.size() % 2) EXPECT_TRUE(p.is_zero());
    auto rot = w;
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    EXPECT_EQ(gue_word_expectation(base_word(rot)), p);
    for (const auto& [g, c] : p.terms()) {
      EXPECT_GT(c, 0);
      EXPECT_EQ(denominator(c), 1);
    }
  }
}

TEST(GueWick, LengthCap) {
  EXPECT_NO_THROW(gue_word_expectation(power_word(Letter::x(1), 12)));
  try {
    gue_word_expectation(power_word(Letter::x(1), 14));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degree_cap);
  }
  EXPECT_THROW(gue_word_expectation(Word{Letter::u(1)}), Error);
}

TEST(GueWick, PolynomialExpectation) {
  NcPoly p = NcPoly::monomial(base_word({1, 1, 1, 1})) + NcPoly::monomial(base_word({1, 1}), 3);
  const NPoly e = gue_expectation(p);
  EXPECT_EQ(e.coefficient(0), 5);
  EXPECT_EQ(e.coefficient(1), 1);
}
