#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "nclab/parraud.hpp"

using namespace nclab;
using boost::math::quadrature::gauss_kronrod;

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

NcPoly xpow(std::size_t m) { return NcPoly::monomial(power_word(Letter::x(1), m)); }

}  // namespace

TEST(SimplexIntegral, ClosedFormValues) {
  EXPECT_EQ(simplex_integral(0, 0), make_rational(1, 4));
  EXPECT_EQ(simplex_integral(1, 0), make_rational(1, 6));
  EXPECT_EQ(simplex_integral(0, 1), make_rational(1, 12));
  EXPECT_THROW(simplex_integral(-1, 0), Error);
}

TEST(SimplexIntegral, MatchesNumericQuadrature) {
  const double inf = std::numeric_limits<double>::infinity();
  for (int k1 = 0; k1 <= 6; ++k1) {
    for (int k2 = 0; k2 <= 6; ++k2) {
      auto outer = [&](double t2) {
        auto inner = [&](double t1) { return std::exp(-t2 - t1 - k1 * t1 - k2 * t2); };
        return gauss_kronrod<double, 31>::integrate(inner, 0.0, t2, 10, 1e-14);
      };
      const double v = 0.5 * gauss_kronrod<double, 61>::integrate(outer, 0.0, inf, 15, 1e-14);
      EXPECT_NEAR(v, to_double(simplex_integral(k1, k2)), 1e-10) << k1 << "," << k2;
    }
  }
}

TEST(SimplexIntegral, TableMemoizes) {
  SimplexIntegralTable t;
  EXPECT_EQ(t(2, 3), simplex_integral(2, 3));
  EXPECT_EQ(t(2, 3), simplex_integral(2, 3));
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(t.integrate(QPoly::monomial(0, 0, 4) + QPoly::monomial(1, 0, 6)), 2);
}

TEST(Nu1, Examples) {
  EXPECT_EQ(nu1(xpow(2)), CRational(0));
  EXPECT_EQ(nu1(xpow(4)), CRational(1));
  EXPECT_EQ(nu1(xpow(6)), CRational(10));
  EXPECT_EQ(nu1(NcPoly::constant(7)), CRational(0));
}

TEST(Nu1, EqualsWickOrderOneOnAllShortWords) {
  for (const auto& w : all_words(8, 2)) {
    const Word word = base_word(w);
    ASSERT_EQ(nu1(NcPoly::monomial(word)), CRational(gue_word_expectation(word).coefficient(1))) << to_string(word);
  }
  for (const auto& w : all_words(6, 3)) {
    const Word word = base_word(w);
    ASSERT_EQ(nu1(NcPoly::monomial(word)), CRational(gue_word_expectation(word).coefficient(1))) << to_string(word);
  }
}

TEST(Nu1, LinearAndReal) {
  const NcPoly p = NcPoly::monomial(base_word({1, 2, 1, 2})) + NcPoly::monomial(base_word({1, 1, 2, 2}), 3);
  const NcPoly q = xpow(6);
  const CRational a(make_rational(2, 3), make_rational(1, 5));
  EXPECT_EQ(nu1(a * p + q), a * nu1(p) + nu1(q));
  EXPECT_TRUE(nu1(p).is_real());
}

TEST(Nu1, DegreeCap) {
  try {
    nu1(xpow(18));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degree_cap);
  }
}

TEST(Nu1, GenusOneCountMatchesWick) {
  for (unsigned k = 0; k <= 6; ++k)
    EXPECT_EQ(Rational(genus_one_count(k)), gue_word_expectation(power_word(Letter::x(1), 2 * k)).coefficient(1));
}

TEST(LemmaC, Coefficients) {
  EXPECT_EQ(c_coefficient(0), -1);
  EXPECT_EQ(c_coefficient(1), 2);
  EXPECT_EQ(c_coefficient(2), -2);
  EXPECT_EQ(c_coefficient(3), 2);
  EXPECT_EQ(c_coefficient(5), 2);
  // (Z + i)/(Z - i) = sum_n c_n (iZ)^n for |Z| < 1
  const Complex z(0.3, 0);
  Complex s = 0, p = 1;
  for (int n = 0; n < 80; ++n) {
    s += static_cast<double>(c_coefficient(n)) * p;
    p *= Complex(0, 1) * z;
  }
  EXPECT_NEAR(std::abs(s - (z + Complex(0, 1)) / (z - Complex(0, 1))), 0, 1e-14);
}

TEST(LemmaC, ProductIdentity) {
  EXPECT_TRUE(lemma_c_check({0}));
  EXPECT_TRUE(lemma_c_check({2, 3}));
  EXPECT_TRUE(lemma_c_check({0, 4, 0}));
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b)
      for (int c = 0; c <= 4; ++c) EXPECT_TRUE(lemma_c_check({a, b, c}));
}

TEST(LemmaC, LebesgueFactorByQuadrature) {
  const double inf = std::numeric_limits<double>::infinity();
  for (int m = 0; m <= 6; ++m) {
    auto f = [m](double y) { return std::pow(y, m) * std::exp(y) / std::tgamma(m + 1.0); };
    const double v = gauss_kronrod<double, 61>::integrate(f, -inf, 0.0, 15, 1e-13);
    EXPECT_NEAR(v, m % 2 ? -1.0 : 1.0, 1e-9);
  }
}

TEST(Nu1Exponential, SmallArguments) {
  EXPECT_EQ(nu1_exponential(0, 12).value, Complex(0));
  const double y = 0.05;
  const auto v = nu1_exponential(y, 12);
  EXPECT_NEAR(v.value.real(), std::pow(y, 4) / 24, std::pow(y, 6));
  EXPECT_NEAR(v.value.imag(), 0, 1e-18);
  EXPECT_THROW(nu1_exponential(1, 5), Error);
  EXPECT_THROW(nu1_exponential(1, 18), Error);
}

TEST(Nu1Exponential, TailBoundCoversLongSeries) {
  // Reference: the same series summed far out with the Wick genus-one counts.
  for (double y : {0.5, 1.0, 2.0}) {
    double ref = 0;
    for (unsigned k = 2; k < 60; ++k)
      ref += std::pow(-1.0, k) * std::pow(y, 2.0 * k) / std::tgamma(2.0 * k + 1) * to_double(Rational(genus_one_count(k)));
    for (int cut : {8, 12, 16}) {
      const auto v = nu1_exponential(y, cut);
      EXPECT_LE(std::abs(v.value.real() - ref), v.tail_bound * (1 + 1e-12) + 1e-15) << y << " " << cut;
    }
    EXPECT_LT(nu1_exponential(y, 16).tail_bound, nu1_exponential(y, 8).tail_bound);
  }
}

TEST(Nu1Csv, Rows) {
  std::ostringstream os;
  write_nu1_csv(os, {base_word({1, 1, 1, 1}), base_word({1, 2, 1, 2})});
  EXPECT_EQ(os.str(), "word,nu1,wick,equal\n\"x[0,1]*x[0,1]*x[0,1]*x[0,1]\",1/1,1/1,true\n"
                      "\"x[0,1]*x[0,2]*x[0,1]*x[0,2]\",1/1,1/1,true\n");
}
