#include <array>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "nclab/freemoments.hpp"

using namespace nclab;

namespace {

Word word_of(const std::vector<std::pair<Family, int>>& letters) {
  Word w;
  for (const auto& [f, i] : letters) w.letters.push_back(Letter::x(i, f));
  return w;
}

std::vector<std::vector<int>> all_words(int max_len, int alphabet, int min_len = 1) {
  std::vector<std::vector<int>> out, layer{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& w : layer)
      for (int a = 0; a < alphabet; ++a) {
        auto v = w;
        v.push_back(a);
        next.push_back(v);
      }
    if (len >= min_len) out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

std::size_t double_factorial_odd(std::size_t n) {
  std::size_t r = 1;
  for (std::size_t k = n; k > 1; k -= 2) r *= k;
  return r;
}

// Each interpolated variable as a coefficient vector over the free components
// (z1, z2, z~1, z~2, w, w~, s):
//   z^a = sqrt(1 - q1) z^a + sqrt(q1 - q2) w + sqrt(q2) s, tilde versions with w~.
std::array<double, 7> components(int j1_pos, double q1, double q2) {
  std::array<double, 7> v{};
  const double a = std::sqrt(1 - q1), b = std::sqrt(q1 - q2), c = std::sqrt(q2);
  const bool tilde = j1_pos >= 2;
  v[static_cast<std::size_t>(j1_pos)] = a;
  v[tilde ? 5 : 4] = b;
  v[6] = c;
  return v;
}

const std::array<Family, 4> j1_fams{families::E1(), families::E2(), families::Et1(), families::Et2()};

}  // namespace

TEST(Pairings, Examples) {
  EXPECT_EQ(enumerate_color_pairings(base_word({1, 1})).size(), 1u);
  EXPECT_TRUE(enumerate_color_pairings(base_word({1, 2})).empty());
  EXPECT_TRUE(enumerate_color_pairings(base_word({1, 1, 1})).empty());
  EXPECT_EQ(enumerate_color_pairings(base_word({1, 1, 1, 1})).size(), 3u);
}

TEST(Pairings, CountsAndNonCrossing) {
  for (std::size_t k = 1; k <= 6; ++k) {
    const auto all = enumerate_color_pairings(power_word(Letter::x(1), 2 * k));
    EXPECT_EQ(all.size(), double_factorial_odd(2 * k - 1));
    std::size_t nc = 0;
    for (const auto& p : all) nc += p.is_noncrossing();
    EXPECT_EQ(Integer(nc), catalan(static_cast<unsigned>(k)));
  }
  PairPartition crossing{4, {{0, 2}, {1, 3}}};
  EXPECT_FALSE(crossing.is_noncrossing());
  PairPartition nested{4, {{0, 3}, {1, 2}}};
  EXPECT_TRUE(nested.is_noncrossing());
}

TEST(SemicircularMoment, Examples) {
  const auto id = CovarianceKernel::identity();
  EXPECT_EQ(semicircular_moment(base_word({1, 1, 1, 1}), id), QPoly::constant(2));
  EXPECT_EQ(semicircular_moment(word_of({{families::E1(), 1}, {families::E2(), 1}}), CovarianceKernel::interpolation()),
            QPoly::monomial(1, 0));
  const Family a("a"), b("b");
  EXPECT_TRUE(semicircular_moment(word_of({{a, 1}, {b, 1}, {a, 1}, {b, 1}}), id).is_zero());
  EXPECT_TRUE(semicircular_moment(base_word({1, 2, 1, 2}), id).is_zero());
  EXPECT_THROW(semicircular_moment(Word{Letter::u(1)}, id), Error);
}

TEST(SemicircularMoment, CatalanAndOdd) {
  const auto id = CovarianceKernel::identity();
  for (unsigned k = 0; k <= 6; ++k) {
    EXPECT_EQ(semicircular_moment(power_word(Letter::x(1), 2 * k), id), QPoly::constant(Rational(catalan(k))));
    EXPECT_TRUE(semicircular_moment(power_word(Letter::x(1), 2 * k + 1), id).is_zero());
  }
}

TEST(SemicircularMoment, AgreesWithFilteredPairingSum) {
  const auto kernel = CovarianceKernel::interpolation();
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> fam(0, 3), idx(1, 2);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 * (1 + trial % 4);
    Word w;
    for (std::size_t k = 0; k < n; ++k) w.letters.push_back(Letter::x(idx(rng), j1_fams[static_cast<std::size_t>(fam(rng))]));
    QPoly expect;
    for (const auto& p : enumerate_color_pairings(w)) {
      if (!p.is_noncrossing()) continue;
      QPoly term = QPoly::constant(1);
      for (const auto& [x, y] : p.pairs) term = term * kernel.value(w[x].family, w[y].family).as_qpoly();
      expect += term;
    }
    EXPECT_EQ(semicircular_moment(w, kernel), expect);
  }
}

TEST(InterpolationKernel, CovarianceTableFromDefinitions) {
  const auto kernel = CovarianceKernel::interpolation();
  for (double t1 : {0.1, 0.7, 2.0}) {
    for (double t2 : {t1, t1 + 0.3, t1 + 3.0}) {
      const double q1 = std::exp(-t1), q2 = std::exp(-t2);
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          const auto va = components(a, q1, q2), vb = components(b, q1, q2);
          double cov = 0;
          for (std::size_t k = 0; k < 7; ++k) cov += va[k] * vb[k];
          const double got = kernel.value(j1_fams[static_cast<std::size_t>(a)], j1_fams[static_cast<std::size_t>(b)])
                                 .as_qpoly()
                                 .evaluate(q1, q2);
          EXPECT_NEAR(got, cov, 1e-14) << a << "," << b;
        }
      }
    }
  }
}

TEST(InterpolationKernel, WordsMatchFreeExpansion) {
  // Expand each letter into the seven free components and evaluate by freeness.
  const auto kernel = CovarianceKernel::interpolation();
  const double q1 = std::exp(-0.4), q2 = std::exp(-1.1);
  std::vector<MomentSequence<double>> marg(7, semicircle_moments<double>(12));
  FreeMomentEvaluator<double> ev(marg);
  for (const auto& letters : all_words(6, 4, 2)) {
    if (letters.size() % 2) continue;
    // only three components of each letter are non-zero
    std::vector<std::vector<std::pair<int, double>>> parts;
    for (int l : letters) {
      parts.emplace_back();
      const auto v = components(l, q1, q2);
      for (std::size_t k = 0; k < 7; ++k)
        if (v[k] != 0) parts.back().emplace_back(static_cast<int>(k), v[k]);
    }
    double expanded = 0;
    std::vector<std::size_t> choice(letters.size(), 0);
    while (true) {
      double coeff = 1;
      FreeWord fw;
      for (std::size_t k = 0; k < letters.size(); ++k) {
        coeff *= parts[k][choice[k]].second;
        fw.push_back({parts[k][choice[k]].first, 1});
      }
      expanded += coeff * ev.moment(fw);
      std::size_t k = 0;
      while (k < choice.size() && ++choice[k] == parts[k].size()) choice[k++] = 0;
      if (k == choice.size()) break;
    }
    Word w;
    for (int l : letters) w.letters.push_back(Letter::x(1, j1_fams[static_cast<std::size_t>(l)]));
    EXPECT_NEAR(semicircular_moment(w, kernel).evaluate(q1, q2), expanded, 1e-12);
  }
}

TEST(FreeWordMoment, Examples) {
  std::vector<MomentSequence<Complex>> u_only{cayley_moments(2)};
  EXPECT_NEAR(std::abs(free_word_moment<Complex>({{0, 1}, {0, -1}}, u_only) - 1.0), 0, 1e-15);
  std::vector<MomentSequence<Rational>> two{semicircle_moments(8), semicircle_moments(8)};
  EXPECT_EQ(free_word_moment<Rational>({{0, 1}, {1, 1}, {0, 1}, {1, 1}}, two), 0);
  EXPECT_NEAR(std::abs(free_word_moment<Complex>({{0, 1}}, u_only) - (2 - std::sqrt(5.0))), 0, 1e-12);
}

TEST(FreeWordMoment, AlternatingFourFormula) {
  // tau(abab) = tau(a^2)tau(b)^2 + tau(a)^2 tau(b^2) - tau(a)^2 tau(b)^2 for free a, b.
  MomentSequence<Rational> a(std::map<int, Rational>{{0, 1}, {1, make_rational(1, 3)}, {2, make_rational(5, 7)}});
  MomentSequence<Rational> b(std::map<int, Rational>{{0, 1}, {1, make_rational(-2, 5)}, {2, make_rational(3, 2)}});
  const Rational a1 = a.at(1), a2 = a.at(2), b1 = b.at(1), b2 = b.at(2);
  FreeMomentEvaluator<Rational> ev({a, b});
  EXPECT_EQ(ev.moment({{0, 1}, {1, 1}, {0, 1}, {1, 1}}), a2 * b1 * b1 + a1 * a1 * b2 - a1 * a1 * b1 * b1);
  EXPECT_EQ(ev.moment({{0, 1}, {1, 1}}), a1 * b1);
  EXPECT_THROW(ev.moment({{0, 3}, {1, 1}}), Error);
}

TEST(FreeWordMoment, MatchesBlockDiagonalKernel) {
  const auto id = CovarianceKernel::identity();
  {
    FreeMomentEvaluator<Rational> ev({semicircle_moments(8), semicircle_moments(8)});
    for (const auto& w : all_words(8, 2)) {
      FreeWord fw;
      std::vector<int> idx;
      for (int l : w) {
        fw.push_back({l, 1});
        idx.push_back(l + 1);
      }
      ASSERT_EQ(QPoly::constant(ev.moment(fw)), semicircular_moment(base_word(idx), id));
    }
  }
  FreeMomentEvaluator<Rational> ev3({semicircle_moments(8), semicircle_moments(8), semicircle_moments(8)});
  for (const auto& w : all_words(7, 3)) {
    FreeWord fw;
    std::vector<int> idx;
    for (int l : w) {
      fw.push_back({l, 1});
      idx.push_back(l + 1);
    }
    ASSERT_EQ(QPoly::constant(ev3.moment(fw)), semicircular_moment(base_word(idx), id));
  }
}

TEST(FreeWordMoment, Tracial) {
  std::vector<MomentSequence<Complex>> marg{cayley_moments(4), cayley_moments(4), semicircle_moments_complex(8)};
  FreeMomentEvaluator<Complex> ev(marg);
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> el(0, 2), sg(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    FreeWord w;
    for (int k = 0; k < 6; ++k) {
      const int e = el(rng);
      w.push_back({e, e == 2 ? 1 : (sg(rng) ? 1 : -1)});
    }
    const Complex base = ev.moment(w);
    for (std::size_t r = 1; r < w.size(); ++r) {
      FreeWord rot(w.begin() + static_cast<std::ptrdiff_t>(r), w.end());
      rot.insert(rot.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(r));
      EXPECT_NEAR(std::abs(ev.moment(rot) - base), 0, 1e-13);
    }
  }
}

TEST(FreeWordMoment, HankelMatrixPositive) {
  Eigen::Matrix4d h;
  const auto m = semicircle_moments<double>(6);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) h(a, b) = m.at(a + b);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(h);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
}

TEST(CayleyMarginal, Values) {
  EXPECT_EQ(cayley_marginal_moment(0), Complex(1.0));
  const double expect = 2 - std::sqrt(5.0);
  EXPECT_NEAR(std::abs(cayley_marginal_moment(1) - expect), 0, 1e-12);
  EXPECT_NEAR(std::abs(cayley_marginal_moment(-1) - expect), 0, 1e-12);
  // Psi^2 = 1 + 4iR - 4R^2 with R = (s - i)^{-1}; tau(R) = -G(i), tau(R^2) = -G'(i).
  const double expect2 = 5 - 2 * std::sqrt(5.0) - 2 / std::sqrt(5.0);
  EXPECT_NEAR(std::abs(cayley_marginal_moment(2) - expect2), 0, 1e-12);
  for (int k = -6; k <= 6; ++k) {
    const Complex v = cayley_marginal_moment(k);
    EXPECT_NEAR(v.imag(), 0, 1e-13);
    EXPECT_NEAR(std::abs(v - cayley_marginal_moment(-k)), 0, 1e-13);
    EXPECT_LE(std::abs(v), 1 + 1e-12);
  }
}

TEST(CayleyMarginal, NonConvergenceReported) {
  QuadratureOptions opt;
  opt.initial_nodes = 4;
  opt.max_nodes = 40;
  opt.tolerance = 1e-15;
  EXPECT_THROW(semicircle_integral([](double x) { return std::abs(x - 0.3); }, opt), Error);
}

TEST(TensorMoment, Examples) {
  FreeMomentEvaluator<Complex> left({semicircle_moments_complex(4), cayley_moments(2)});
  FreeMomentEvaluator<Complex> right({semicircle_moments_complex(4), cayley_moments(2)});
  EXPECT_EQ(tensor_word_moment<Complex>({{0, {0, 1}}, {1, {0, 1}}}, left, right), Complex(0));
  Complex sq = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) sq += tensor_word_moment<Complex>({{a, {0, 1}}, {b, {0, 1}}}, left, right);
  EXPECT_NEAR(std::abs(sq - 2.0), 0, 1e-14);
  const Complex uv = tensor_word_moment<Complex>({{0, {1, 1}}, {1, {1, 1}}, {0, {1, -1}}, {1, {1, -1}}}, left, right);
  EXPECT_NEAR(std::abs(uv - 1.0), 0, 1e-14);
  EXPECT_THROW(tensor_word_moment<Complex>({{2, {0, 1}}}, left, right), Error);
}

TEST(MomentCsv, Layout) {
  std::ostringstream os;
  write_moment_csv(os, {{"x[0,1]*x[0,1]", Complex(1, 0)}});
  EXPECT_EQ(os.str(), "word,real,imag\n\"x[0,1]*x[0,1]\",1,0\n");
}
