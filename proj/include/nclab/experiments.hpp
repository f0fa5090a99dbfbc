#pragma once

#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <unsupported/Eigen/KroneckerProduct>

#include "nclab/cauchy.hpp"
#include "nclab/parraud.hpp"

namespace nclab {

struct CheckResult {
  std::string name;
  double error = 0;
  double tolerance = 0;
  bool pass = false;
};

inline CheckResult make_check(std::string name, double error, double tol) {
  return {std::move(name), error, tol, error <= tol};
}

/// All index sequences of length 1..max_len over {1..alphabet}, shortest first.
inline std::vector<std::vector<int>> all_index_words(int max_len, int alphabet) {
  std::vector<std::vector<int>> out, layer{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& w : layer)
      for (int a = 1; a <= alphabet; ++a) {
        auto v = w;
        v.push_back(a);
        next.push_back(std::move(v));
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact tables

struct ExactRow {
  Word word;
  Rational lhs;  // nu1 or the free moment
  Rational rhs;  // Wick coefficient of order 1 or 0
  bool equal = false;
};

/// nu1(w) against the N^{-2} coefficient of E[tr w], every word up to max_len.
inline std::vector<ExactRow> nu1_wick_table(int max_len, int alphabet) {
  std::vector<ExactRow> rows;
  for (const auto& idx : all_index_words(max_len, alphabet)) {
    const Word w = base_word(idx);
    const CRational v = nu1(NcPoly::monomial(w));
    const Rational wick = gue_word_expectation(w).coefficient(1);
    rows.push_back({w, v.re, wick, v.im == 0 && v.re == wick});
  }
  return rows;
}

/// Semicircular moment against the N^0 coefficient of E[tr w].
inline std::vector<ExactRow> free_wick_table(int max_len, int alphabet) {
  std::vector<ExactRow> rows;
  for (const auto& idx : all_index_words(max_len, alphabet)) {
    const Word w = base_word(idx);
    const QPoly q = semicircular_moment(w, CovarianceKernel::identity());
    const Rational free = q.coefficient(0, 0);
    const Rational wick = gue_word_expectation(w).coefficient(0);
    rows.push_back({w, free, wick, q.terms().size() <= 1 && free == wick});
  }
  return rows;
}

inline void write_exact_csv(std::ostream& os, const std::vector<ExactRow>& rows, const std::string& lhs,
                            const std::string& rhs) {
  os << "word," << lhs << ',' << rhs << ",equal\n";
  for (const auto& r : rows)
    os << '"' << to_string(r.word) << "\"," << r.lhs << ',' << r.rhs << ',' << (r.equal ? "true" : "false") << '\n';
}

// ---------------------------------------------------------------------------
// Numeric identities of the block / resolvent calculus

namespace detail {

inline CMatrix random_complex_matrix(Eigen::Index n, std::uint64_t seed) {
  GueSampler g(seed);
  CMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(g.normal(), g.normal()) / std::sqrt(2.0 * n);
  return a;
}

inline double max_abs(const CMatrix& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace detail

inline CheckResult check_cayley_block(std::uint64_t seed, Eigen::Index n = 16) {
  const CMatrix s = 2.0 * sample_gue(n, seed).matrix(), u = 2.0 * sample_gue(n, seed + 1).matrix();
  const CMatrix c = detail::random_complex_matrix(n, seed + 2);
  const CMatrix id = CMatrix::Identity(n, n);
  double err = 0;
  for (int eps : {1, -1}) {
    const CMatrix got = block_delta_eval([eps](const CMatrix& b) { return cayley_general(b, eps); }, s, u, c);
    const CMatrix expect =
        static_cast<double>(eps) * 0.5 * I_unit * (cayley_general(s, eps) - id) * c * (cayley_general(u, eps) - id);
    err = std::max(err, detail::max_abs(got - expect));
  }
  return make_check("cayley-block", err, 1e-8);
}

/// d_1 (z - P)^{-1} = ((z - P)^{-1} (x) 1) d_1 P (1 (x) (z - P)^{-1}) for a polynomial P.
inline CheckResult check_resolvent_polynomial(std::uint64_t seed, Eigen::Index n = 8, Complex z = Complex(0, 3)) {
  const NcPoly p = NcPoly::monomial(base_word({1, 2})) + NcPoly::monomial(base_word({2, 1})) +
                   NcPoly::monomial(base_word({1, 1, 1}));
  const std::vector<CMatrix> s{sample_gue(n, seed).matrix(), sample_gue(n, seed + 1).matrix()};
  const std::vector<CMatrix> u{sample_gue(n, seed + 2).matrix(), sample_gue(n, seed + 3).matrix()};
  const CMatrix c = detail::random_complex_matrix(n, seed + 4);
  const std::vector<CMatrix> blocks{upper_block(s[0], u[0], c), upper_block(s[1], u[1], CMatrix::Zero(n, n))};
  const CMatrix got = resolvent(evaluate(p, MatrixAssignment(blocks)), z).topRightCorner(n, n);
  const CMatrix expect = resolvent(evaluate(p, MatrixAssignment(s)), z) * block_delta_eval(p, s, u, 1, c) *
                         resolvent(evaluate(p, MatrixAssignment(u)), z);
  return make_check("resolvent-polynomial", detail::max_abs(got - expect), 1e-8);
}

/// Derivative of (z - S)^{-1} in the first-leg variable for m = 1, against the
/// closed form R(s) (i/2)[g (Psi(s)-1) c (Psi(u)-1) - conj(g) (Psi(s)^{-1}-1) c (Psi(u)^{-1}-1)] (x) 1 R(u).
inline CheckResult check_resolvent_model(std::uint64_t seed, Eigen::Index n = 8, Complex z = Complex(0, 3)) {
  const Complex xi = 0.2, g(0.7, 0.3), b(-0.4, 0.5);
  const CMatrix s = sample_gue(n, seed).matrix(), u = sample_gue(n, seed + 1).matrix(), t = sample_gue(n, seed + 2).matrix();
  const CMatrix c = detail::random_complex_matrix(n, seed + 3);
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix pt = cayley_general(t), pti = cayley_general(t, -1);
  auto model = [&](const CMatrix& a, const CMatrix& ainv) {
    const CMatrix ik = CMatrix::Identity(a.rows(), a.rows());
    CMatrix m = xi * Eigen::kroneckerProduct(ik, id).eval();
    m += g * Eigen::kroneckerProduct(a, id).eval() + std::conj(g) * Eigen::kroneckerProduct(ainv, id).eval();
    m += b * Eigen::kroneckerProduct(ik, pt).eval() + std::conj(b) * Eigen::kroneckerProduct(ik, pti).eval();
    return m;
  };
  const CMatrix blk = upper_block(s, u, c);
  const CMatrix got = resolvent(model(cayley_general(blk), cayley_general(blk, -1)), z).topRightCorner(n * n, n * n);
  const CMatrix ps = cayley_general(s), pu = cayley_general(u), psi = cayley_general(s, -1), pui = cayley_general(u, -1);
  const CMatrix mid = 0.5 * I_unit * (g * (ps - id) * c * (pu - id) - std::conj(g) * (psi - id) * c * (pui - id));
  const CMatrix expect =
      resolvent(model(ps, psi), z) * Eigen::kroneckerProduct(mid, id).eval() * resolvent(model(pu, pui), z);
  return make_check("resolvent-model", detail::max_abs(got - expect), 1e-8);
}

/// Delta e^P (s; u)(c) = int_0^1 e^{a P(s)} Delta P (s; u)(c) e^{(1-a) P(u)} da.
inline CheckResult check_duhamel(std::uint64_t seed, Eigen::Index n = 6) {
  const NcPoly p = NcPoly::monomial(base_word({1, 2})) + NcPoly::monomial(base_word({2, 1})) +
                   NcPoly::monomial(base_word({1}), CRational(Rational(0), Rational(1)));
  const std::vector<CMatrix> s{sample_gue(n, seed).matrix(), sample_gue(n, seed + 1).matrix()};
  const std::vector<CMatrix> u{sample_gue(n, seed + 2).matrix(), sample_gue(n, seed + 3).matrix()};
  const CMatrix c = detail::random_complex_matrix(n, seed + 4);
  const std::vector<CMatrix> blocks{upper_block(s[0], u[0], c), upper_block(s[1], u[1], CMatrix::Zero(n, n))};
  const CMatrix got = matrix_exp(evaluate(p, MatrixAssignment(blocks))).topRightCorner(n, n);
  const CMatrix ps = evaluate(p, MatrixAssignment(s)), pu = evaluate(p, MatrixAssignment(u));
  const CMatrix dp = block_delta_eval(p, s, u, 1, c);
  using gl = boost::math::quadrature::gauss<double, 30>;
  CMatrix quad = CMatrix::Zero(n, n);
  for (std::size_t k = 0; k < gl::abscissa().size(); ++k) {
    for (double sign : {1.0, -1.0}) {
      if (gl::abscissa()[k] == 0 && sign < 0) continue;
      const double a = 0.5 * (1 + sign * gl::abscissa()[k]);
      quad += 0.5 * gl::weights()[k] * (matrix_exp(a * ps) * dp * matrix_exp((1 - a) * pu));
    }
  }
  return make_check("duhamel", detail::max_abs(got - quad), 1e-6);
}

/// Psi^eps(x) = 1 - 2 int_{-inf}^0 e^{(i eps x + 1) y} dy.
inline CheckResult check_fourier() {
  using boost::math::quadrature::gauss_kronrod;
  const double inf = std::numeric_limits<double>::infinity();
  double err = 0;
  for (double x : {-3.0, -0.4, 0.0, 0.7, 5.0}) {
    for (int eps : {1, -1}) {
      auto re = [&](double y) { return std::real(std::exp(Complex(1.0, eps * x) * y)); };
      auto im = [&](double y) { return std::imag(std::exp(Complex(1.0, eps * x) * y)); };
      const Complex integral(gauss_kronrod<double, 61>::integrate(re, -inf, 0.0, 20, 1e-14),
                             gauss_kronrod<double, 61>::integrate(im, -inf, 0.0, 20, 1e-14));
      err = std::max(err, std::abs(Complex(x, eps) / Complex(x, -eps) - (1.0 - 2.0 * integral)));
    }
  }
  return make_check("fourier", err, 1e-10);
}

inline std::vector<CheckResult> check_cayley_roundtrip(std::uint64_t seed, Eigen::Index n = 32) {
  double unit = 0, round = 0;
  for (std::uint64_t k = 0; k < 5; ++k) {
    const HermitianMatrix h(2.0 * sample_gue(n, seed + k).matrix());
    const CMatrix u = cayley_matrix(h);
    unit = std::max(unit, unitarity_defect(u));
    round = std::max(round, detail::max_abs(inverse_cayley(u) - h.matrix()));
  }
  return {make_check("cayley-unitarity", unit, 1e-8), make_check("cayley-roundtrip", round, 1e-8)};
}

/// Lemma c over all multi-indices with entries <= 4 and length <= 3; error = #failures.
inline CheckResult check_lemma_c() {
  std::size_t failures = 0;
  for (const auto& idx : all_index_words(3, 5)) {
    std::vector<int> m;
    for (int v : idx) m.push_back(v - 1);
    if (!lemma_c_check(m)) ++failures;
  }
  return make_check("lemma-c", static_cast<double>(failures), 0);
}

inline std::vector<CheckResult> identity_suite(std::uint64_t seed) {
  std::vector<CheckResult> out{check_cayley_block(seed), check_resolvent_polynomial(seed + 10),
                               check_resolvent_model(seed + 20), check_duhamel(seed + 30), check_fourier()};
  for (auto& c : check_cayley_roundtrip(seed + 40)) out.push_back(std::move(c));
  out.push_back(check_lemma_c());
  return out;
}

// ---------------------------------------------------------------------------
// Norm sweeps

enum class NormModel { free_sum, tensor_sum };

struct NormPoint {
  Eigen::Index n = 0;
  MCEstimate norm;
};

/// ||X1 + X2|| (free_sum, limit 2 sqrt 2) or ||X (x) I + I (x) Y|| (tensor_sum, limit 4)
/// for independent GUE matrices. The tensor norm is computed matrix-free by Lanczos
/// and checked against the eigenvalue-sum formula.
inline double sample_norm(NormModel model, Eigen::Index n, std::uint64_t seed) {
  GueSampler g(seed);
  const HermitianMatrix x = g.gue(n), y = g.gue(n);
  if (model == NormModel::free_sum) return operator_norm(HermitianMatrix(x.matrix() + y.matrix()));
  NormOptions opt;
  opt.seed = seed;
  const double lanczos = operator_norm(kronecker_sum(x.matrix(), y.matrix()), opt);
  const RVector ex = x.eigenvalues(), ey = y.eigenvalues();
  const double exact = std::max(std::abs(ex(0) + ey(0)), std::abs(ex(n - 1) + ey(n - 1)));
  if (std::abs(lanczos - exact) > 1e-6 * exact)
    throw Error(ErrorKind::sanity_check, "Lanczos tensor norm disagrees with the eigenvalue formula");
  return lanczos;
}

inline std::vector<NormPoint> norm_sweep(NormModel model, const std::vector<Eigen::Index>& ns, std::size_t trials,
                                         std::uint64_t seed, unsigned threads = 1) {
  std::vector<NormPoint> out;
  for (auto n : ns) {
    const std::uint64_t base = splitmix64(seed ^ static_cast<std::uint64_t>(n));
    auto vals = run_trials(trials, base, threads, [&](std::uint64_t s, std::size_t) {
      return Complex(sample_norm(model, n, s));
    });
    out.push_back({n, summarize(vals, base)});
  }
  return out;
}

inline bool increasing(const std::vector<NormPoint>& pts) {
  for (std::size_t k = 1; k < pts.size(); ++k)
    if (!(pts[k].norm.mean.real() > pts[k - 1].norm.mean.real())) return false;
  return true;
}

}  // namespace nclab
