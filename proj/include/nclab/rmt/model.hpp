#pragma once

#include <functional>
#include <vector>

#include "nclab/rmt/matrix.hpp"

namespace nclab {

/// Coefficients of S = xi (x) 1 (x) 1 + sum_i (gamma_i (x) u_i (x) 1 + h.c. + beta_i (x) 1 (x) v_i + h.c.).
struct ModelCoefficients {
  CMatrix xi;
  std::vector<CMatrix> gamma;
  std::vector<CMatrix> beta;

  Eigen::Index m() const { return xi.rows(); }
  std::size_t r() const { return gamma.size(); }

  void validate() const {
    if (xi.rows() == 0 || xi.rows() != xi.cols()) throw Error(ErrorKind::size_mismatch, "xi must be square and non-empty");
    if ((xi - xi.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, xi.cwiseAbs().maxCoeff()))
      throw Error(ErrorKind::invalid_argument, "xi must be selfadjoint");
    if (gamma.size() != beta.size()) throw Error(ErrorKind::size_mismatch, "gamma and beta need the same length");
    for (const auto* list : {&gamma, &beta})
      for (const auto& c : *list)
        if (c.rows() != m() || c.cols() != m()) throw Error(ErrorKind::size_mismatch, "coefficient of wrong size");
  }

  /// Bound on ||S||: ||xi|| + 2 sum (||gamma_i|| + ||beta_i||), spectral norms.
  double radius() const {
    auto norm2 = [](const CMatrix& a) {
      Eigen::JacobiSVD<CMatrix> svd(a);
      return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    };
    double s = norm2(xi);
    for (std::size_t i = 0; i < r(); ++i) s += 2 * (norm2(gamma[i]) + norm2(beta[i]));
    return s;
  }

  bool all_scalar() const { return m() == 1; }

  /// The scalar two-leg model m = 1, xi = x0, r = 1, gamma_1 = g, beta_1 = b.
  static ModelCoefficients scalar(Complex x0, Complex g, Complex b) {
    ModelCoefficients c;
    c.xi = CMatrix::Constant(1, 1, x0);
    c.gamma = {CMatrix::Constant(1, 1, g)};
    c.beta = {CMatrix::Constant(1, 1, b)};
    return c;
  }
};

inline constexpr Eigen::Index default_dense_cap = 8192;

namespace detail {

// block += c * (A (x) I_N)
inline void add_left_kron(CMatrix& block, Eigen::Index off_r, Eigen::Index off_c, Complex c, const CMatrix& a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k) {
      const Complex v = c * a(i, k);
      if (v == Complex(0)) continue;
      for (Eigen::Index j = 0; j < n; ++j) block(off_r + i * n + j, off_c + k * n + j) += v;
    }
}

// block += c * (I_N (x) B)
inline void add_right_kron(CMatrix& block, Eigen::Index off_r, Eigen::Index off_c, Complex c, const CMatrix& b) {
  const Eigen::Index n = b.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index l = 0; l < n; ++l) {
        const Complex v = c * b(j, l);
        if (v != Complex(0)) block(off_r + i * n + j, off_c + i * n + l) += v;
      }
}

}  // namespace detail

/// Dense S_N of size m N^2, index order (a, i, j) -> a N^2 + i N + j.
inline HermitianMatrix build_SN(const ModelCoefficients& c, const std::vector<CMatrix>& U,
                                const std::vector<CMatrix>& V, Eigen::Index dense_cap = default_dense_cap) {
  c.validate();
  if (U.size() != c.r() || V.size() != c.r()) throw Error(ErrorKind::size_mismatch, "need r unitaries per leg");
  const Eigen::Index m = c.m();
  Eigen::Index n = -1;
  for (const auto* list : {&U, &V})
    for (const auto& u : *list) {
      if (u.rows() != u.cols()) throw Error(ErrorKind::size_mismatch, "unitaries must be square");
      if (n >= 0 && u.rows() != n) throw Error(ErrorKind::size_mismatch, "unitaries of different sizes");
      n = u.rows();
    }
  if (n < 0) throw Error(ErrorKind::invalid_argument, "build_SN needs r >= 1; use xi alone otherwise");
  const Eigen::Index d = m * n * n;
  if (d > dense_cap)
    throw Error(ErrorKind::size_cap, "m*N^2 = " + std::to_string(d) + " exceeds dense cap " + std::to_string(dense_cap));
  const Eigen::Index nn = n * n;
  CMatrix s = CMatrix::Zero(d, d);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      const Eigen::Index ro = a * nn, co = b * nn;
      if (c.xi(a, b) != Complex(0))
        for (Eigen::Index k = 0; k < nn; ++k) s(ro + k, co + k) += c.xi(a, b);
      for (std::size_t i = 0; i < c.r(); ++i) {
        detail::add_left_kron(s, ro, co, c.gamma[i](a, b), U[i]);
        detail::add_left_kron(s, ro, co, std::conj(c.gamma[i](b, a)), U[i].adjoint());
        detail::add_right_kron(s, ro, co, c.beta[i](a, b), V[i]);
        detail::add_right_kron(s, ro, co, std::conj(c.beta[i](b, a)), V[i].adjoint());
      }
    }
  }
  return HermitianMatrix(s, 1e-10);
}

/// Matrix-free linear map on C^n; `adjoint` may be empty for Hermitian maps.
struct LinearOperator {
  Eigen::Index size = 0;
  std::function<void(const CVector&, CVector&)> apply;
  std::function<void(const CVector&, CVector&)> apply_adjoint;
  bool hermitian = false;
};

/// A (x) I + I (x) B acting on vec(M) (row-major i N + j) as A M + M B^T.
inline LinearOperator kronecker_sum(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols()) throw Error(ErrorKind::size_mismatch, "square factors needed");
  const Eigen::Index na = a.rows(), nb = b.rows();
  LinearOperator op;
  op.size = na * nb;
  const bool herm = (a - a.adjoint()).cwiseAbs().maxCoeff() < 1e-12 && (b - b.adjoint()).cwiseAbs().maxCoeff() < 1e-12;
  op.hermitian = herm;
  auto make = [na, nb](CMatrix aa, CMatrix bt) {
    return [na, nb, aa = std::move(aa), bt = std::move(bt)](const CVector& in, CVector& out) {
      // Eigen maps are column-major: view vec(M) row-major as M^T column-major.
      Eigen::Map<const CMatrix> mt(in.data(), nb, na);
      out.resize(na * nb);
      Eigen::Map<CMatrix> ot(out.data(), nb, na);
      ot.noalias() = mt * aa.transpose();
      ot.noalias() += bt.transpose() * mt;
    };
  };
  op.apply = make(a, b.transpose());
  op.apply_adjoint = make(a.adjoint(), b.conjugate());
  return op;
}

inline LinearOperator dense_operator(const CMatrix& a) {
  LinearOperator op;
  op.size = a.rows();
  op.hermitian = (a - a.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff());
  op.apply = [a](const CVector& in, CVector& out) { out.noalias() = a * in; };
  op.apply_adjoint = [a](const CVector& in, CVector& out) { out.noalias() = a.adjoint() * in; };
  return op;
}

}  // namespace nclab
