#pragma once

#include "nclab/rmt/model.hpp"

namespace nclab {

struct NormOptions {
  double tolerance = 1e-8;
  Eigen::Index dense_limit = 4096;
  int max_iterations = 3000;
  std::uint64_t seed = 0x5eed;
};

struct ExtremalEigenvalues {
  double min = 0;
  double max = 0;
  int iterations = 0;
};

/// Extremal eigenvalues of a Hermitian operator by Lanczos with full
/// reorthogonalization; both ends are converged to a relative residual tolerance.
inline ExtremalEigenvalues lanczos_extremes(const LinearOperator& op, const NormOptions& opt = {}) {
  if (!op.hermitian) throw Error(ErrorKind::invalid_argument, "Lanczos needs a Hermitian operator");
  const Eigen::Index n = op.size;
  if (n == 0) return {};
  const int kmax = static_cast<int>(std::min<Eigen::Index>(n, opt.max_iterations));

  GueSampler rng(opt.seed);
  CVector q(n);
  for (Eigen::Index k = 0; k < n; ++k) q(k) = Complex(rng.normal(), rng.normal());
  q.normalize();

  std::vector<CVector> basis;
  std::vector<double> alpha, beta;
  CVector w(n);
  for (int k = 0; k < kmax; ++k) {
    basis.push_back(q);
    op.apply(q, w);
    const double a = std::real(q.dot(w));
    alpha.push_back(a);
    // two passes of classical Gram-Schmidt against the whole basis
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) w -= b * b.dot(w);
    const double bnorm = w.norm();

    const bool check = (k + 1) % 10 == 0 || k + 1 == kmax || bnorm == 0.0;
    if (check) {
      const int m = k + 1;
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        t(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
      const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(m - 1);
      const double scale = std::max(std::abs(lo), std::abs(hi));
      const double r_lo = bnorm * std::abs(es.eigenvectors()(m - 1, 0));
      const double r_hi = bnorm * std::abs(es.eigenvectors()(m - 1, m - 1));
      if (bnorm <= 1e-14 * std::max(1.0, scale) ||
          (r_lo <= opt.tolerance * std::max(scale, 1e-300) && r_hi <= opt.tolerance * std::max(scale, 1e-300)) ||
          m == n)
        return {lo, hi, m};
    }
    beta.push_back(bnorm);
    q = w / bnorm;
  }
  throw Error(ErrorKind::non_convergence, "Lanczos did not converge in " + std::to_string(kmax) + " steps");
}

/// Largest singular value of a matrix-free operator; non-Hermitian maps go
/// through the Hermitian dilation [[0, A], [A*, 0]].
inline double operator_norm(const LinearOperator& op, const NormOptions& opt = {}) {
  if (op.hermitian) {
    const auto e = lanczos_extremes(op, opt);
    return std::max(std::abs(e.min), std::abs(e.max));
  }
  if (!op.apply_adjoint) throw Error(ErrorKind::invalid_argument, "non-Hermitian operator needs its adjoint");
  const Eigen::Index n = op.size;
  LinearOperator dil;
  dil.size = 2 * n;
  dil.hermitian = true;
  dil.apply = [&op, n](const CVector& in, CVector& out) {
    CVector top(n), bottom(n);
    op.apply(in.tail(n), top);
    op.apply_adjoint(in.head(n), bottom);
    out.resize(2 * n);
    out.head(n) = top;
    out.tail(n) = bottom;
  };
  const auto e = lanczos_extremes(dil, opt);
  return std::max(std::abs(e.min), std::abs(e.max));
}

/// Largest singular value: dense decomposition up to opt.dense_limit, Lanczos above.
inline double operator_norm(const CMatrix& a, const NormOptions& opt = {}) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::size_mismatch, "operator_norm needs a square matrix");
  if (a.rows() == 0) return 0;
  if (a.rows() > opt.dense_limit) return operator_norm(dense_operator(a), opt);
  const bool herm = (a - a.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff());
  if (herm) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::BDCSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

inline double operator_norm(const HermitianMatrix& h, const NormOptions& opt = {}) {
  return operator_norm(h.matrix(), opt);
}

}  // namespace nclab
