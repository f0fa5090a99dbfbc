#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "nclab/error.hpp"

namespace nclab {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Complex = std::complex<double>;

inline constexpr Complex I_unit{0.0, 1.0};

// ---------------------------------------------------------------------------
// Seeds

/// splitmix64 finalizer; an avalanche permutation of 64-bit words.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of trial t under base_seed; independent of the order trials run in.
inline std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t t) {
  return splitmix64(base_seed ^ splitmix64(t));
}

// ---------------------------------------------------------------------------
// Hermitian matrices

/// Dense Hermitian matrix, stored symmetrized.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  /// Accepts A if ||A - A*||_max <= tol * max(1, ||A||_max); stores (A + A*)/2.
  explicit HermitianMatrix(const CMatrix& a, double tol = 1e-12) {
    if (a.rows() != a.cols()) throw Error(ErrorKind::size_mismatch, "Hermitian matrix must be square");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() > tol * scale)
      throw Error(ErrorKind::invalid_argument, "matrix is not Hermitian");
    m_ = (a + a.adjoint()) / 2.0;
  }

  Eigen::Index dim() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }
  operator const CMatrix&() const { return m_; }

  RVector eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

 private:
  CMatrix m_;
};

/// Source of GUE matrices driven by one mt19937_64 stream.
class GueSampler {
 public:
  explicit GueSampler(std::uint64_t seed) : rng_(seed) {}

  /// Diagonal N(0, 1/N); real and imaginary parts off the diagonal N(0, 1/(2N)).
  HermitianMatrix gue(Eigen::Index n) {
    if (n < 1) throw Error(ErrorKind::invalid_argument, "GUE size must be >= 1");
    const double sd_diag = 1.0 / std::sqrt(static_cast<double>(n));
    const double sd_off = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
    CMatrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      a(i, i) = sd_diag * normal_(rng_);
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double re = sd_off * normal_(rng_);
        const double im = sd_off * normal_(rng_);
        a(i, j) = Complex(re, im);
        a(j, i) = Complex(re, -im);
      }
    }
    return HermitianMatrix(a);
  }

  double normal() { return normal_(rng_); }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline HermitianMatrix sample_gue(Eigen::Index n, std::uint64_t seed) {
  GueSampler s(seed);
  return s.gue(n);
}

// ---------------------------------------------------------------------------
// Cayley transforms

/// Psi(H) = (H + i)(H - i)^{-1} through the spectral decomposition of H.
inline CMatrix cayley_matrix(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix());
  const RVector& lam = es.eigenvalues();
  CVector d(lam.size());
  for (Eigen::Index k = 0; k < lam.size(); ++k) d(k) = Complex(lam(k), 1.0) / Complex(lam(k), -1.0);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

namespace detail {

inline CMatrix checked_solve_right(const CMatrix& num, const CMatrix& den, const char* what) {
  // num * den^{-1}
  Eigen::PartialPivLU<CMatrix> lu(den.adjoint());
  const double rc = lu.rcond();
  if (!(rc > 1e-13)) throw Error(ErrorKind::singular, std::string(what) + ": matrix is numerically singular");
  return lu.solve(num.adjoint()).adjoint();
}

}  // namespace detail

/// Psi(Z)^eps = (Z + eps i)(Z - eps i)^{-1} for an arbitrary square Z.
inline CMatrix cayley_general(const CMatrix& z, int eps = 1) {
  if (eps != 1 && eps != -1) throw Error(ErrorKind::invalid_argument, "Cayley exponent must be +-1");
  const CMatrix id = CMatrix::Identity(z.rows(), z.cols());
  const Complex s = static_cast<double>(eps) * I_unit;
  return detail::checked_solve_right(z + s * id, z - s * id, "cayley");
}

/// i (U + 1)(U - 1)^{-1}; requires 1 outside the spectrum of U.
inline CMatrix inverse_cayley(const CMatrix& u) {
  const CMatrix id = CMatrix::Identity(u.rows(), u.cols());
  return I_unit * detail::checked_solve_right(u + id, u - id, "inverse_cayley");
}

/// Largest entry modulus of U U* - 1.
inline double unitarity_defect(const CMatrix& u) {
  return (u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace nclab
