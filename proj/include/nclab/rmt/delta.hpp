#pragma once

#include <map>

#include <unsupported/Eigen/MatrixFunctions>

#include "nclab/ncpoly.hpp"
#include "nclab/rmt/matrix.hpp"

namespace nclab {

/// Matrices assigned to (family, index); Cayley letters evaluate to Psi(x)^{+-1}.
class MatrixAssignment {
 public:
  MatrixAssignment() = default;
  /// x[0,1], ..., x[0,r] -> xs[0], ..., xs[r-1].
  explicit MatrixAssignment(const std::vector<CMatrix>& xs) {
    for (std::size_t k = 0; k < xs.size(); ++k) set(Family::base(), static_cast<int>(k) + 1, xs[k]);
  }

  void set(const Family& f, int index, CMatrix m) {
    if (dim_ >= 0 && m.rows() != dim_) throw Error(ErrorKind::size_mismatch, "assignment sizes differ");
    dim_ = m.rows();
    vars_[{f, index}] = std::move(m);
    cache_.clear();
  }

  Eigen::Index dim() const { return dim_; }

  const CMatrix& value(const Letter& l) const {
    auto it = vars_.find({l.family, l.index});
    if (it == vars_.end())
      throw Error(ErrorKind::invalid_argument, "no matrix assigned to " + l.family.label() + "," + std::to_string(l.index));
    if (!l.is_cayley()) return it->second;
    const auto key = std::make_tuple(l.family, l.index, l.exponent);
    auto c = cache_.find(key);
    if (c == cache_.end()) c = cache_.emplace(key, cayley_general(it->second, l.exponent)).first;
    return c->second;
  }

 private:
  Eigen::Index dim_ = -1;
  std::map<std::pair<Family, int>, CMatrix> vars_;
  mutable std::map<std::tuple<Family, int, int>, CMatrix> cache_;
};

inline CMatrix evaluate(const Word& w, const MatrixAssignment& a) {
  CMatrix out = CMatrix::Identity(a.dim(), a.dim());
  for (const auto& l : w.letters) out = out * a.value(l);
  return out;
}

inline CMatrix evaluate(const NcPoly& p, const MatrixAssignment& a) {
  CMatrix out = CMatrix::Zero(a.dim(), a.dim());
  for (const auto& [w, c] : p) out += c.to_complex() * evaluate(w, a);
  return out;
}

/// sum over terms A (x) B of coef * A(s) c B(s): ev_c applied to an order-2 tensor.
inline CMatrix evaluate_insert(const TensorPoly& t, const MatrixAssignment& a, const CMatrix& c) {
  if (t.order() != 2) throw Error(ErrorKind::arity_mismatch, "insertion needs an order-2 tensor");
  CMatrix out = CMatrix::Zero(a.dim(), a.dim());
  for (const auto& [key, coef] : t) out += coef.to_complex() * evaluate(key[0], a) * c * evaluate(key[1], a);
  return out;
}

/// [[s, c], [0, u]].
inline CMatrix upper_block(const CMatrix& s, const CMatrix& u, const CMatrix& c) {
  const Eigen::Index n = s.rows();
  if (u.rows() != n || c.rows() != n || s.cols() != n || u.cols() != n || c.cols() != n)
    throw Error(ErrorKind::size_mismatch, "block entries must share one size");
  CMatrix b = CMatrix::Zero(2 * n, 2 * n);
  b.topLeftCorner(n, n) = s;
  b.topRightCorner(n, n) = c;
  b.bottomRightCorner(n, n) = u;
  return b;
}

/// Delta f(s; u)(c): the (1,2) block of f([[s, c], [0, u]]).
inline CMatrix block_delta_eval(const std::function<CMatrix(const CMatrix&)>& f, const CMatrix& s,
                                const CMatrix& u, const CMatrix& c) {
  const Eigen::Index n = s.rows();
  return f(upper_block(s, u, c)).topRightCorner(n, n);
}

/// Delta_j P(s; u)(c) for a polynomial in several variables: x_j is evaluated at
/// [[s_j, c], [0, u_j]], every other x_k at [[s_k, 0], [0, u_k]].
inline CMatrix block_delta_eval(const NcPoly& p, const std::vector<CMatrix>& s, const std::vector<CMatrix>& u,
                                int j, const CMatrix& c) {
  if (s.size() != u.size()) throw Error(ErrorKind::size_mismatch, "s and u need the same length");
  if (j < 1 || static_cast<std::size_t>(j) > s.size()) throw Error(ErrorKind::invalid_argument, "variable index out of range");
  std::vector<CMatrix> blocks;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const CMatrix zero = CMatrix::Zero(s[k].rows(), s[k].cols());
    blocks.push_back(upper_block(s[k], u[k], static_cast<int>(k) + 1 == j ? c : zero));
  }
  const Eigen::Index n = c.rows();
  return evaluate(p, MatrixAssignment(blocks)).topRightCorner(n, n);
}

/// Matrix exponential (Pade scaling and squaring).
inline CMatrix matrix_exp(const CMatrix& a) { return a.exp(); }

/// (z - A)^{-1}.
inline CMatrix resolvent(const CMatrix& a, Complex z) {
  const CMatrix m = z * CMatrix::Identity(a.rows(), a.cols()) - a;
  Eigen::PartialPivLU<CMatrix> lu(m);
  if (!(lu.rcond() > 1e-14)) throw Error(ErrorKind::singular, "z lies numerically in the spectrum");
  return lu.inverse();
}

}  // namespace nclab

