#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "nclab/error.hpp"
#include "nclab/ncpoly/word.hpp"
#include "nclab/rational.hpp"

namespace nclab {

/// Resource guardrails for the symbolic operators.
struct Limits {
  std::size_t max_terms = 1'000'000;
};

/// Finite formal combination Key -> exact complex coefficient, never storing zeros.
template <typename Key>
class LinearCombination {
 public:
  using map_type = std::map<Key, CRational>;
  using const_iterator = typename map_type::const_iterator;

  LinearCombination() = default;
  LinearCombination(const Key& k, CRational c) { add(k, std::move(c)); }

  void add(const Key& k, const CRational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  void add(const LinearCombination& o, const CRational& scale = CRational(1)) {
    for (const auto& [k, c] : o.terms_) add(k, c * scale);
  }

  CRational coefficient(const Key& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? CRational() : it->second;
  }

  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  const_iterator begin() const { return terms_.begin(); }
  const_iterator end() const { return terms_.end(); }
  const map_type& terms() const { return terms_; }

  void check_cap(const Limits& limits) const {
    if (terms_.size() > limits.max_terms)
      throw Error(ErrorKind::term_cap, "term count " + std::to_string(terms_.size()) +
                                           " exceeds cap " + std::to_string(limits.max_terms));
  }

  LinearCombination& operator+=(const LinearCombination& o) {
    add(o);
    return *this;
  }
  LinearCombination& operator-=(const LinearCombination& o) {
    add(o, CRational(-1));
    return *this;
  }
  LinearCombination& operator*=(const CRational& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }

  friend bool operator==(const LinearCombination&, const LinearCombination&) = default;

 private:
  map_type terms_;
};

/// Noncommutative polynomial with exact complex-rational coefficients.
class NcPoly : public LinearCombination<Word> {
 public:
  using LinearCombination<Word>::LinearCombination;
  NcPoly() = default;
  NcPoly(const LinearCombination<Word>& lc) : LinearCombination<Word>(lc) {}  // NOLINT

  static NcPoly constant(const CRational& c) { return NcPoly(Word::unit(), c); }
  static NcPoly monomial(const Word& w, const CRational& c = CRational(1)) { return NcPoly(w, c); }
  static NcPoly letter(const Letter& l) { return NcPoly(Word{l}, CRational(1)); }

  std::size_t degree() const {
    std::size_t d = 0;
    for (const auto& [w, c] : *this) d = std::max(d, w.size());
    return d;
  }

  int max_index() const {
    int r = 0;
    for (const auto& [w, c] : *this) r = std::max(r, nclab::max_index(w));
    return r;
  }

  friend NcPoly operator+(NcPoly a, const NcPoly& b) {
    a += b;
    return a;
  }
  friend NcPoly operator-(NcPoly a, const NcPoly& b) {
    a -= b;
    return a;
  }
  friend NcPoly operator*(const CRational& s, NcPoly a) {
    a *= s;
    return a;
  }
  friend NcPoly operator*(const NcPoly& a, const NcPoly& b) {
    NcPoly out;
    for (const auto& [wa, ca] : a)
      for (const auto& [wb, cb] : b) out.add(wa * wb, ca * cb);
    return out;
  }
};

using TensorKey = std::vector<Word>;

/// Element of the s-fold algebraic tensor power. Order 1 is identified with NcPoly
/// through `as_tensor` / `to_poly`.
class TensorPoly : public LinearCombination<TensorKey> {
 public:
  explicit TensorPoly(std::size_t order = 2) : order_(order) {
    if (order == 0) throw Error(ErrorKind::invalid_argument, "tensor order must be >= 1");
  }

  std::size_t order() const { return order_; }

  void add(const TensorKey& k, const CRational& c) {
    if (k.size() != order_)
      throw Error(ErrorKind::arity_mismatch, "tensor key of order " + std::to_string(k.size()) +
                                                 " added to order " + std::to_string(order_));
    LinearCombination<TensorKey>::add(k, c);
  }
  void add(const TensorPoly& o, const CRational& scale = CRational(1)) {
    if (o.order() != order_) throw Error(ErrorKind::arity_mismatch, "tensor order mismatch");
    LinearCombination<TensorKey>::add(o, scale);
  }

  friend TensorPoly operator+(TensorPoly a, const TensorPoly& b) {
    a.add(b);
    return a;
  }
  friend TensorPoly operator-(TensorPoly a, const TensorPoly& b) {
    a.add(b, CRational(-1));
    return a;
  }

  /// Factor-wise product (A1 x ... x As)(B1 x ... x Bs) = A1B1 x ... x AsBs.
  friend TensorPoly operator*(const TensorPoly& a, const TensorPoly& b) {
    if (a.order() != b.order()) throw Error(ErrorKind::arity_mismatch, "tensor order mismatch");
    TensorPoly out(a.order());
    for (const auto& [ka, ca] : a) {
      for (const auto& [kb, cb] : b) {
        TensorKey k(a.order());
        for (std::size_t s = 0; s < a.order(); ++s) k[s] = ka[s] * kb[s];
        out.add(k, ca * cb);
      }
    }
    return out;
  }

  /// The "circle" product of order-2 tensors: (A x B) o (C x D) = AC x DB.
  friend TensorPoly circ(const TensorPoly& a, const TensorPoly& b) {
    if (a.order() != 2 || b.order() != 2)
      throw Error(ErrorKind::arity_mismatch, "circ product is defined on order-2 tensors");
    TensorPoly out(2);
    for (const auto& [ka, ca] : a)
      for (const auto& [kb, cb] : b) out.add({ka[0] * kb[0], kb[1] * ka[1]}, ca * cb);
    return out;
  }

  friend bool operator==(const TensorPoly& a, const TensorPoly& b) {
    return a.order_ == b.order_ && a.terms() == b.terms();
  }

  NcPoly to_poly() const {
    if (order_ != 1) throw Error(ErrorKind::arity_mismatch, "only order-1 tensors are polynomials");
    NcPoly p;
    for (const auto& [k, c] : *this) p.add(k[0], c);
    return p;
  }

 private:
  std::size_t order_;
};

inline TensorPoly as_tensor(const NcPoly& p) {
  TensorPoly t(1);
  for (const auto& [w, c] : p) t.add(TensorKey{w}, c);
  return t;
}

/// Pure tensor P1 x P2 x ... x Ps.
inline TensorPoly tensor_product(const std::vector<NcPoly>& factors) {
  if (factors.empty()) throw Error(ErrorKind::arity_mismatch, "empty tensor product");
  TensorPoly out(factors.size());
  std::vector<std::pair<TensorKey, CRational>> acc{{TensorKey{}, CRational(1)}};
  for (const auto& f : factors) {
    std::vector<std::pair<TensorKey, CRational>> next;
    for (const auto& [k, c] : acc) {
      for (const auto& [w, cw] : f) {
        TensorKey nk = k;
        nk.push_back(w);
        next.emplace_back(std::move(nk), c * cw);
      }
    }
    acc = std::move(next);
  }
  for (const auto& [k, c] : acc) out.add(k, c);
  return out;
}

/// Tensor product of two tensors: order adds.
inline TensorPoly tensor_product(const TensorPoly& a, const TensorPoly& b) {
  TensorPoly out(a.order() + b.order());
  for (const auto& [ka, ca] : a) {
    for (const auto& [kb, cb] : b) {
      TensorKey k = ka;
      k.insert(k.end(), kb.begin(), kb.end());
      out.add(k, ca * cb);
    }
  }
  return out;
}

}  // namespace nclab
