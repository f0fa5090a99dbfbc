#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nclab/ncpoly/poly.hpp"

namespace nclab {

/// Restricts a derivation to letters of one family (the D_{i,I}, d_{i,I} variants).
using FamilyFilter = std::optional<Family>;

namespace detail {

inline bool matches(const Letter& l, int j, const FamilyFilter& fam) {
  return l.index == j && (!fam || l.family == *fam);
}

enum class PolyKind { empty, selfadjoint, cayley, mixed };

inline PolyKind kind_of(const Word& w) {
  bool sa = false, cay = false;
  for (const auto& l : w.letters) (l.is_cayley() ? cay : sa) = true;
  if (sa && cay) return PolyKind::mixed;
  if (cay) return PolyKind::cayley;
  if (sa) return PolyKind::selfadjoint;
  return PolyKind::empty;
}

inline PolyKind combine(PolyKind a, PolyKind b) {
  if (a == PolyKind::empty) return b;
  if (b == PolyKind::empty || a == b) return a;
  return PolyKind::mixed;
}

inline PolyKind kind_of(const NcPoly& p) {
  PolyKind k = PolyKind::empty;
  for (const auto& [w, c] : p) k = combine(k, kind_of(w));
  return k;
}

// d_j of a single selfadjoint word, appended to `out` with weight c.
inline void partial_word(const Word& w, int j, const FamilyFilter& fam, const CRational& c,
                         const std::function<void(const Word&, const Word&, const CRational&)>& emit) {
  for (std::size_t p = 0; p < w.size(); ++p) {
    if (w[p].is_cayley())
      throw Error(ErrorKind::mixed_kind, "free difference quotient applied to a Cayley letter");
    if (matches(w[p], j, fam)) emit(w.slice(0, p), w.slice(p + 1, w.size()), c);
  }
}

// d_j Psi(s_k)^eps = delta_jk eps (i/2) (Psi^eps - 1) x (Psi^eps - 1), extended by Leibniz.
inline void cayley_partial_word(const Word& w, int j, const FamilyFilter& fam, const CRational& c,
                                const std::function<void(const Word&, const Word&, const CRational&)>& emit) {
  for (std::size_t p = 0; p < w.size(); ++p) {
    const Letter& l = w[p];
    if (!l.is_cayley())
      throw Error(ErrorKind::mixed_kind, "Cayley derivation applied to a selfadjoint letter");
    if (!matches(l, j, fam)) continue;
    const Word a = w.slice(0, p);
    const Word b = w.slice(p + 1, w.size());
    const Word u{l};
    const CRational half_i(Rational(0), l.exponent > 0 ? make_rational(1, 2) : make_rational(-1, 2));
    const CRational k = c * half_i;
    emit(a * u, u * b, k);
    emit(a * u, b, -k);
    emit(a, u * b, -k);
    emit(a, b, k);
  }
}

// Dispatches on the letter kind of a word; mixed words are rejected.
inline void derive_word(const Word& w, int j, const FamilyFilter& fam, const CRational& c,
                        const std::function<void(const Word&, const Word&, const CRational&)>& emit) {
  switch (kind_of(w)) {
    case PolyKind::empty: return;
    case PolyKind::selfadjoint: partial_word(w, j, fam, c, emit); return;
    case PolyKind::cayley: cayley_partial_word(w, j, fam, c, emit); return;
    case PolyKind::mixed:
      throw Error(ErrorKind::mixed_kind, "word mixes selfadjoint and Cayley letters");
  }
}

}  // namespace detail

/// Adjoint: reverses words, conjugates coefficients, u -> u^{-1}.
inline NcPoly star(const NcPoly& p) {
  NcPoly out;
  for (const auto& [w, c] : p) {
    Word r;
    r.letters.reserve(w.size());
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) r.letters.push_back(it->adjoint());
    out.add(r, c.conj());
  }
  return out;
}

/// Image in the opposite algebra: word reversal, coefficients untouched.
inline NcPoly opposite(const NcPoly& p) {
  NcPoly out;
  for (const auto& [w, c] : p) out.add(w.reversed(), c);
  return out;
}

/// Free difference quotient d_j : selfadjoint letters only.
inline TensorPoly partial(const NcPoly& p, int j, const FamilyFilter& fam = std::nullopt) {
  TensorPoly out(2);
  for (const auto& [w, c] : p) {
    detail::partial_word(w, j, fam, c, [&](const Word& a, const Word& b, const CRational& k) {
      out.add({a, b}, k);
    });
  }
  return out;
}

/// d_j on Laurent polynomials in Cayley letters.
inline TensorPoly cayley_partial(const NcPoly& p, int j, const FamilyFilter& fam = std::nullopt) {
  TensorPoly out(2);
  for (const auto& [w, c] : p) {
    detail::cayley_partial_word(w, j, fam, c, [&](const Word& a, const Word& b, const CRational& k) {
      out.add({a, b}, k);
    });
  }
  return out;
}

/// d_j choosing the selfadjoint or Cayley rule from the letters present.
inline TensorPoly derivative(const NcPoly& p, int j, const FamilyFilter& fam = std::nullopt) {
  if (detail::kind_of(p) == detail::PolyKind::mixed)
    throw Error(ErrorKind::mixed_kind, "polynomial mixes selfadjoint and Cayley letters");
  TensorPoly out(2);
  for (const auto& [w, c] : p) {
    detail::derive_word(w, j, fam, c, [&](const Word& a, const Word& b, const CRational& k) {
      out.add({a, b}, k);
    });
  }
  return out;
}

/// Cancels adjacent u u^{-1} in every word (and every tensor slot).
inline NcPoly normalize(const NcPoly& p) {
  NcPoly out;
  for (const auto& [w, c] : p) out.add(normalize(w), c);
  return out;
}

inline TensorPoly normalize(const TensorPoly& t) {
  TensorPoly out(t.order());
  for (const auto& [k, c] : t) {
    TensorKey nk;
    nk.reserve(k.size());
    for (const auto& w : k) nk.push_back(normalize(w));
    out.add(nk, c);
  }
  return out;
}

/// Applies d_j to slot k (0-based), raising the order by one.
inline TensorPoly iterated_partial(const TensorPoly& t, int j, std::size_t k,
                                   const FamilyFilter& fam = std::nullopt) {
  if (k >= t.order())
    throw Error(ErrorKind::slot_out_of_range,
                "slot " + std::to_string(k) + " of a tensor of order " + std::to_string(t.order()));
  TensorPoly out(t.order() + 1);
  for (const auto& [key, c] : t) {
    detail::derive_word(key[k], j, fam, c, [&](const Word& a, const Word& b, const CRational& coef) {
      TensorKey nk;
      nk.reserve(key.size() + 1);
      nk.insert(nk.end(), key.begin(), key.begin() + static_cast<std::ptrdiff_t>(k));
      nk.push_back(a);
      nk.push_back(b);
      nk.insert(nk.end(), key.begin() + static_cast<std::ptrdiff_t>(k) + 1, key.end());
      out.add(nk, coef);
    });
  }
  return out;
}

/// Swaps slots k and k+1 (0-based).
inline TensorPoly flip_slots(const TensorPoly& t, std::size_t k = 0) {
  if (t.order() < 2 || k > t.order() - 2)
    throw Error(ErrorKind::slot_out_of_range,
                "flip at slot " + std::to_string(k) + " of a tensor of order " + std::to_string(t.order()));
  TensorPoly out(t.order());
  for (const auto& [key, c] : t) {
    TensorKey nk = key;
    std::swap(nk[k], nk[k + 1]);
    out.add(nk, c);
  }
  return out;
}

/// A_1 P_1 A_2 ... P_s A_{s+1} for t of order s+1.
inline NcPoly ev(const TensorPoly& t, const std::vector<NcPoly>& inserts) {
  if (inserts.size() + 1 != t.order())
    throw Error(ErrorKind::arity_mismatch, "ev of an order-" + std::to_string(t.order()) + " tensor needs " +
                                               std::to_string(t.order() - 1) + " inserts, got " +
                                               std::to_string(inserts.size()));
  NcPoly out;
  for (const auto& [key, c] : t) {
    NcPoly acc = NcPoly::monomial(key[0], c);
    for (std::size_t s = 0; s < inserts.size(); ++s) acc = acc * inserts[s] * NcPoly::monomial(key[s + 1]);
    out += acc;
  }
  return out;
}

/// ev with every insert equal to 1: plain multiplication of the slots.
inline NcPoly ev_ones(const TensorPoly& t) {
  NcPoly out;
  for (const auto& [key, c] : t) {
    Word w;
    for (const auto& slot : key) w = w * slot;
    out.add(w, c);
  }
  return out;
}

/// Embedding of the tensor power into the free product: letters of slot k are
/// moved to `relabel(k, letter)` and the slots are concatenated.
inline NcPoly sharp(const TensorPoly& t, const std::function<Letter(std::size_t, const Letter&)>& relabel) {
  NcPoly out;
  for (const auto& [key, c] : t) {
    Word w;
    for (std::size_t s = 0; s < key.size(); ++s)
      for (const auto& l : key[s].letters) w.letters.push_back(relabel(s, l));
    out.add(w, c);
  }
  return out;
}

/// Slot k's letters go to family fresh_families[k].
inline NcPoly sharp(const TensorPoly& t, const std::vector<Family>& fresh_families) {
  if (fresh_families.size() != t.order())
    throw Error(ErrorKind::arity_mismatch, "sharp needs one family per slot");
  std::set<Family> seen(fresh_families.begin(), fresh_families.end());
  if (seen.size() != fresh_families.size())
    throw Error(ErrorKind::duplicate_family, "sharp family labels must be pairwise distinct");
  return sharp(t, [&](std::size_t s, const Letter& l) { return l.with_family(fresh_families[s]); });
}

/// D_i p = ev_1 o flip o d_i p; on a monomial, the sum of BA over splittings M = A x_i B.
inline NcPoly cyclic_gradient(const NcPoly& p, int i, const FamilyFilter& fam = std::nullopt) {
  return ev_ones(flip_slots(derivative(p, i, fam), 0));
}

}  // namespace nclab
