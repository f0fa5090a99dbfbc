#pragma once

#include <array>
#include <map>
#include <utility>

#include "nclab/ncpoly/calculus.hpp"

namespace nclab {

/// Index sets labelling the interpolated semicircular families.
namespace families {

using IndexSet = std::vector<int>;

inline Family from_set(const IndexSet& s) {
  std::string label = "{";
  for (std::size_t k = 0; k < s.size(); ++k) label += (k ? "," : "") + std::to_string(s[k]);
  return Family(label + "}");
}

// First level: E1 = {2,1}, E2 = {3,1}, E~1 = {5,4}, E~2 = {6,4}, listed in this order.
inline const std::array<IndexSet, 4>& j1_sets() {
  static const std::array<IndexSet, 4> sets{{{2, 1}, {3, 1}, {5, 4}, {6, 4}}};
  return sets;
}

inline Family E1() { return from_set({2, 1}); }
inline Family E2() { return from_set({3, 1}); }
inline Family Et1() { return from_set({5, 4}); }
inline Family Et2() { return from_set({6, 4}); }

/// Slot order of the four-argument evaluation (x^1, x~^1, x~^2, x^2).
inline std::array<Family, 4> r1_slot_families() { return {E1(), Et1(), Et2(), E2()}; }

/// Position of a first-level family in the listing {E1, E2, E~1, E~2}, or -1.
inline int j1_position(const Family& f) {
  const auto& sets = j1_sets();
  for (int p = 0; p < 4; ++p)
    if (from_set(sets[static_cast<std::size_t>(p)]) == f) return p;
  return -1;
}

using J2Table = std::array<IndexSet, 4>;

// Second level; each table is in bijection with the first level by position.
inline const std::map<std::string, J2Table>& j2_tables() {
  static const std::map<std::string, J2Table> t{
      {"1,1", {{{8, 2, 1, 19}, {9, 3, 1, 19}, {11, 5, 4, 19}, {12, 6, 4, 19}}}},
      {"2,1", {{{8, 7, 1, 19}, {9, 7, 1, 19}, {11, 10, 4, 19}, {12, 10, 4, 19}}}},
      {"1,2", {{{14, 2, 1, 19}, {15, 3, 1, 19}, {17, 5, 4, 19}, {18, 6, 4, 19}}}},
      {"2,2", {{{14, 13, 1, 19}, {15, 13, 1, 19}, {17, 16, 4, 19}, {18, 16, 4, 19}}}},
      {"3,1", {{{8, 7, 20, 19}, {9, 7, 20, 19}, {11, 10, 20, 19}, {12, 10, 20, 19}}}},
      {"3,2", {{{14, 13, 21, 19}, {15, 13, 21, 19}, {17, 16, 21, 19}, {18, 16, 21, 19}}}},
      {"~1,1", {{{29, 23, 22, 40}, {30, 24, 22, 40}, {32, 26, 25, 40}, {33, 27, 25, 40}}}},
      {"~2,1", {{{29, 28, 22, 40}, {30, 28, 22, 40}, {32, 31, 25, 40}, {33, 31, 25, 40}}}},
      {"~1,2", {{{35, 23, 22, 40}, {36, 24, 22, 40}, {38, 26, 25, 40}, {39, 27, 25, 40}}}},
      {"~2,2", {{{35, 34, 22, 40}, {36, 34, 22, 40}, {38, 37, 25, 40}, {39, 37, 25, 40}}}},
      {"~3,1", {{{29, 28, 41, 40}, {30, 28, 41, 40}, {32, 31, 41, 40}, {33, 31, 41, 40}}}},
      {"~3,2", {{{35, 34, 42, 40}, {36, 34, 42, 40}, {38, 37, 42, 40}, {39, 37, 42, 40}}}},
  };
  return t;
}

/// Tables used for the four output slots of each R2 variant: variant 1 is evaluated
/// on (X_{3,1}, X~_{3,1}, X~_{3,2}, X_{3,2}), variant 2 on the (1,.) tables and
/// variant 3 on the (2,.) tables.
inline std::array<std::string, 4> r2_slot_tables(int variant) {
  switch (variant) {
    case 1: return {"3,1", "~3,1", "~3,2", "3,2"};
    case 2: return {"1,1", "~1,1", "~1,2", "1,2"};
    case 3: return {"2,1", "~2,1", "~2,2", "2,2"};
    default: throw Error(ErrorKind::invalid_argument, "R2 variant must be 1, 2 or 3");
  }
}

}  // namespace families

namespace detail {

// [(flip o d_k) x (flip o d_k')] applied to an order-2 tensor.
inline TensorPoly flip_partial_pair(const TensorPoly& t, int k, const FamilyFilter& left,
                                    const FamilyFilter& right, const Limits& limits) {
  TensorPoly out(4);
  for (const auto& [key, c] : t) {
    TensorPoly a = flip_slots(derivative(NcPoly::monomial(key[0]), k, left));
    if (a.is_zero()) continue;
    TensorPoly b = flip_slots(derivative(NcPoly::monomial(key[1]), k, right));
    if (b.is_zero()) continue;
    out.add(tensor_product(a, b), c);
    out.check_cap(limits);
  }
  return out;
}

inline void require_families(const NcPoly& p, const std::function<bool(const Family&)>& ok,
                             const std::string& what) {
  for (const auto& [w, c] : p)
    for (const auto& l : w.letters)
      if (!ok(l.family))
        throw Error(ErrorKind::foreign_family, "letter of family " + l.family.label() + " in " + what);
}

}  // namespace detail

/// Per-(j,k) summands of R1(p); the keys are (j,k). Mostly a debugging aid.
inline std::map<std::pair<int, int>, NcPoly> r1_contributions(const NcPoly& p, int r = 0,
                                                              const Limits& limits = {}) {
  detail::require_families(p, [](const Family& f) { return f.is_base(); }, "r1_build input");
  if (r <= 0) r = p.max_index();
  const auto slots = families::r1_slot_families();
  const std::vector<Family> slot_vec(slots.begin(), slots.end());
  std::map<std::pair<int, int>, NcPoly> out;
  for (int j = 1; j <= r; ++j) {
    const TensorPoly second = derivative(cyclic_gradient(p, j), j);
    second.check_cap(limits);
    for (int k = 1; k <= r; ++k) {
      const TensorPoly four = detail::flip_partial_pair(second, k, std::nullopt, std::nullopt, limits);
      NcPoly term = sharp(four, slot_vec);
      if (!term.is_zero()) out.emplace(std::make_pair(j, k), std::move(term));
    }
  }
  return out;
}

/// R1(P) = sum_{j,k} #^3 [(flip o d_k) x (flip o d_k)] (d_j D_j P), a polynomial in the
/// four first-level families (slot order E1, E~1, E~2, E2). Works for selfadjoint
/// polynomials and for Laurent polynomials in Cayley letters.
inline NcPoly r1_build(const NcPoly& p, int r = 0, const Limits& limits = {}) {
  NcPoly out;
  for (const auto& [jk, term] : r1_contributions(p, r, limits)) out += term;
  out.check_cap(limits);
  return out;
}

/// R2^{(variant)}(q) for q over the first-level families. d_i and D_i sum over all
/// four families; the outer pair of family-resolved derivatives is restricted by
/// variant: 1 = all pairs, 2 = equal first entries (I_1 = K_1), 3 = equal second
/// entries (I_2 = K_2). Output letters carry second-level set labels.
inline NcPoly r2_build(const NcPoly& q, int variant, int r = 0, const Limits& limits = {}) {
  detail::require_families(q, [](const Family& f) { return families::j1_position(f) >= 0; },
                           "r2_build input");
  const auto table_names = families::r2_slot_tables(variant);
  if (r <= 0) r = q.max_index();
  const auto& sets = families::j1_sets();
  const auto& tables = families::j2_tables();

  std::vector<std::pair<FamilyFilter, FamilyFilter>> pairs;
  if (variant == 1) {
    pairs.emplace_back(std::nullopt, std::nullopt);
  } else {
    const std::size_t entry = variant == 2 ? 0 : 1;
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b)
        if (sets[a][entry] == sets[b][entry])
          pairs.emplace_back(families::from_set(sets[a]), families::from_set(sets[b]));
  }

  auto relabel = [&](std::size_t slot, const Letter& l) {
    const int pos = families::j1_position(l.family);
    const auto& table = tables.at(table_names[slot]);
    return l.with_family(families::from_set(table[static_cast<std::size_t>(pos)]));
  };

  NcPoly out;
  for (int i = 1; i <= r; ++i) {
    const TensorPoly second = derivative(cyclic_gradient(q, i), i);
    second.check_cap(limits);
    for (int j = 1; j <= r; ++j) {
      for (const auto& [left, right] : pairs) {
        const TensorPoly four = detail::flip_partial_pair(second, j, left, right, limits);
        out += sharp(four, relabel);
        out.check_cap(limits);
      }
    }
  }
  return out;
}

}  // namespace nclab
