#pragma once

// Second, independent route to R1 on a monomial x_{i_1}...x_{i_n}: the closed
// quadruple sum over positions k, l (same index) and p, q (same index), written
// directly in terms of position ranges. Shares only the containers with the
// library; none of the derivation operators are used.

#include <vector>

#include "nclab/ncpoly.hpp"

namespace oracle {

inline nclab::NcPoly r1_explicit(const std::vector<int>& idx) {
  using nclab::Family;
  using nclab::Letter;
  using nclab::Word;
  const int n = static_cast<int>(idx.size());
  const Family x1 = nclab::families::E1();
  const Family xt1 = nclab::families::Et1();
  const Family xt2 = nclab::families::Et2();
  const Family x2 = nclab::families::E2();
  auto at = [&](int pos) { return idx[static_cast<std::size_t>(pos - 1)]; };
  // letters i_a..i_b (1-based, inclusive; empty when a > b) in family f
  auto run = [&](Word& w, int a, int b, const Family& f) {
    for (int t = a; t <= b; ++t) w.letters.push_back(Letter::x(at(t), f));
  };

  nclab::NcPoly out;
  for (int k = 1; k <= n; ++k) {
    // l after k
    for (int l = k + 1; l <= n; ++l) {
      if (at(l) != at(k)) continue;
      for (int p = k + 1; p <= l - 1; ++p) {
        for (int q = l + 1; q <= n; ++q) {
          if (at(q) != at(p)) continue;
          Word w;
          run(w, p + 1, l - 1, x1);
          run(w, k + 1, p - 1, xt1);
          run(w, q + 1, n, xt2);
          run(w, 1, k - 1, xt2);
          run(w, l + 1, q - 1, x2);
          out.add(w, 1);
        }
        for (int q = 1; q <= k - 1; ++q) {
          if (at(q) != at(p)) continue;
          Word w;
          run(w, p + 1, l - 1, x1);
          run(w, k + 1, p - 1, xt1);
          run(w, q + 1, k - 1, xt2);
          run(w, l + 1, n, x2);
          run(w, 1, q - 1, x2);
          out.add(w, 1);
        }
      }
    }
    // l before k
    for (int l = 1; l <= k - 1; ++l) {
      if (at(l) != at(k)) continue;
      for (int q = l + 1; q <= k - 1; ++q) {
        for (int p = k + 1; p <= n; ++p) {
          if (at(p) != at(q)) continue;
          Word w;
          run(w, p + 1, n, x1);
          run(w, 1, l - 1, x1);
          run(w, k + 1, p - 1, xt1);
          run(w, q + 1, k - 1, xt2);
          run(w, l + 1, q - 1, x2);
          out.add(w, 1);
        }
        for (int p = 1; p <= l - 1; ++p) {
          if (at(p) != at(q)) continue;
          Word w;
          run(w, p + 1, l - 1, x1);
          run(w, k + 1, n, xt1);
          run(w, 1, p - 1, xt1);
          run(w, q + 1, k - 1, xt2);
          run(w, l + 1, q - 1, x2);
          out.add(w, 1);
        }
      }
    }
  }
  return out;
}

}  // namespace oracle
