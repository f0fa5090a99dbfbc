#pragma once

#include <map>
#include <string>

#include "nclab/freemoments.hpp"

namespace nclab {

/// Polynomial in N^{-2}: key g holds the coefficient of N^{-2g}.
class NPoly {
 public:
  void add(int order, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(order, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  Rational coefficient(int order) const {
    auto it = terms_.find(order);
    return it == terms_.end() ? Rational(0) : it->second;
  }
  double evaluate(double N) const {
    double s = 0;
    for (const auto& [g, c] : terms_) s += to_double(c) * std::pow(N, -2.0 * g);
    return s;
  }
  bool is_zero() const { return terms_.empty(); }
  const std::map<int, Rational>& terms() const { return terms_; }

  NPoly& operator+=(const NPoly& o) {
    for (const auto& [g, c] : o.terms_) add(g, c);
    return *this;
  }
  friend NPoly operator*(const Rational& s, const NPoly& p) {
    NPoly out;
    for (const auto& [g, c] : p.terms_) out.add(g, s * c);
    return out;
  }
  friend bool operator==(const NPoly&, const NPoly&) = default;

 private:
  std::map<int, Rational> terms_;
};

inline std::string to_string(const NPoly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (const auto& [g, c] : p.terms()) {
    if (!s.empty()) s += " + ";
    s += c.str();
    if (g) s += "*N^-" + std::to_string(2 * g);
  }
  return s;
}

inline Rational coefficient(const NPoly& p, int order) { return p.coefficient(order); }

inline constexpr std::size_t gue_word_length_cap = 12;

/// E[tr_N] of a word in independent GUE matrices (diagonal entries N(0,1/N)):
/// sum over index-matched pairings pi of N^{c(gamma pi) - 1 - n/2}.
inline NPoly gue_word_expectation(const Word& w) {
  for (const auto& l : w.letters)
    if (l.is_cayley() || !l.family.is_base())
      throw Error(ErrorKind::invalid_argument, "GUE words take base-family selfadjoint letters");
  if (w.size() > gue_word_length_cap)
    throw Error(ErrorKind::degree_cap, "GUE words are limited to length " + std::to_string(gue_word_length_cap));
  NPoly out;
  const std::size_t n = w.size();
  if (n == 0) {
    out.add(0, 1);
    return out;
  }
  std::vector<std::size_t> pi(n), seen(n);
  for (const auto& pairing : enumerate_color_pairings(w)) {
    for (const auto& [a, b] : pairing.pairs) {
      pi[a] = b;
      pi[b] = a;
    }
    // cycles of gamma o pi, gamma(k) = k + 1 mod n
    std::fill(seen.begin(), seen.end(), 0);
    std::size_t cycles = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (seen[s]) continue;
      ++cycles;
      for (std::size_t k = s; !seen[k]; k = (pi[k] + 1) % n) seen[k] = 1;
    }
    // exponent c - 1 - n/2 = -2g
    const auto genus = static_cast<int>((n / 2 + 1 - cycles) / 2);
    out.add(genus, 1);
  }
  return out;
}

/// E[tr_N] of a polynomial; coefficients must be real.
inline NPoly gue_expectation(const NcPoly& p) {
  NPoly out;
  for (const auto& [w, c] : p) {
    if (!c.is_real()) throw Error(ErrorKind::invalid_argument, "complex coefficient in gue_expectation");
    out += c.re * gue_word_expectation(w);
  }
  return out;
}

}  // namespace nclab
