#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "nclab/ncpoly.hpp"

namespace nclab {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Pair partitions

/// Perfect matching of positions 0..n-1; each pair is stored (smaller, larger).
struct PairPartition {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  bool is_noncrossing() const {
    std::vector<std::size_t> partner(n);
    for (const auto& [a, b] : pairs) {
      partner[a] = b;
      partner[b] = a;
    }
    std::vector<std::size_t> open;
    for (std::size_t p = 0; p < n; ++p) {
      if (partner[p] > p) {
        open.push_back(p);
      } else {
        if (open.empty() || open.back() != partner[p]) return false;
        open.pop_back();
      }
    }
    return true;
  }

  friend bool operator==(const PairPartition&, const PairPartition&) = default;
};

namespace detail {

inline void enumerate_pairings(const std::vector<int>& color, std::vector<bool>& used,
                               PairPartition& current, std::vector<PairPartition>& out) {
  std::size_t first = 0;
  while (first < used.size() && used[first]) ++first;
  if (first == used.size()) {
    out.push_back(current);
    return;
  }
  used[first] = true;
  for (std::size_t q = first + 1; q < used.size(); ++q) {
    if (used[q] || color[q] != color[first]) continue;
    used[q] = true;
    current.pairs.emplace_back(first, q);
    enumerate_pairings(color, used, current, out);
    current.pairs.pop_back();
    used[q] = false;
  }
  used[first] = false;
}

}  // namespace detail

/// All perfect matchings of letter positions that pair equal indices.
inline std::vector<PairPartition> enumerate_color_pairings(const Word& w) {
  std::vector<PairPartition> out;
  if (w.size() % 2) return out;
  std::vector<int> color;
  for (const auto& l : w.letters) color.push_back(l.index);
  std::vector<bool> used(w.size(), false);
  PairPartition current;
  current.n = w.size();
  detail::enumerate_pairings(color, used, current, out);
  return out;
}

// ---------------------------------------------------------------------------
// Polynomials in (q1, q2) and covariance kernels

/// Exact polynomial in two symbols q1, q2; keys are exponent pairs.
class QPoly {
 public:
  using Key = std::pair<int, int>;

  QPoly() = default;
  static QPoly constant(const Rational& c) {
    QPoly p;
    p.add({0, 0}, c);
    return p;
  }
  static QPoly monomial(int k1, int k2, const Rational& c = 1) {
    QPoly p;
    p.add({k1, k2}, c);
    return p;
  }

  void add(const Key& k, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(k, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rational coefficient(int k1, int k2) const {
    auto it = terms_.find({k1, k2});
    return it == terms_.end() ? Rational(0) : it->second;
  }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Key, Rational>& terms() const { return terms_; }

  double evaluate(double q1, double q2) const {
    double s = 0;
    for (const auto& [k, c] : terms_) s += to_double(c) * std::pow(q1, k.first) * std::pow(q2, k.second);
    return s;
  }

  QPoly& operator+=(const QPoly& o) {
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
  }
  friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
  friend QPoly operator*(const QPoly& a, const QPoly& b) {
    QPoly out;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) out.add({ka.first + kb.first, ka.second + kb.second}, ca * cb);
    return out;
  }
  friend bool operator==(const QPoly&, const QPoly&) = default;

 private:
  std::map<Key, Rational> terms_;
};

inline std::string to_string(const QPoly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (const auto& [k, c] : p.terms()) {
    if (!s.empty()) s += " + ";
    s += c.str();
    if (k.first) s += "*q1^" + std::to_string(k.first);
    if (k.second) s += "*q2^" + std::to_string(k.second);
  }
  return s;
}

/// Covariance of two letters of the same index, given their families, as c*q1^a*q2^b.
struct KernelValue {
  Rational coeff = 0;
  int q1 = 0;
  int q2 = 0;

  QPoly as_qpoly() const { return QPoly::monomial(q1, q2, coeff); }
};

class CovarianceKernel {
 public:
  using Fn = std::function<KernelValue(const Family&, const Family&)>;

  explicit CovarianceKernel(Fn fn) : fn_(std::move(fn)) {}

  KernelValue value(const Family& a, const Family& b) const { return fn_(a, b); }

  /// Families are mutually free: covariance 1 inside a family, 0 across.
  static CovarianceKernel identity() {
    return CovarianceKernel([](const Family& a, const Family& b) {
      return KernelValue{a == b ? Rational(1) : Rational(0), 0, 0};
    });
  }

  /// The interpolated families E1, E~1, E~2, E2: self 1, (E1,E2) and (E~1,E~2)
  /// give q1 = exp(-t1), any pair across tilde/non-tilde gives q2 = exp(-t2).
  static CovarianceKernel interpolation() {
    return CovarianceKernel([](const Family& a, const Family& b) {
      const int pa = families::j1_position(a);
      const int pb = families::j1_position(b);
      if (pa < 0 || pb < 0) throw Error(ErrorKind::foreign_family, "kernel defined on E1, E2, E~1, E~2 only");
      if (pa == pb) return KernelValue{1, 0, 0};
      const bool ta = pa >= 2, tb = pb >= 2;  // listing order E1, E2, E~1, E~2
      if (ta == tb) return KernelValue{1, 1, 0};
      return KernelValue{1, 0, 1};
    });
  }

 private:
  Fn fn_;
};

namespace detail {

// Non-crossing pairings of w[lo, hi) by the first-letter decomposition.
class NonCrossingSum {
 public:
  NonCrossingSum(const Word& w, const CovarianceKernel& k) : w_(w), kernel_(k) {}

  QPoly run(std::size_t lo, std::size_t hi) {
    if (lo == hi) return QPoly::constant(1);
    if ((hi - lo) % 2) return {};
    const auto key = std::make_pair(lo, hi);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    QPoly total;
    for (std::size_t q = lo + 1; q < hi; q += 2) {
      if (w_[q].index != w_[lo].index) continue;
      const KernelValue kv = kernel_.value(w_[lo].family, w_[q].family);
      if (kv.coeff == 0) continue;
      QPoly inner = run(lo + 1, q);
      if (inner.is_zero()) continue;
      QPoly outer = run(q + 1, hi);
      if (outer.is_zero()) continue;
      total += kv.as_qpoly() * inner * outer;
    }
    memo_.emplace(key, total);
    return total;
  }

 private:
  const Word& w_;
  const CovarianceKernel& kernel_;
  std::map<std::pair<std::size_t, std::size_t>, QPoly> memo_;
};

}  // namespace detail

/// tau of a word in jointly semicircular letters: sum over non-crossing pairings of
/// equal-index letters of the product of kernel values.
inline QPoly semicircular_moment(const Word& w, const CovarianceKernel& kernel) {
  for (const auto& l : w.letters)
    if (l.is_cayley()) throw Error(ErrorKind::mixed_kind, "semicircular moments need selfadjoint letters");
  detail::NonCrossingSum sum(w, kernel);
  return sum.run(0, w.size());
}

/// tau of a polynomial, summed term-wise; coefficients may be complex.
inline std::pair<QPoly, QPoly> semicircular_moment(const NcPoly& p, const CovarianceKernel& kernel) {
  QPoly re, im;
  for (const auto& [w, c] : p) {
    const QPoly m = semicircular_moment(w, kernel);
    if (c.re != 0) re += QPoly::constant(c.re) * m;
    if (c.im != 0) im += QPoly::constant(c.im) * m;
  }
  return {re, im};
}

inline Integer catalan(unsigned k) {
  Integer c = 1;
  for (unsigned j = 0; j < k; ++j) c = c * 2 * (2 * j + 1) / (j + 2);
  return c;
}

// ---------------------------------------------------------------------------
// Marginals and the freeness recursion

/// Moments tau(a^k) of one element, for the exponents that are known.
template <typename T>
class MomentSequence {
 public:
  MomentSequence() = default;
  explicit MomentSequence(std::map<int, T> values) : values_(std::move(values)) {}

  const T& at(int k) const {
    auto it = values_.find(k);
    if (it == values_.end())
      throw Error(ErrorKind::insufficient_depth, "moment of order " + std::to_string(k) + " not available");
    return it->second;
  }
  void set(int k, T v) { values_[k] = std::move(v); }
  const std::map<int, T>& values() const { return values_; }

 private:
  std::map<int, T> values_;
};

/// Standard semicircle moments up to `depth`.
template <typename T = Rational>
MomentSequence<T> semicircle_moments(int depth) {
  MomentSequence<T> m;
  for (int k = 0; k <= depth; ++k) {
    if (k % 2) {
      m.set(k, T(0));
    } else if constexpr (std::is_same_v<T, Rational>) {
      m.set(k, Rational(catalan(static_cast<unsigned>(k / 2))));
    } else {
      m.set(k, T(static_cast<double>(catalan(static_cast<unsigned>(k / 2)))));
    }
  }
  return m;
}

/// a^power of the element with id `element`.
struct FreeLetter {
  int element = 0;
  int power = 1;
  friend auto operator<=>(const FreeLetter&, const FreeLetter&) = default;
};

using FreeWord = std::vector<FreeLetter>;

/// Mixed moments of free elements with given marginals. Elements are free from each
/// other; adjacent letters of one element merge. Not thread-safe (memo).
template <typename T>
class FreeMomentEvaluator {
 public:
  explicit FreeMomentEvaluator(std::vector<MomentSequence<T>> marginals) : marginals_(std::move(marginals)) {}

  T moment(const FreeWord& w) {
    FreeWord r = reduce(w);
    if (r.empty()) return T(1);
    if (r.size() == 1) return marginal(r[0]);
    if (auto it = memo_.find(r); it != memo_.end()) return it->second;

    // tau(a1^o ... an^o) = 0 with a^o = a - tau(a); solve for the full product.
    const std::size_t n = r.size();
    std::vector<T> centre(n);
    std::vector<std::size_t> free_pos;  // positions with non-zero mean may be dropped
    std::size_t forced = 0;
    for (std::size_t j = 0; j < n; ++j) {
      centre[j] = marginal(r[j]);
      if (centre[j] == T(0)) {
        forced |= std::size_t(1) << j;
      } else {
        free_pos.push_back(j);
      }
    }
    T total(0);
    const std::size_t combos = std::size_t(1) << free_pos.size();
    const std::size_t full = (std::size_t(1) << n) - 1;
    for (std::size_t mask = 0; mask < combos; ++mask) {
      std::size_t s = forced;
      T weight(1);
      for (std::size_t b = 0; b < free_pos.size(); ++b) {
        if (mask & (std::size_t(1) << b)) {
          s |= std::size_t(1) << free_pos[b];
        } else {
          weight = weight * (T(0) - centre[free_pos[b]]);
        }
      }
      if (s == full) continue;
      FreeWord sub;
      for (std::size_t j = 0; j < n; ++j)
        if (s & (std::size_t(1) << j)) sub.push_back(r[j]);
      total = total + weight * moment(sub);
    }
    T value = T(0) - total;
    memo_.emplace(std::move(r), value);
    return value;
  }

  std::size_t element_count() const { return marginals_.size(); }

 private:
  const T& marginal(const FreeLetter& l) const {
    if (l.element < 0 || static_cast<std::size_t>(l.element) >= marginals_.size())
      throw Error(ErrorKind::invalid_argument, "unknown free element " + std::to_string(l.element));
    return marginals_[static_cast<std::size_t>(l.element)].at(l.power);
  }

  // Merge adjacent equal elements (cyclically) and pick the least rotation.
  static FreeWord reduce(const FreeWord& w) {
    FreeWord r;
    for (const auto& l : w) {
      if (l.power == 0) continue;
      if (!r.empty() && r.back().element == l.element) {
        r.back().power += l.power;
        if (r.back().power == 0) r.pop_back();
      } else {
        r.push_back(l);
      }
    }
    while (r.size() > 1 && r.front().element == r.back().element) {
      r.front().power += r.back().power;
      r.pop_back();
      if (r.front().power == 0) {
        r.erase(r.begin());
        return reduce(r);
      }
    }
    FreeWord best = r;
    for (std::size_t k = 1; k < r.size(); ++k) {
      FreeWord rot(r.begin() + static_cast<std::ptrdiff_t>(k), r.end());
      rot.insert(rot.end(), r.begin(), r.begin() + static_cast<std::ptrdiff_t>(k));
      if (rot < best) best = std::move(rot);
    }
    return best;
  }

  std::vector<MomentSequence<T>> marginals_;
  std::map<FreeWord, T> memo_;
};

/// Translates a word in one letter kind to a FreeWord; each (family, index) is its
/// own free element, numbered through `ids` in order of first appearance.
inline FreeWord to_free_word(const Word& w, std::map<std::pair<Family, int>, int>& ids) {
  FreeWord out;
  const auto kind = detail::kind_of(w);
  if (kind == detail::PolyKind::mixed) throw Error(ErrorKind::mixed_kind, "word mixes letter kinds");
  for (const auto& l : w.letters) {
    auto [it, fresh] = ids.emplace(std::make_pair(l.family, l.index), static_cast<int>(ids.size()));
    out.push_back({it->second, l.exponent});
  }
  return out;
}

/// One-shot convenience over FreeMomentEvaluator.
template <typename T>
T free_word_moment(const FreeWord& w, const std::vector<MomentSequence<T>>& marginals) {
  FreeMomentEvaluator<T> ev(marginals);
  return ev.moment(w);
}

// ---------------------------------------------------------------------------
// Quadrature against the semicircle law

struct QuadratureOptions {
  int initial_nodes = 256;
  double tolerance = 1e-12;
  int max_nodes = 1 << 20;
};

/// Gauss-Chebyshev (second kind) rule for mu_sc with n nodes: x = 2cos(j pi/(n+1)).
template <typename F>
auto semicircle_rule(F&& f, int n) {
  using R = decltype(f(0.0));
  R s{};
  const double h = M_PI / (n + 1);
  for (int j = 1; j <= n; ++j) {
    const double th = j * h;
    const double sn = std::sin(th);
    s += f(2 * std::cos(th)) * (2.0 / (n + 1) * sn * sn);
  }
  return s;
}

/// Integral of f against mu_sc, doubling the node count (n -> 2n+1, nested) until two
/// successive rules agree to the tolerance.
template <typename F>
auto semicircle_integral(F&& f, const QuadratureOptions& opt = {}) {
  int n = opt.initial_nodes;
  auto prev = semicircle_rule(f, n);
  while (2 * n + 1 <= opt.max_nodes) {
    n = 2 * n + 1;
    auto cur = semicircle_rule(f, n);
    if (std::abs(cur - prev) <= opt.tolerance) return cur;
    prev = cur;
  }
  throw Error(ErrorKind::quadrature, "semicircle quadrature did not reach tolerance");
}

/// Cayley transform Psi(x) = (x + i)/(x - i).
inline Complex cayley(double x) { return (Complex(x, 1.0)) / Complex(x, -1.0); }

/// tau(Psi(s)^k) for a standard semicircular s.
inline Complex cayley_marginal_moment(int k, double tolerance = 1e-12) {
  if (k == 0) return 1.0;
  QuadratureOptions opt;
  opt.tolerance = tolerance;
  return semicircle_integral([k](double x) { return std::pow(cayley(x), k); }, opt);
}

/// Moments of Psi(s)^k for |k| <= kmax.
inline MomentSequence<Complex> cayley_moments(int kmax, double tolerance = 1e-12) {
  MomentSequence<Complex> m;
  for (int k = -kmax; k <= kmax; ++k) m.set(k, cayley_marginal_moment(k, tolerance));
  return m;
}

/// Semicircle moments as a complex sequence (for words that mix in Cayley marginals).
inline MomentSequence<Complex> semicircle_moments_complex(int depth) { return semicircle_moments<Complex>(depth); }

// ---------------------------------------------------------------------------
// Tensor products

/// A letter of a word in A (x) A: leg 0 is a (x) 1, leg 1 is 1 (x) b.
struct TensorLetter {
  int leg = 0;
  FreeLetter letter;
};

/// (tau (x) tau) of a word in {a (x) 1, 1 (x) b}: the legs commute, so the value
/// is the product of the two one-leg moments.
template <typename T>
T tensor_word_moment(const std::vector<TensorLetter>& w, FreeMomentEvaluator<T>& left,
                     FreeMomentEvaluator<T>& right) {
  FreeWord l, r;
  for (const auto& t : w) {
    if (t.leg == 0) {
      l.push_back(t.letter);
    } else if (t.leg == 1) {
      r.push_back(t.letter);
    } else {
      throw Error(ErrorKind::invalid_argument, "tensor leg must be 0 or 1");
    }
  }
  return left.moment(l) * right.moment(r);
}

// ---------------------------------------------------------------------------
// Export

/// CSV rows "word,real,imag".
inline void write_moment_csv(std::ostream& os, const std::vector<std::pair<std::string, Complex>>& rows) {
  os << "word,real,imag\n";
  os.precision(17);
  for (const auto& [w, v] : rows) os << '"' << w << "\"," << v.real() << ',' << v.imag() << '\n';
}

}  // namespace nclab
