#pragma once

#include <cmath>
#include <mutex>
#include <ostream>

#include "nclab/freemoments.hpp"
#include "nclab/guewick.hpp"

namespace nclab {

/// 1/2 * iint_{0<=t1<=t2} exp(-t2 - t1) q1^k1 q2^k2 with q1 = exp(-t1), q2 = exp(-t2).
inline Rational simplex_integral(int k1, int k2) {
  if (k1 < 0 || k2 < 0) throw Error(ErrorKind::invalid_argument, "simplex_integral needs k1, k2 >= 0");
  return make_rational(1, 2) * make_rational(1, 1 + k1) *
         (make_rational(1, 1 + k2) - make_rational(1, 2 + k1 + k2));
}

/// Memo of simplex_integral values, safe to share between threads.
class SimplexIntegralTable {
 public:
  Rational operator()(int k1, int k2) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, fresh] = memo_.try_emplace({k1, k2});
    if (fresh) it->second = simplex_integral(k1, k2);
    return it->second;
  }
  std::size_t size() const { return memo_.size(); }

  /// Integrates a q-polynomial term by term.
  Rational integrate(const QPoly& p) {
    Rational s = 0;
    for (const auto& [k, c] : p.terms()) s += c * (*this)(k.first, k.second);
    return s;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, Rational> memo_;
};

inline constexpr std::size_t nu1_degree_cap = 16;

/// First-order correction nu1(P) = 1/2 iint e^{-t2-t1} tau(R1(P)(z1, z~1, z~2, z2)), exact.
inline CRational nu1(const NcPoly& p, std::size_t degree_cap = nu1_degree_cap, const Limits& limits = {}) {
  if (p.degree() > degree_cap)
    throw Error(ErrorKind::degree_cap, "nu1 is limited to degree " + std::to_string(degree_cap));
  static SimplexIntegralTable table;
  const auto kernel = CovarianceKernel::interpolation();
  const NcPoly r = r1_build(p, 0, limits);
  CRational out;
  for (const auto& [w, c] : r) {
    const Rational v = table.integrate(semicircular_moment(w, kernel));
    out = out + c * CRational(v);
  }
  return out;
}

/// Coefficients of (Z + i)/(Z - i) = sum_n c_n (iZ)^n.
inline Integer c_coefficient(int n) {
  if (n < 0) throw Error(ErrorKind::invalid_argument, "c_coefficient needs n >= 0");
  const int mag = std::min(n + 1, 2);
  return (n % 2 == 0) ? Integer(-mag) : Integer(mag);
}

/// Checks c_{m1}...c_{mn} = int_{(-inf,0]^n} prod e^{y_j} y_j^{m_j}/m_j! prod (d delta_0 - 2 dy)
/// by expanding the product measure into its 2^n Dirac/Lebesgue pieces.
inline bool lemma_c_check(const std::vector<int>& m) {
  Integer lhs = 1;
  for (int mj : m) lhs *= c_coefficient(mj);

  // int_{-inf}^0 y^k e^y dy = -k * (same with k-1); divided by k! afterwards.
  auto lebesgue = [](int k) {
    Integer moment = 1, fact = 1;
    for (int j = 1; j <= k; ++j) {
      moment *= -j;
      fact *= j;
    }
    return Rational(moment, fact);
  };
  const std::size_t n = m.size();
  if (n >= 8 * sizeof(std::size_t)) throw Error(ErrorKind::invalid_argument, "too many factors");
  Rational rhs = 0;
  for (std::size_t dirac = 0; dirac < (std::size_t(1) << n); ++dirac) {
    Rational term = 1;
    for (std::size_t j = 0; j < n && term != 0; ++j) {
      if (dirac & (std::size_t(1) << j)) {
        term *= m[j] == 0 ? 1 : 0;  // e^0 0^m / m!
      } else {
        term *= -2 * lebesgue(m[j]);
      }
    }
    rhs += term;
  }
  return Rational(lhs) == rhs;
}

/// Genus-one pairing count of x^{2k}: (k+1)k(k-1)/12 * Catalan(k).
inline Integer genus_one_count(unsigned k) {
  if (k < 2) return 0;
  return Integer(k + 1) * k * (k - 1) * catalan(k) / 12;
}

struct SeriesValue {
  Complex value;
  double tail_bound = 0;
};

inline constexpr int nu1_exponential_cut_cap = 16;

/// nu1(exp(i y x)) truncated at degree `cut`: sum_{m<=cut} (iy)^m/m! nu1(x^m), with a
/// bound on the omitted terms from |nu1(x^{2k})| <= genus-one count.
inline SeriesValue nu1_exponential(double y, int cut) {
  if (cut < 0 || cut % 2) throw Error(ErrorKind::invalid_argument, "degree cut must be even and >= 0");
  if (cut > nu1_exponential_cut_cap)
    throw Error(ErrorKind::degree_cap, "degree cut above " + std::to_string(nu1_exponential_cut_cap));
  SeriesValue out;
  double fact = 1;
  Complex iy_pow = 1;
  for (int m = 1; m <= cut; ++m) {
    fact *= m;
    iy_pow *= Complex(0, y);
    if (m % 2) continue;
    const CRational v = nu1(NcPoly::monomial(power_word(Letter::x(1), static_cast<std::size_t>(m))));
    out.value += iy_pow / fact * v.to_complex();
  }
  // Tail terms t_k = y^{2k}/(2k)! * count(k) have ratio t_{k+1}/t_k = y^2/((k-1)(k+1)),
  // decreasing in k: sum explicitly until it drops below 1, then close geometrically.
  const double y2 = y * y;
  unsigned k = static_cast<unsigned>(cut / 2) + 1;
  if (k < 2) k = 2;
  const double log_cat = std::lgamma(2.0 * k + 1) - std::lgamma(k + 2.0) - std::lgamma(k + 1.0);
  double term = y2 == 0 ? 0.0
                        : std::exp(k * std::log(y2) - std::lgamma(2.0 * k + 1) + log_cat +
                                   std::log((k + 1.0) * k * (k - 1.0) / 12));
  for (;; ++k) {
    const double ratio = y2 / ((k - 1.0) * (k + 1.0));
    if (ratio < 1) {
      out.tail_bound += term / (1 - ratio);
      break;
    }
    out.tail_bound += term;
    term *= ratio;
  }
  return out;
}

/// CSV rows (word, nu1 as fraction, Wick order-1 value, equal).
inline void write_nu1_csv(std::ostream& os, const std::vector<Word>& words) {
  os << "word,nu1,wick,equal\n";
  for (const auto& w : words) {
    const CRational v = nu1(NcPoly::monomial(w));
    const Rational wick = gue_word_expectation(w).coefficient(1);
    os << '"' << to_string(w) << "\"," << to_fraction_string(v.re) << ',' << to_fraction_string(wick) << ','
       << (v.is_real() && v.re == wick ? "true" : "false") << '\n';
  }
}

}  // namespace nclab
