#pragma once

#include <complex>
#include <ostream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "nclab/error.hpp"

namespace nclab {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long long num, long long den = 1) {
  if (den == 0) throw Error(ErrorKind::invalid_argument, "zero denominator");
  return Rational(Integer(num), Integer(den));
}

/// "p/q" with an explicit denominator, the form used by every text output.
inline std::string to_fraction_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Parses "p/q" or "p".
inline Rational parse_rational(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(Integer(s));
    Integer num(s.substr(0, slash));
    Integer den(s.substr(slash + 1));
    if (den == 0) throw Error(ErrorKind::parse, "zero denominator in '" + s + "'");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw Error(ErrorKind::parse, "bad rational '" + s + "'");
  }
}

/// Exact complex rational re + im*i.
struct CRational {
  Rational re{0};
  Rational im{0};

  CRational() = default;
  CRational(Rational r) : re(std::move(r)) {}  // NOLINT: implicit by design of the algebra
  CRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  CRational(int v) : re(v) {}  // NOLINT

  static CRational i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  CRational conj() const { return {re, -im}; }
  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

  CRational& operator+=(const CRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  CRational& operator-=(const CRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  CRational& operator*=(const CRational& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  friend CRational operator+(CRational a, const CRational& b) { return a += b; }
  friend CRational operator-(CRational a, const CRational& b) { return a -= b; }
  friend CRational operator*(CRational a, const CRational& b) { return a *= b; }
  friend CRational operator-(const CRational& a) { return {-a.re, -a.im}; }
  friend bool operator==(const CRational& a, const CRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const CRational& a, const CRational& b) { return !(a == b); }
};

/// "a/b+c/d*i" (or "a/b-c/d*i" for a negative imaginary part).
inline std::string to_string(const CRational& c) {
  std::string s = to_fraction_string(c.re);
  if (c.im < 0) {
    s += "-" + to_fraction_string(-c.im);
  } else {
    s += "+" + to_fraction_string(c.im);
  }
  return s + "*i";
}

inline CRational parse_crational(const std::string& s) {
  if (s.size() < 3 || s.substr(s.size() - 2) != "*i")
    throw Error(ErrorKind::parse, "complex rational must end in '*i': '" + s + "'");
  std::string body = s.substr(0, s.size() - 2);
  // The separator is the first sign after the real part's leading sign.
  std::size_t pos = std::string::npos;
  for (std::size_t k = 1; k < body.size(); ++k) {
    if (body[k] == '+' || body[k] == '-') {
      pos = k;
      break;
    }
  }
  if (pos == std::string::npos) throw Error(ErrorKind::parse, "missing imaginary part: '" + s + "'");
  Rational re = parse_rational(body.substr(0, pos));
  Rational im = parse_rational(body.substr(pos + 1));
  if (body[pos] == '-') im = -im;
  return {re, im};
}

inline std::ostream& operator<<(std::ostream& os, const CRational& c) { return os << to_string(c); }

}  // namespace nclab
