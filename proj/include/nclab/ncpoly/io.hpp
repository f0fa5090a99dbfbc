#pragma once

#include <istream>
#include <sstream>
#include <string>

#include "nclab/ncpoly/poly.hpp"

namespace nclab {

// Canonical text form, one term per line:
//
//   <re>/<den>+<im>/<den>*i <word>
//
// with terms in (degree, lexicographic word) order, the unit word written "1",
// letters joined by '*' and spelled x[fam,i] or u[fam,i]^+1 / u[fam,i]^-1.
// The zero polynomial is the single line "0".

inline std::string to_string(const Letter& l) {
  std::string s = (l.is_cayley() ? "u[" : "x[") + l.family.label() + "," + std::to_string(l.index) + "]";
  if (l.is_cayley()) s += l.exponent > 0 ? "^+1" : "^-1";
  return s;
}

inline std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) s += '*';
    s += to_string(w[k]);
  }
  return s;
}

inline std::string to_string(const NcPoly& p) {
  if (p.is_zero()) return "0\n";
  std::string s;
  for (const auto& [w, c] : p) s += to_string(c) + " " + to_string(w) + "\n";
  return s;
}

/// Slots separated by " (x) "; debugging form only.
inline std::string to_string(const TensorPoly& t) {
  if (t.is_zero()) return "0\n";
  std::string s;
  for (const auto& [key, c] : t) {
    s += to_string(c) + " ";
    for (std::size_t k = 0; k < key.size(); ++k) s += (k ? " (x) " : "") + to_string(key[k]);
    s += "\n";
  }
  return s;
}

inline Letter parse_letter(const std::string& s) {
  if (s.size() < 5 || (s[0] != 'x' && s[0] != 'u') || s[1] != '[')
    throw Error(ErrorKind::parse, "bad letter '" + s + "'");
  const auto close = s.find(']');
  if (close == std::string::npos) throw Error(ErrorKind::parse, "unterminated letter '" + s + "'");
  const std::string inner = s.substr(2, close - 2);
  const auto comma = inner.rfind(',');
  if (comma == std::string::npos) throw Error(ErrorKind::parse, "letter without index '" + s + "'");
  Family fam(inner.substr(0, comma));
  int index = 0;
  try {
    index = std::stoi(inner.substr(comma + 1));
  } catch (const std::exception&) {
    throw Error(ErrorKind::parse, "bad letter index in '" + s + "'");
  }
  const std::string tail = s.substr(close + 1);
  if (s[0] == 'x') {
    if (!tail.empty()) throw Error(ErrorKind::parse, "selfadjoint letter with exponent '" + s + "'");
    return Letter::x(index, fam);
  }
  if (tail == "^+1") return Letter::u(index, 1, fam);
  if (tail == "^-1") return Letter::u(index, -1, fam);
  throw Error(ErrorKind::parse, "Cayley letter needs ^+1 or ^-1: '" + s + "'");
}

inline Word parse_word(const std::string& s) {
  if (s == "1") return Word::unit();
  Word w;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto star = s.find('*', start);
    if (star == std::string::npos) star = s.size();
    w.letters.push_back(parse_letter(s.substr(start, star - start)));
    start = star + 1;
  }
  return w;
}

inline NcPoly parse_ncpoly(std::istream& in) {
  NcPoly p;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "0") continue;
    const auto space = line.find(' ');
    if (space == std::string::npos) throw Error(ErrorKind::parse, "term without word: '" + line + "'");
    p.add(parse_word(line.substr(space + 1)), parse_crational(line.substr(0, space)));
  }
  return p;
}

inline NcPoly parse_ncpoly(const std::string& text) {
  std::istringstream in(text);
  return parse_ncpoly(in);
}

}  // namespace nclab
