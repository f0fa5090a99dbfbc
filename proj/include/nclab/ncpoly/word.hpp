#pragma once

#include <compare>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "nclab/error.hpp"

namespace nclab {

/// Symbolic family tag of a generator. The base family is "0"; the interpolated
/// families carry set labels such as "{2,1}".
class Family {
 public:
  Family() : label_("0") {}
  explicit Family(std::string label) : label_(std::move(label)) {
    if (label_.empty()) throw Error(ErrorKind::invalid_argument, "empty family label");
    for (char ch : label_) {
      if (ch == '[' || ch == ']' || ch == '*' || ch == ' ' || ch == '\t' || ch == '\n')
        throw Error(ErrorKind::invalid_argument, "reserved character in family label '" + label_ + "'");
    }
  }

  static Family base() { return Family(); }

  const std::string& label() const { return label_; }
  bool is_base() const { return label_ == "0"; }

  friend auto operator<=>(const Family&, const Family&) = default;
  friend bool operator==(const Family&, const Family&) = default;

 private:
  std::string label_;
};

enum class LetterKind : int { selfadjoint = 0, cayley = 1 };

/// A generator: a selfadjoint x or a Cayley letter u^{+-1} = Psi(x)^{+-1}.
struct Letter {
  Family family;
  int index = 1;
  LetterKind kind = LetterKind::selfadjoint;
  int exponent = 1;

  static Letter x(int i, Family f = Family::base()) { return {std::move(f), i, LetterKind::selfadjoint, 1}; }
  static Letter u(int i, int eps = 1, Family f = Family::base()) {
    if (eps != 1 && eps != -1) throw Error(ErrorKind::invalid_argument, "Cayley exponent must be +-1");
    return {std::move(f), i, LetterKind::cayley, eps};
  }

  bool is_cayley() const { return kind == LetterKind::cayley; }

  /// Adjoint letter: x* = x, u* = u^{-1}.
  Letter adjoint() const {
    Letter l = *this;
    if (is_cayley()) l.exponent = -exponent;
    return l;
  }

  Letter with_family(Family f) const {
    Letter l = *this;
    l.family = std::move(f);
    return l;
  }

  bool inverse_of(const Letter& o) const {
    return is_cayley() && o.is_cayley() && family == o.family && index == o.index &&
           exponent == -o.exponent;
  }

  friend auto operator<=>(const Letter& a, const Letter& b) {
    if (auto c = a.family <=> b.family; c != 0) return c;
    if (auto c = a.index <=> b.index; c != 0) return c;
    if (auto c = static_cast<int>(a.kind) <=> static_cast<int>(b.kind); c != 0) return c;
    return a.exponent <=> b.exponent;
  }
  friend bool operator==(const Letter&, const Letter&) = default;
};

/// Finite sequence of letters; the empty word is the unit. Equality is literal:
/// u u^{-1} stays as written until `normalize` is applied.
struct Word {
  std::vector<Letter> letters;

  Word() = default;
  Word(std::initializer_list<Letter> l) : letters(l) {}
  explicit Word(std::vector<Letter> l) : letters(std::move(l)) {}

  static Word unit() { return {}; }

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  const Letter& operator[](std::size_t k) const { return letters[k]; }

  Word slice(std::size_t begin, std::size_t end) const {
    return Word(std::vector<Letter>(letters.begin() + static_cast<std::ptrdiff_t>(begin),
                                    letters.begin() + static_cast<std::ptrdiff_t>(end)));
  }

  Word reversed() const { return Word(std::vector<Letter>(letters.rbegin(), letters.rend())); }

  friend Word operator*(const Word& a, const Word& b) {
    std::vector<Letter> l;
    l.reserve(a.size() + b.size());
    l.insert(l.end(), a.letters.begin(), a.letters.end());
    l.insert(l.end(), b.letters.begin(), b.letters.end());
    return Word(std::move(l));
  }

  /// Canonical order: degree first, then lexicographic.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (auto c = a.letters[k] <=> b.letters[k]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }
  friend bool operator==(const Word&, const Word&) = default;
};

/// x_{i_1} ... x_{i_n} over the base family.
inline Word base_word(std::initializer_list<int> indices) {
  Word w;
  for (int i : indices) w.letters.push_back(Letter::x(i));
  return w;
}

inline Word base_word(const std::vector<int>& indices) {
  Word w;
  for (int i : indices) w.letters.push_back(Letter::x(i));
  return w;
}

inline Word power_word(const Letter& l, std::size_t n) {
  return Word(std::vector<Letter>(n, l));
}

/// Cancels adjacent u u^{-1} pairs until none remain (free-group reduction).
inline Word normalize(const Word& w) {
  std::vector<Letter> stack;
  stack.reserve(w.size());
  for (const auto& l : w.letters) {
    if (!stack.empty() && stack.back().inverse_of(l)) {
      stack.pop_back();
    } else {
      stack.push_back(l);
    }
  }
  return Word(std::move(stack));
}

inline int max_index(const Word& w) {
  int r = 0;
  for (const auto& l : w.letters) r = std::max(r, l.index);
  return r;
}

}  // namespace nclab
