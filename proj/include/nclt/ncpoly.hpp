#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nclt/rational.hpp"

namespace nclt {

// Indeterminate identifier. Equality is by name; a name must not contain
// whitespace or any of '.', '*', '+'.
using Symbol = std::string;

// A word in non-commuting indeterminates. The empty word is the unit;
// multiplication is concatenation.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<Symbol> letters) : letters_(std::move(letters)) {}

  static Monomial unit() { return Monomial(); }
  static Monomial power(const Symbol& x, unsigned p);

  std::size_t degree() const { return letters_.size(); }
  const std::vector<Symbol>& letters() const { return letters_; }
  unsigned count(const Symbol& x) const;

  Monomial operator*(const Monomial& rhs) const;

  bool operator==(const Monomial& rhs) const = default;
  // Graded lexicographic order; used for term maps and stable printing.
  bool operator<(const Monomial& rhs) const;

  // "Z.X.X"; the unit prints as "1".
  std::string str() const;

 private:
  std::vector<Symbol> letters_;
};

// Finite rational linear combination of monomials. Value type with exact
// arithmetic; the term map never stores zero coefficients, so equality of
// polynomials is structural equality of the maps.
class NCPolynomial {
 public:
  NCPolynomial() = default;  // zero
  NCPolynomial(const Rational& constant);
  NCPolynomial(int constant) : NCPolynomial(Rational(constant)) {}

  static NCPolynomial variable(const Symbol& x);
  static NCPolynomial term(const Monomial& m, const Rational& coefficient);

  bool is_zero() const { return terms_.empty(); }
  std::size_t degree() const;  // 0 for the zero polynomial
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  Rational coefficient(const Monomial& m) const;
  std::set<Symbol> variables() const;

  NCPolynomial operator+(const NCPolynomial& rhs) const;
  NCPolynomial operator-(const NCPolynomial& rhs) const;
  NCPolynomial operator-() const;
  NCPolynomial operator*(const NCPolynomial& rhs) const;
  NCPolynomial operator*(const Rational& c) const;
  NCPolynomial operator/(const Rational& c) const;
  NCPolynomial pow(unsigned e) const;

  bool operator==(const NCPolynomial& rhs) const = default;

  // Text form: terms as "coef * sym1.sym2", joined by " + "; the unit
  // monomial is spelled "1". The zero polynomial prints as "0".
  std::string str() const;
  static NCPolynomial parse(std::string_view text);

 private:
  void add_term(const Monomial& m, const Rational& c);
  std::map<Monomial, Rational> terms_;
};

NCPolynomial operator*(const Rational& c, const NCPolynomial& f);

// x^m as a polynomial.
NCPolynomial monomial_power(const Symbol& x, unsigned m);

// f(arg) for f a polynomial in at most one indeterminate, fully expanded.
// Throws std::invalid_argument if f mentions more than one indeterminate.
NCPolynomial substitute(const NCPolynomial& f, const NCPolynomial& arg);

// r-th directional derivative of f at Z in direction X:
//   f^(r)_X(Z) = r! * sum over the words obtained from each degree-m
//   monomial of f by placing X at r of the m positions and Z elsewhere.
// Order 0 returns f(Z). Throws on negative order, Z == X, or
// multi-indeterminate f.
NCPolynomial directional_derivative(const NCPolynomial& f, const Symbol& Z,
                                    const Symbol& X, int order);

// [f(Z), f'_X(Z)/1!, ..., f^(deg f)_X(Z)/(deg f)!]. Their sum equals
// substitute(f, Z+X) exactly.
std::vector<NCPolynomial> taylor_terms(const NCPolynomial& f, const Symbol& Z,
                                       const Symbol& X);

// substitute(f, Z+X) minus the expansion terms of order <= 2. Every
// monomial of the result carries at least three X letters.
NCPolynomial third_tail(const NCPolynomial& f, const Symbol& Z, const Symbol& X);

}  // namespace nclt
