#include "nclt/ncpoly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace nclt {

std::string rational_to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  mpq_class q;
  if (q.set_str(std::string(text), 10) != 0)
    throw std::invalid_argument("bad rational literal: " + std::string(text));
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
  q.canonicalize();
  return q;
}

double rational_to_double(const Rational& q) { return q.get_d(); }

Rational binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return Rational(b);
}

Rational factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(f);
}

Rational catalan(unsigned n) { return binomial(2 * n, n) / Rational(n + 1); }

Rational rational_pow(const Rational& q, unsigned e) {
  Rational r = 1;
  for (unsigned i = 0; i < e; ++i) r *= q;
  return r;
}

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::power(const Symbol& x, unsigned p) {
  return Monomial(std::vector<Symbol>(p, x));
}

unsigned Monomial::count(const Symbol& x) const {
  return static_cast<unsigned>(std::count(letters_.begin(), letters_.end(), x));
}

Monomial Monomial::operator*(const Monomial& rhs) const {
  std::vector<Symbol> out = letters_;
  out.insert(out.end(), rhs.letters_.begin(), rhs.letters_.end());
  return Monomial(std::move(out));
}

bool Monomial::operator<(const Monomial& rhs) const {
  if (letters_.size() != rhs.letters_.size())
    return letters_.size() < rhs.letters_.size();
  return letters_ < rhs.letters_;
}

std::string Monomial::str() const {
  if (letters_.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) out += '.';
    out += letters_[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// NCPolynomial

NCPolynomial::NCPolynomial(const Rational& constant) {
  add_term(Monomial::unit(), canonical(constant));
}

NCPolynomial NCPolynomial::variable(const Symbol& x) {
  return term(Monomial::power(x, 1), 1);
}

NCPolynomial NCPolynomial::term(const Monomial& m, const Rational& coefficient) {
  NCPolynomial f;
  f.add_term(m, canonical(coefficient));
  return f;
}

void NCPolynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

std::size_t NCPolynomial::degree() const {
  if (terms_.empty()) return 0;
  // graded order: the last key has maximal degree
  return terms_.rbegin()->first.degree();
}

Rational NCPolynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::set<Symbol> NCPolynomial::variables() const {
  std::set<Symbol> out;
  for (const auto& [m, c] : terms_)
    for (const auto& x : m.letters()) out.insert(x);
  return out;
}

NCPolynomial NCPolynomial::operator+(const NCPolynomial& rhs) const {
  NCPolynomial out = *this;
  for (const auto& [m, c] : rhs.terms_) out.add_term(m, c);
  return out;
}

NCPolynomial NCPolynomial::operator-(const NCPolynomial& rhs) const {
  NCPolynomial out = *this;
  for (const auto& [m, c] : rhs.terms_) out.add_term(m, -c);
  return out;
}

NCPolynomial NCPolynomial::operator-() const {
  NCPolynomial out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

NCPolynomial NCPolynomial::operator*(const NCPolynomial& rhs) const {
  NCPolynomial out;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : rhs.terms_) out.add_term(ma * mb, ca * cb);
  return out;
}

NCPolynomial NCPolynomial::operator*(const Rational& c) const {
  NCPolynomial out;
  const Rational cc = canonical(c);
  if (cc == 0) return out;
  for (const auto& [m, k] : terms_) out.terms_.emplace(m, k * cc);
  return out;
}

NCPolynomial NCPolynomial::operator/(const Rational& c) const {
  if (c == 0) throw std::invalid_argument("division by zero");
  return *this * (Rational(1) / c);
}

NCPolynomial NCPolynomial::pow(unsigned e) const {
  NCPolynomial out(Rational(1));
  for (unsigned i = 0; i < e; ++i) out = out * *this;
  return out;
}

NCPolynomial operator*(const Rational& c, const NCPolynomial& f) { return f * c; }

NCPolynomial monomial_power(const Symbol& x, unsigned m) {
  return NCPolynomial::term(Monomial::power(x, m), 1);
}

std::string NCPolynomial::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) out += " + ";
    first = false;
    out += c.get_str();
    out += " * ";
    out += m.str();
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Monomial parse_word(std::string_view text) {
  if (text == "1") return Monomial::unit();
  std::vector<Symbol> letters;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t dot = text.find('.', start);
    std::string_view part =
        trim(text.substr(start, dot == std::string_view::npos ? dot : dot - start));
    if (part.empty()) throw std::invalid_argument("empty symbol in word");
    letters.emplace_back(part);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return Monomial(std::move(letters));
}

}  // namespace

NCPolynomial NCPolynomial::parse(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty polynomial text");
  if (text == "0") return NCPolynomial();
  NCPolynomial out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t plus = text.find('+', start);
    std::string_view piece =
        trim(text.substr(start, plus == std::string_view::npos ? plus : plus - start));
    std::size_t star = piece.find('*');
    if (star == std::string_view::npos)
      throw std::invalid_argument("term missing '*': " + std::string(piece));
    Rational c = parse_rational(trim(piece.substr(0, star)));
    Monomial m = parse_word(trim(piece.substr(star + 1)));
    out.add_term(m, c);
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Calculus

namespace {

const Symbol& single_indeterminate(const NCPolynomial& f) {
  static const Symbol kNone = "";
  auto vars = f.variables();
  if (vars.size() > 1)
    throw std::invalid_argument("polynomial must have at most one indeterminate");
  return vars.empty() ? kNone : *vars.begin();
}

}  // namespace

NCPolynomial substitute(const NCPolynomial& f, const NCPolynomial& arg) {
  single_indeterminate(f);  // validates
  std::vector<NCPolynomial> powers{NCPolynomial(Rational(1))};
  powers.reserve(f.degree() + 1);
  for (std::size_t d = 1; d <= f.degree(); ++d) powers.push_back(powers.back() * arg);
  NCPolynomial out;
  for (const auto& [m, c] : f.terms()) out = out + powers[m.degree()] * c;
  return out;
}

NCPolynomial directional_derivative(const NCPolynomial& f, const Symbol& Z,
                                    const Symbol& X, int order) {
  if (order < 0) throw std::invalid_argument("derivative order must be >= 0");
  if (Z == X) throw std::invalid_argument("base and direction must differ");
  single_indeterminate(f);
  const unsigned r = static_cast<unsigned>(order);
  const Rational scale = factorial(r);

  NCPolynomial out;
  for (const auto& [m, c] : f.terms()) {
    const unsigned d = static_cast<unsigned>(m.degree());
    if (r > d) continue;
    // choose r of the d positions to carry X
    std::vector<unsigned> pos(r);
    for (unsigned i = 0; i < r; ++i) pos[i] = i;
    while (true) {
      std::vector<Symbol> letters(d, Z);
      for (unsigned p : pos) letters[p] = X;
      out = out + NCPolynomial::term(Monomial(std::move(letters)), c * scale);
      // next combination
      unsigned i = r;
      while (i > 0 && pos[i - 1] == d - r + i - 1) --i;
      if (i == 0) break;
      ++pos[i - 1];
      for (unsigned j = i; j < r; ++j) pos[j] = pos[j - 1] + 1;
    }
  }
  return out;
}

std::vector<NCPolynomial> taylor_terms(const NCPolynomial& f, const Symbol& Z,
                                       const Symbol& X) {
  std::vector<NCPolynomial> out;
  const std::size_t d = f.degree();
  out.reserve(d + 1);
  for (std::size_t r = 0; r <= d; ++r)
    out.push_back(directional_derivative(f, Z, X, static_cast<int>(r)) /
                  factorial(static_cast<unsigned>(r)));
  return out;
}

NCPolynomial third_tail(const NCPolynomial& f, const Symbol& Z, const Symbol& X) {
  NCPolynomial tail = substitute(f, NCPolynomial::variable(Z) + NCPolynomial::variable(X));
  const std::size_t top = std::min<std::size_t>(2, f.degree());
  for (std::size_t r = 0; r <= top; ++r)
    tail = tail - directional_derivative(f, Z, X, static_cast<int>(r)) /
                      factorial(static_cast<unsigned>(r));
  return tail;
}

}  // namespace nclt
