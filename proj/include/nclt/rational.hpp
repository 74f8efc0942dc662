#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace nclt {

// Exact arbitrary-precision rational. Every algebraic code path in this
// library computes with this type; floating point appears only in the
// matrix oracle and in report rendering.
using Rational = mpq_class;

// "p" for integers, "p/q" otherwise (canonical form, q > 0).
std::string rational_to_string(const Rational& q);

// Accepts the same forms rational_to_string emits.
Rational parse_rational(std::string_view text);

double rational_to_double(const Rational& q);

Rational binomial(unsigned n, unsigned k);
Rational factorial(unsigned n);
Rational catalan(unsigned n);

// q^e for e >= 0.
Rational rational_pow(const Rational& q, unsigned e);

// mpq_class's (num, den) constructor stores the fraction as given; GMP
// comparisons assume canonical form. Route every externally supplied
// rational through this.
inline Rational canonical(Rational q) {
  q.canonicalize();
  return q;
}

}  // namespace nclt
