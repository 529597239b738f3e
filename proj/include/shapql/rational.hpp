#ifndef SHAPQL_RATIONAL_HPP
#define SHAPQL_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <string>

namespace shapql {

// Exact arbitrary-precision rational. Every Shapley value, probability and
// linear-system entry in this project is one of these; nothing numerical is
// ever done in floating point except optional display output.
using Rational = mpq_class;
using Integer = mpz_class;

Integer factorial(unsigned n);
Integer binomial(unsigned n, unsigned k);

// Renders "num/den" in lowest terms ("3" when the denominator is 1).
std::string to_string(const Rational& q);

// Accepts "p/q" or "p". Returns nothing on malformed input or zero denominator.
std::optional<Rational> parse_rational(const std::string& text);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

double to_double(const Rational& q);

}  // namespace shapql

#endif
