#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace stageflow {

// Exact rational arithmetic backs every flow value; costs stay integral.
using Rational = mpq_class;

// Accepts "num/den" or a bare integer "num". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

// Always "num/den" (den = 1 for integers), canonical form.
std::string format_rational(const Rational& value);

// Exact finite decimal expansion; throws std::domain_error when the
// denominator has a prime factor other than 2 or 5.
std::string format_decimal(const Rational& value);

inline Rational abs_value(const Rational& value) { return value < 0 ? Rational(-value) : value; }

}  // namespace stageflow
