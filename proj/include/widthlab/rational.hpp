#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace widthlab {

using Rational = mpq_class;

/// Parses "3/10", "0.599", "-2", "1e-3" or "2.5E+2" into an exact rational.
Rational rational_from_string(std::string_view text);

/// Exact rational of the shortest decimal that round-trips to `value`,
/// so 0.599 becomes 599/1000 rather than its binary expansion.
Rational rational_from_double(double value);

/// log2 of a positive rational without overflow; -inf for zero.
double log2_of(const Rational& value);

/// 2^-k as an exact rational.
Rational pow2_neg(unsigned k);

inline double to_double(const Rational& value) { return value.get_d(); }

std::string to_string(const Rational& value);

}  // namespace widthlab
