#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace entropic {

/// Arbitrary-precision integer and rational carriers. All polyhedral
/// computations run on these; nothing in the cone pipeline ever rounds.
using Integer = mpz_class;
using Rational = mpq_class;

/// Builds num/den in lowest terms with a positive denominator.
/// Throws std::invalid_argument when den == 0.
Rational make_rational(const Integer& num, const Integer& den);

/// Parses "3/4", "-2", "0.125", "1e-3", "2.5E+2" exactly.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

/// Nearest multiple of 2^-bits. Used to turn floating-point probabilities
/// into short rationals before exact LPs, so pivots stay cheap.
Rational round_to_dyadic(double x, unsigned bits = 40);

}  // namespace entropic
