#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace toricstab {

using Rational = boost::multiprecision::mpq_rational;
using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;  // row-major
using IntVector = std::vector<std::int64_t>;

/// Parses "p", "-p" or "p/q" (q > 0 after normalization). Throws ParseError.
Rational parse_rational(const std::string& text);

/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string format_rational(const Rational& value);

inline double to_double(const Rational& value) { return value.convert_to<double>(); }

/// Exact conversion; every finite double is a dyadic rational.
Rational from_double(double value);

RationalVector to_rational(const IntVector& v);
std::vector<double> to_double(const RationalVector& v);

Rational dot(const RationalVector& a, const RationalVector& b);
Rational dot(const IntVector& a, const RationalVector& b);

/// Rank by Gaussian elimination over the rationals.
int rank(RationalMatrix rows);

/// Determinant of a square matrix, exact.
Rational determinant(RationalMatrix m);

/// Unique solution of A x = b, or nullopt when A is singular.
std::optional<RationalVector> solve(RationalMatrix a, RationalVector b);

/// Rational square root when the argument is a perfect square of a rational.
std::optional<Rational> exact_sqrt(const Rational& value);

std::int64_t gcd_of(const IntVector& v);

}  // namespace toricstab
