#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace causalbounds {

/// Exact rational number backed by GMP; always canonical (positive
/// denominator, lowest terms) after every arithmetic operation.
using Rational = mpq_class;
using BigInt = mpz_class;

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

/// "n" for integers, "n/d" otherwise.
std::string to_string(const Rational& r);

/// Parses "n", "-n", "n/d" (decimal integers only). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);

/// Rank of a rational matrix via fraction-free-safe Gaussian elimination.
std::size_t rank(RationalMatrix m);

/// Indices of a maximal linearly independent subset of rows, chosen greedily
/// in the given order.
std::vector<std::size_t> independent_rows(const RationalMatrix& m);

}  // namespace causalbounds
