#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace toricdeg {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;
using IntVector = std::vector<std::int64_t>;

/// Parses "p", "p/q" or a finite decimal such as "-0.25" into an exact
/// rational. Throws NonRationalInput on anything else.
Rational parse_rational(std::string_view text);

/// "p" for integers, "p/q" otherwise, always in lowest terms.
std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

std::vector<double> to_double(std::span<const Rational> v);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);
Rational dot(std::span<const std::int64_t> a, std::span<const Rational> b);

/// Determinant of a square matrix given by rows, via fraction-exact
/// Gaussian elimination.
Rational determinant(std::vector<RationalVector> rows);

/// Rank of the matrix given by rows.
int rank(std::vector<RationalVector> rows);

/// Smallest integer vector positively proportional to v. v must be nonzero.
IntVector primitive_integer(std::span<const Rational> v);

bool is_integer(const Rational& q);

/// Rational floor/ceil as 64-bit integers.
std::int64_t floor_to_int(const Rational& q);
std::int64_t ceil_to_int(const Rational& q);

/// Floor and ceiling of a/b for b != 0.
std::int64_t floor_div(std::int64_t a, std::int64_t b);
std::int64_t ceil_div(std::int64_t a, std::int64_t b);

}  // namespace toricdeg
