#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace autoconv::exact {

using Rational = boost::multiprecision::mpq_rational;
using Vector = std::vector<Rational>;
using Matrix = std::vector<Vector>;  // row-major, rows of equal length

/// Parses "p/q", "p" or a terminating decimal such as "-0.25". Throws BadInput.
Rational parse_rational(std::string_view text);

/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string format_rational(const Rational& value);

Rational dot(const Vector& a, const Vector& b);
Vector add(const Vector& a, const Vector& b);
Vector subtract(const Vector& a, const Vector& b);
Vector scale(const Vector& a, const Rational& s);

/// In-place reduced row echelon form; returns pivot columns in row order.
/// Zero rows are removed.
std::vector<std::size_t> reduce_rows(Matrix& m, std::size_t cols);

std::size_t rank(Matrix m, std::size_t cols);

/// Basis of {x : M x = 0}.
Matrix nullspace(Matrix m, std::size_t cols);

/// Solution set {x : A x = b} as x0 + span(directions); nullopt when inconsistent.
struct AffineSolution {
  Vector particular;
  Matrix directions;
};
std::optional<AffineSolution> solve_affine(const Matrix& a, const Vector& b, std::size_t cols);

/// Dimension of the affine hull of the points (-1 for an empty set).
int affine_dimension(const std::vector<Vector>& points);

/// Scales a nonzero vector so that its first nonzero entry has absolute value 1.
void normalize_direction(Vector& v);

}  // namespace autoconv::exact
