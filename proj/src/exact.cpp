#include "autoconv/exact.hpp"

#include <algorithm>
#include <regex>
#include <utility>

#include "autoconv/error.hpp"

namespace autoconv::exact {

namespace {

using Integer = boost::multiprecision::mpz_int;

// Decimal digits only; leading zeros would otherwise select octal parsing.
Integer decimal_integer(std::string digits) {
  bool negative = false;
  if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
    negative = digits[0] == '-';
    digits.erase(0, 1);
  }
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  Integer value(digits);
  return negative ? Integer(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  static const std::regex fraction(R"(^\s*([+-]?\d+)(?:/(\d+))?\s*$)");
  static const std::regex decimal(R"(^\s*([+-]?)(\d*)\.(\d+)\s*$)");
  const std::string s(text);
  std::smatch match;
  if (std::regex_match(s, match, fraction)) {
    const Integer numerator = decimal_integer(match[1].str());
    const Integer denominator = decimal_integer(match[2].matched ? match[2].str() : std::string("1"));
    if (denominator == 0) throw Error(ErrorKind::BadInput, "zero denominator in '" + s + "'");
    return Rational(numerator, denominator);
  }
  if (std::regex_match(s, match, decimal)) {
    Integer numerator = decimal_integer(match[2].str() + match[3].str());
    Integer denominator = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(match[3].length()));
    if (match[1].str() == "-") numerator = -numerator;
    return Rational(numerator, denominator);
  }
  throw Error(ErrorKind::BadInput, "not a rational number: '" + s + "'");
}

std::string format_rational(const Rational& value) {
  const Integer num = boost::multiprecision::numerator(value);
  const Integer den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational dot(const Vector& a, const Vector& b) {
  Rational sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

Vector add(const Vector& a, const Vector& b) {
  Vector out(a);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

Vector subtract(const Vector& a, const Vector& b) {
  Vector out(a);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
  return out;
}

Vector scale(const Vector& a, const Rational& s) {
  Vector out(a);
  for (auto& x : out) x *= s;
  return out;
}

std::vector<std::size_t> reduce_rows(Matrix& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t found = row;
    while (found < m.size() && m[found][col] == 0) ++found;
    if (found == m.size()) continue;
    std::swap(m[row], m[found]);
    const Rational inv = 1 / m[row][col];
    for (std::size_t j = col; j < cols; ++j) m[row][j] *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      const Rational factor = m[r][col];
      for (std::size_t j = col; j < cols; ++j) m[r][j] -= factor * m[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  m.resize(row);
  return pivots;
}

std::size_t rank(Matrix m, std::size_t cols) { return reduce_rows(m, cols).size(); }

Matrix nullspace(Matrix m, std::size_t cols) {
  const auto pivots = reduce_rows(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  Matrix basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Vector v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<AffineSolution> solve_affine(const Matrix& a, const Vector& b, std::size_t cols) {
  Matrix augmented = a;
  for (std::size_t r = 0; r < augmented.size(); ++r) augmented[r].push_back(b[r]);
  const auto pivots = reduce_rows(augmented, cols + 1);
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  AffineSolution out;
  out.particular.assign(cols, Rational(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) out.particular[pivots[r]] = augmented[r][cols];
  Matrix coefficients = a;
  out.directions = nullspace(std::move(coefficients), cols);
  return out;
}

int affine_dimension(const std::vector<Vector>& points) {
  if (points.empty()) return -1;
  Matrix differences;
  for (std::size_t i = 1; i < points.size(); ++i)
    differences.push_back(subtract(points[i], points[0]));
  return static_cast<int>(rank(std::move(differences), points[0].size()));
}

void normalize_direction(Vector& v) {
  for (const auto& x : v) {
    if (x != 0) {
      const Rational s = 1 / abs(x);
      for (auto& y : v) y *= s;
      return;
    }
  }
}

}  // namespace autoconv::exact
