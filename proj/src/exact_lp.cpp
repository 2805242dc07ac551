#include "autoconv/exact_lp.hpp"

#include <optional>

namespace autoconv::exact {

namespace {

// Dense tableau: rows hold [coefficients | rhs]; `reduced` holds the objective
// row in the form z + d.x = value, so an entering column has d_j < 0.
struct Tableau {
  Matrix rows;
  Vector reduced;
  std::vector<std::size_t> basis;
  std::size_t columns = 0;  // number of variable columns (rhs is at index `columns`)

  void pivot(std::size_t r, std::size_t col) {
    const Rational inv = 1 / rows[r][col];
    for (auto& x : rows[r]) x *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][col] == 0) continue;
      const Rational factor = rows[i][col];
      for (std::size_t j = 0; j <= columns; ++j) rows[i][j] -= factor * rows[r][j];
    }
    if (reduced[col] != 0) {
      const Rational factor = reduced[col];
      for (std::size_t j = 0; j <= columns; ++j) reduced[j] -= factor * rows[r][j];
    }
    basis[r] = col;
  }

  void set_objective(const Vector& c) {
    reduced.assign(columns + 1, Rational(0));
    for (std::size_t j = 0; j < c.size(); ++j) reduced[j] = -c[j];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Rational factor = reduced[basis[i]];
      if (factor == 0) continue;
      for (std::size_t j = 0; j <= columns; ++j) reduced[j] -= factor * rows[i][j];
    }
  }

  // Returns false when the objective is unbounded over the allowed columns.
  bool optimize(std::size_t allowed_columns) {
    for (;;) {
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < allowed_columns; ++j) {
        if (reduced[j] < 0) {
          entering = j;
          break;
        }
      }
      if (!entering) return true;
      const std::size_t col = *entering;
      std::optional<std::size_t> leaving;
      Rational best_ratio;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][col] <= 0) continue;
        const Rational ratio = rows[i][columns] / rows[i][col];
        if (!leaving || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[*leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (!leaving) return false;
      pivot(*leaving, col);
    }
  }
};

}  // namespace

LpResult maximize(const Matrix& a, const Vector& b, const Vector& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();

  Tableau t;
  t.columns = n + m;
  t.rows.assign(m, Vector(n + m + 1, Rational(0)));
  t.basis.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) t.rows[i][j] = flip ? -a[i][j] : a[i][j];
    t.rows[i][n + i] = 1;
    t.rows[i][n + m] = flip ? -b[i] : b[i];
    t.basis[i] = n + i;
  }

  // Phase 1: maximize -(sum of artificials).
  Vector phase_one(n + m, Rational(0));
  for (std::size_t i = 0; i < m; ++i) phase_one[n + i] = -1;
  t.set_objective(phase_one);
  t.optimize(n + m);
  LpResult result;
  if (t.reduced[n + m] < 0) {
    result.status = LpStatus::Infeasible;
    return result;
  }

  // Drive remaining (zero-level) artificials out of the basis or drop redundant rows.
  for (std::size_t i = 0; i < t.rows.size();) {
    if (t.basis[i] < n) {
      ++i;
      continue;
    }
    std::optional<std::size_t> replacement;
    for (std::size_t j = 0; j < n; ++j) {
      if (t.rows[i][j] != 0) {
        replacement = j;
        break;
      }
    }
    if (replacement) {
      t.pivot(i, *replacement);
      ++i;
    } else {
      t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
      t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }

  t.set_objective(c);
  if (!t.optimize(n)) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  result.status = LpStatus::Optimal;
  result.objective = t.reduced[n + m];
  result.solution.assign(n, Rational(0));
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    if (t.basis[i] < n) result.solution[t.basis[i]] = t.rows[i][n + m];
  return result;
}

bool feasible(const Matrix& a, const Vector& b, Vector* witness) {
  const std::size_t n = a.empty() ? 0 : a.front().size();
  const auto result = maximize(a, b, Vector(n, Rational(0)));
  if (result.status != LpStatus::Optimal) return false;
  if (witness) *witness = result.solution;
  return true;
}

}  // namespace autoconv::exact
