#pragma once

#include "autoconv/exact.hpp"

namespace autoconv::exact {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational objective;
  Vector solution;
};

/// Maximizes c.x subject to A x = b, x >= 0 in exact arithmetic.
///
/// Two-phase dense tableau simplex with Bland's rule, so it terminates on
/// degenerate problems. Intended for desk-scale systems (tens of rows/columns).
LpResult maximize(const Matrix& a, const Vector& b, const Vector& c);

/// True when {x >= 0 : A x = b} is nonempty; `witness` receives a feasible point.
bool feasible(const Matrix& a, const Vector& b, Vector* witness = nullptr);

}  // namespace autoconv::exact
