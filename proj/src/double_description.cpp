#include "autoconv/double_description.hpp"

#include <stdexcept>

namespace autoconv::exact {

namespace {

// Greedy choice of `cols` linearly independent rows.
std::vector<std::size_t> independent_rows(const Matrix& rows, std::size_t cols) {
  std::vector<std::size_t> chosen;
  Matrix echelon;
  for (std::size_t i = 0; i < rows.size() && chosen.size() < cols; ++i) {
    Matrix trial = echelon;
    trial.push_back(rows[i]);
    const auto pivots = reduce_rows(trial, cols);
    if (pivots.size() > echelon.size()) {
      chosen.push_back(i);
      echelon = std::move(trial);
    }
  }
  return chosen;
}

// Inverse of a square nonsingular matrix by Gauss-Jordan.
Matrix inverse(const Matrix& m) {
  const std::size_t n = m.size();
  Matrix augmented(n, Vector(2 * n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) augmented[i][j] = m[i][j];
    augmented[i][n + i] = 1;
  }
  reduce_rows(augmented, 2 * n);
  Matrix out(n, Vector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i][j] = augmented[i][n + j];
  return out;
}

}  // namespace

std::vector<ExtremeRay> extreme_rays(const Matrix& rows, std::size_t cols) {
  const std::size_t count = rows.size();
  const auto basis = independent_rows(rows, cols);
  if (basis.size() < cols) throw std::logic_error("extreme_rays: cone is not pointed");

  Matrix basis_rows;
  for (auto i : basis) basis_rows.push_back(rows[i]);
  const Matrix inv = inverse(basis_rows);

  // Rays are the columns of -B^{-1}: ray k is tight on every basis row except k.
  std::vector<ExtremeRay> rays;
  for (std::size_t k = 0; k < cols; ++k) {
    ExtremeRay ray;
    ray.direction.resize(cols);
    for (std::size_t i = 0; i < cols; ++i) ray.direction[i] = -inv[i][k];
    normalize_direction(ray.direction);
    ray.tight.resize(count);
    for (std::size_t b = 0; b < cols; ++b)
      if (b != k) ray.tight.set(basis[b]);
    rays.push_back(std::move(ray));
  }

  std::vector<bool> in_basis(count, false);
  for (auto i : basis) in_basis[i] = true;

  for (std::size_t row = 0; row < count; ++row) {
    if (in_basis[row]) continue;
    std::vector<Rational> value(rays.size());
    std::vector<std::size_t> positive, negative;
    std::vector<ExtremeRay> next;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      value[r] = dot(rows[row], rays[r].direction);
      if (value[r] > 0) positive.push_back(r);
      else if (value[r] < 0) negative.push_back(r);
    }
    for (std::size_t p : positive) {
      for (std::size_t q : negative) {
        const auto common = rays[p].tight & rays[q].tight;
        if (common.count() + 2 < cols) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == q) continue;
          if (common.is_subset_of(rays[r].tight)) adjacent = false;
        }
        if (!adjacent) continue;
        ExtremeRay ray;
        ray.direction = subtract(scale(rays[q].direction, value[p]),
                                 scale(rays[p].direction, value[q]));
        normalize_direction(ray.direction);
        ray.tight = common;
        ray.tight.set(row);
        next.push_back(std::move(ray));
      }
    }
    for (std::size_t r = 0; r < rays.size(); ++r) {
      if (value[r] > 0) continue;
      if (value[r] == 0) rays[r].tight.set(row);
      next.push_back(std::move(rays[r]));
    }
    rays = std::move(next);
  }
  return rays;
}

}  // namespace autoconv::exact
