#include "autoconv/faces_geom.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "autoconv/double_description.hpp"
#include "autoconv/error.hpp"
#include "autoconv/exact_lp.hpp"
#include "autoconv/rng.hpp"

namespace autoconv::faces {

using exact::Matrix;
using exact::Vector;

namespace {

constexpr std::size_t kFacesOfMaxVertices = 20;
constexpr int kFacesOfMaxDim = 6;
constexpr std::size_t kLatticeMaxVertices = 64;

struct Slice {
  VPolytope polytope;
  HRepresentation hrep;
};

void require_dim(const Point& p, int d) {
  if (static_cast<int>(p.size()) != d) {
    throw Error(ErrorKind::ShapeMismatch, "point has " + std::to_string(p.size()) +
                                              " coordinates, expected " + std::to_string(d));
  }
}

// Facets of a polytope whose affine hull has dimension m, found as extreme rays
// (a, beta) of the cone {a . q_i <= beta} over the points projected onto m
// coordinates that parametrize the affine hull.
HRepresentation hull_of(int d, const std::vector<Point>& points) {
  HRepresentation out;
  const auto dd = static_cast<std::size_t>(d);
  Matrix directions;
  for (std::size_t i = 1; i < points.size(); ++i)
    directions.push_back(exact::subtract(points[i], points[0]));
  Matrix echelon = directions;
  const auto coordinates = exact::reduce_rows(echelon, dd);
  const std::size_t m = coordinates.size();

  for (auto& normal : exact::nullspace(directions, dd)) {
    out.equality_rhs.push_back(exact::dot(normal, points[0]));
    out.equalities.push_back(std::move(normal));
  }
  if (m == 0) return out;

  Matrix rows;
  for (const auto& p : points) {
    Vector row(m + 1);
    for (std::size_t c = 0; c < m; ++c) row[c] = p[coordinates[c]];
    row[m] = -1;
    rows.push_back(std::move(row));
  }
  for (const auto& ray : exact::extreme_rays(rows, m + 1)) {
    bool trivial = true;
    for (std::size_t c = 0; c < m; ++c) trivial = trivial && ray.direction[c] == 0;
    if (trivial) continue;
    Vector normal(dd, Rational(0));
    for (std::size_t c = 0; c < m; ++c) normal[coordinates[c]] = ray.direction[c];
    out.inequalities.push_back(std::move(normal));
    out.inequality_rhs.push_back(ray.direction[m]);
  }
  return out;
}

std::vector<Point> sorted_points(std::vector<Point> points) {
  std::sort(points.begin(), points.end());
  return points;
}

Slice slice(const VPolytope& k, const AffineSubspace& h) {
  const int d = k.ambient_dim();
  const auto dd = static_cast<std::size_t>(d);
  if (h.ambient_dim != d) throw Error(ErrorKind::ShapeMismatch, "subspace dimension mismatch");
  Slice out;
  out.polytope = VPolytope::from_vertices(d, {});
  if (k.empty()) return out;

  HRepresentation hrep = facet_description(k);
  for (std::size_t i = 0; i < h.equations.size(); ++i) {
    hrep.equalities.push_back(h.equations[i]);
    hrep.equality_rhs.push_back(h.rhs[i]);
  }
  out.hrep = hrep;
  const auto solution = exact::solve_affine(hrep.equalities, hrep.equality_rhs, dd);
  if (!solution) return out;
  const Point& origin = solution->particular;
  const Matrix& basis = solution->directions;
  const std::size_t r = basis.size();

  auto satisfies_all = [&](const Point& x) {
    for (std::size_t i = 0; i < hrep.inequalities.size(); ++i)
      if (exact::dot(hrep.inequalities[i], x) > hrep.inequality_rhs[i]) return false;
    return true;
  };

  if (r == 0) {
    if (satisfies_all(origin)) out.polytope = VPolytope::from_vertices(d, {origin});
    return out;
  }

  // Homogenized inequalities over (y, t): g.(x0 + N y) <= beta t, t >= 0.
  Matrix rows;
  for (std::size_t i = 0; i < hrep.inequalities.size(); ++i) {
    Vector row(r + 1);
    for (std::size_t j = 0; j < r; ++j) row[j] = exact::dot(hrep.inequalities[i], basis[j]);
    row[r] = exact::dot(hrep.inequalities[i], origin) - hrep.inequality_rhs[i];
    rows.push_back(std::move(row));
  }
  Vector nonnegative(r + 1, Rational(0));
  nonnegative[r] = -1;
  rows.push_back(std::move(nonnegative));

  std::vector<Point> vertices;
  for (const auto& ray : exact::extreme_rays(rows, r + 1)) {
    const Rational& t = ray.direction[r];
    if (t <= 0) continue;
    Point x = origin;
    for (std::size_t j = 0; j < r; ++j) {
      const Rational coefficient = ray.direction[j] / t;
      if (coefficient == 0) continue;
      for (std::size_t c = 0; c < dd; ++c) x[c] += coefficient * basis[j][c];
    }
    vertices.push_back(std::move(x));
  }
  out.polytope = VPolytope::from_vertices(d, sorted_points(std::move(vertices)));
  return out;
}

// Nonempty faces as vertex bitmasks: closure of {all} under intersection with
// the tight sets of the inequalities.
std::vector<std::uint64_t> face_masks(const VPolytope& p, const HRepresentation& hrep) {
  const std::size_t n = p.size();
  if (n == 0) return {};
  if (n > kLatticeMaxVertices) {
    throw Error(ErrorKind::TooLarge, std::to_string(n) + " vertices exceed the face lattice limit");
  }
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  std::vector<std::uint64_t> tight;
  for (std::size_t i = 0; i < hrep.inequalities.size(); ++i) {
    std::uint64_t mask = 0;
    for (std::size_t v = 0; v < n; ++v)
      if (exact::dot(hrep.inequalities[i], p.vertices()[v]) == hrep.inequality_rhs[i])
        mask |= std::uint64_t{1} << v;
    if (mask != 0 && mask != all) tight.push_back(mask);
  }
  std::sort(tight.begin(), tight.end());
  tight.erase(std::unique(tight.begin(), tight.end()), tight.end());

  std::unordered_set<std::uint64_t> seen{all};
  std::vector<std::uint64_t> faces{all};
  for (std::size_t next = 0; next < faces.size(); ++next) {
    const std::uint64_t face = faces[next];
    for (auto facet : tight) {
      const std::uint64_t sub = face & facet;
      if (sub != 0 && seen.insert(sub).second) faces.push_back(sub);
    }
  }
  return faces;
}

std::vector<PolytopeFace> faces_from_masks(const VPolytope& p, const std::vector<std::uint64_t>& masks) {
  std::vector<PolytopeFace> out;
  out.reserve(masks.size());
  for (auto mask : masks) {
    PolytopeFace face;
    std::vector<Point> pts;
    for (std::size_t v = 0; v < p.size(); ++v) {
      if (mask >> v & 1) {
        face.vertex_subset.push_back(static_cast<int>(v));
        pts.push_back(p.vertices()[v]);
      }
    }
    face.dim = exact::affine_dimension(pts);
    out.push_back(std::move(face));
  }
  std::sort(out.begin(), out.end(), [](const PolytopeFace& a, const PolytopeFace& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.vertex_subset < b.vertex_subset;
  });
  return out;
}

// Constraint rows for sum_i mu_i V_i (+ lambda * shift) = target, sum_i mu_i = 1.
void convex_combination_system(const VPolytope& k, const Point& target, const Point* shift,
                               Matrix& a, Vector& b) {
  const std::size_t n = k.size();
  const auto d = static_cast<std::size_t>(k.ambient_dim());
  const std::size_t cols = n + (shift ? 1 : 0);
  a.assign(d + 1, Vector(cols, Rational(0)));
  b.assign(d + 1, Rational(0));
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t i = 0; i < n; ++i) a[c][i] = k.vertices()[i][c];
    if (shift) a[c][n] = (*shift)[c];
    b[c] = target[c];
  }
  for (std::size_t i = 0; i < n; ++i) a[d][i] = 1;
  b[d] = 1;
}

}  // namespace

VPolytope::VPolytope(int ambient_dim, std::vector<Point> points) : ambient_dim_(ambient_dim) {
  std::vector<Point> unique;
  for (auto& p : points) {
    require_dim(p, ambient_dim);
    if (std::find(unique.begin(), unique.end(), p) == unique.end()) unique.push_back(std::move(p));
  }
  if (unique.size() <= 1) {
    vertices_ = std::move(unique);
    return;
  }
  const auto hrep = hull_of(ambient_dim, unique);
  const std::size_t m = static_cast<std::size_t>(ambient_dim) - hrep.equalities.size();
  for (auto& p : unique) {
    Matrix tight_normals;
    for (std::size_t i = 0; i < hrep.inequalities.size(); ++i)
      if (exact::dot(hrep.inequalities[i], p) == hrep.inequality_rhs[i])
        tight_normals.push_back(hrep.inequalities[i]);
    if (exact::rank(std::move(tight_normals), static_cast<std::size_t>(ambient_dim)) == m)
      vertices_.push_back(std::move(p));
  }
}

VPolytope VPolytope::from_vertices(int ambient_dim, std::vector<Point> vertices) {
  VPolytope out;
  out.ambient_dim_ = ambient_dim;
  out.vertices_ = std::move(vertices);
  return out;
}

int AffineSubspace::codim() const {
  return static_cast<int>(exact::rank(equations, static_cast<std::size_t>(ambient_dim)));
}

bool AffineSubspace::contains(const Point& x) const {
  for (std::size_t i = 0; i < equations.size(); ++i)
    if (exact::dot(equations[i], x) != rhs[i]) return false;
  return true;
}

std::vector<Point> PolytopeFace::points(const VPolytope& parent) const {
  std::vector<Point> out;
  for (int i : vertex_subset) out.push_back(parent.vertices()[static_cast<std::size_t>(i)]);
  return out;
}

HRepresentation facet_description(const VPolytope& k) {
  if (k.empty()) throw Error(ErrorKind::BadInput, "empty polytope has no facet description");
  return hull_of(k.ambient_dim(), k.vertices());
}

bool contains(const VPolytope& k, const Point& x) {
  require_dim(x, k.ambient_dim());
  if (k.empty()) return false;
  Matrix a;
  Vector b;
  convex_combination_system(k, x, nullptr, a, b);
  return exact::feasible(a, b);
}

PolytopeFace minimal_face(const VPolytope& k, const Point& v) {
  require_dim(v, k.ambient_dim());
  const std::size_t n = k.size();
  Matrix a;
  Vector b;
  convex_combination_system(k, v, nullptr, a, b);
  Vector witness;
  if (k.empty() || !exact::feasible(a, b, &witness)) {
    throw Error(ErrorKind::NotInPolytope, "point is not in the polytope");
  }
  std::vector<bool> in_face(n, false);
  for (std::size_t i = 0; i < n; ++i) in_face[i] = witness[i] > 0;

  // w belongs to G(K, v) iff max { lambda : (1 + lambda) v - lambda w in K } > 0.
  Vector objective(n + 1, Rational(0));
  objective[n] = 1;
  for (std::size_t w = 0; w < n; ++w) {
    if (in_face[w]) continue;
    const Point shift = exact::subtract(k.vertices()[w], v);
    convex_combination_system(k, v, &shift, a, b);
    const auto result = exact::maximize(a, b, objective);
    if (result.status == exact::LpStatus::Unbounded) {
      in_face[w] = true;
      continue;
    }
    if (result.status != exact::LpStatus::Optimal) continue;
    if (result.objective > 0) in_face[w] = true;
    // (1 + lambda) v - lambda w lies in G(K, v), hence so does its support.
    for (std::size_t i = 0; i < n; ++i)
      if (result.solution[i] > 0) in_face[i] = true;
  }

  PolytopeFace face;
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_face[i]) continue;
    face.vertex_subset.push_back(static_cast<int>(i));
    pts.push_back(k.vertices()[i]);
  }
  face.dim = exact::affine_dimension(pts);
  return face;
}

PolytopeFace minimal_face_of_set(const VPolytope& k, const std::vector<Point>& f) {
  if (f.empty()) throw Error(ErrorKind::BadInput, "minimal face of an empty set");
  Point barycenter(static_cast<std::size_t>(k.ambient_dim()), Rational(0));
  for (const auto& p : f) {
    require_dim(p, k.ambient_dim());
    if (!contains(k, p)) throw Error(ErrorKind::NotInPolytope, "a point of F is not in K");
    barycenter = exact::add(barycenter, p);
  }
  return minimal_face(k, exact::scale(barycenter, Rational(1, static_cast<long>(f.size()))));
}

VPolytope intersect_affine(const VPolytope& k, const AffineSubspace& h) {
  return slice(k, h).polytope;
}

std::vector<PolytopeFace> faces_of(const VPolytope& k) {
  if (k.size() > kFacesOfMaxVertices || k.ambient_dim() > kFacesOfMaxDim) {
    throw Error(ErrorKind::TooLarge, "faces_of supports at most 20 vertices in dimension 6");
  }
  if (k.empty()) return {};
  return faces_from_masks(k, face_masks(k, facet_description(k)));
}

int facial_dimension(const VPolytope& k) {
  if (k.size() < 2) throw Error(ErrorKind::Singleton, "facial dimension needs a nonsingleton set");
  int best = k.dimension();
  for (const auto& face : faces_of(k))
    if (face.vertex_subset.size() >= 2) best = std::min(best, face.dim);
  return best;
}

bool facial_dimension_exceeds(const VPolytope& k, int range_dim) { return facial_dimension(k) > range_dim; }

IntersectionReport check_intersection_theorem(const VPolytope& k, const AffineSubspace& h) {
  const Slice cut = slice(k, h);
  if (cut.polytope.empty()) throw Error(ErrorKind::EmptyIntersection, "H does not meet K");
  IntersectionReport report;
  for (const auto& face : faces_from_masks(cut.polytope, face_masks(cut.polytope, cut.hrep))) {
    FaceCheck check;
    check.face = face.points(cut.polytope);
    check.face_dim = face.dim;
    const PolytopeFace g = minimal_face_of_set(k, check.face);
    check.minimal_face = g.vertex_subset;
    check.g_dim = g.dim;
    const VPolytope g_poly = VPolytope::from_vertices(k.ambient_dim(), g.points(k));
    const VPolytope back = intersect_affine(g_poly, h);
    check.pass = sorted_points(back.vertices()) == sorted_points(check.face);
    if (!check.pass) ++report.failures;
    report.faces.push_back(std::move(check));
  }
  return report;
}

VPolytope random_polytope(int ambient_dim, int point_count, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<Point> points;
  for (int i = 0; i < point_count; ++i) {
    Point p;
    for (int c = 0; c < ambient_dim; ++c) p.emplace_back(rng.uniform_int(-9, 9));
    points.push_back(std::move(p));
  }
  return VPolytope(ambient_dim, std::move(points));
}

AffineSubspace random_subspace_through(const VPolytope& k, int codim, std::uint64_t seed) {
  CounterRng rng(seed);
  const auto d = static_cast<std::size_t>(k.ambient_dim());
  Point x(d, Rational(0));
  Rational total = 0;
  for (const auto& v : k.vertices()) {
    const Rational w = rng.uniform_int(0, 3);
    total += w;
    x = exact::add(x, exact::scale(v, w));
  }
  if (total == 0) {
    x = k.vertices().front();
  } else {
    x = exact::scale(x, 1 / total);
  }
  AffineSubspace h;
  h.ambient_dim = k.ambient_dim();
  for (int attempt = 0; attempt < 16; ++attempt) {
    h.equations.assign(static_cast<std::size_t>(codim), Vector(d));
    for (auto& row : h.equations)
      for (auto& entry : row) entry = rng.uniform_int(-3, 3);
    if (h.codim() == codim) break;
  }
  h.rhs.clear();
  for (const auto& row : h.equations) h.rhs.push_back(exact::dot(row, x));
  return h;
}

}  // namespace autoconv::faces
