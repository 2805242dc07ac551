#pragma once

// Exact convex geometry of finite-dimensional polytopes: minimal faces, faces of
// affine slices, and the check that the minimal face G(K, F) of a slice face F
// meets the slicing subspace in exactly F.

#include <cstdint>
#include <vector>

#include "autoconv/exact.hpp"

namespace autoconv::faces {

using exact::Rational;
using Point = exact::Vector;

/// Convex hull of finitely many rational points, stored by its vertices.
class VPolytope {
 public:
  VPolytope() = default;

  /// Deduplicates the points and drops every point that is not a vertex of
  /// their convex hull. All points must have `ambient_dim` coordinates.
  VPolytope(int ambient_dim, std::vector<Point> points);

  int ambient_dim() const { return ambient_dim_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }

  /// Affine dimension of the hull (-1 when empty).
  int dimension() const { return exact::affine_dimension(vertices_); }

  /// Wraps an already irredundant vertex list without re-checking it.
  static VPolytope from_vertices(int ambient_dim, std::vector<Point> vertices);

 private:
  int ambient_dim_ = 0;
  std::vector<Point> vertices_;
};

/// {x : A x = b}.
struct AffineSubspace {
  int ambient_dim = 0;
  exact::Matrix equations;
  exact::Vector rhs;

  /// Rank of the equation matrix.
  int codim() const;
  bool contains(const Point& x) const;
};

/// Inequality description {x : E x = e, G x <= g} of a polytope.
struct HRepresentation {
  exact::Matrix equalities;
  exact::Vector equality_rhs;
  exact::Matrix inequalities;
  exact::Vector inequality_rhs;
};

/// A face of `parent`, recorded by the indices of the parent vertices it contains.
struct PolytopeFace {
  std::vector<int> vertex_subset;  // sorted
  int dim = -1;

  std::vector<Point> points(const VPolytope& parent) const;
  bool operator==(const PolytopeFace&) const = default;
};

/// Affine hull equations plus one inequality per facet.
HRepresentation facet_description(const VPolytope& k);

/// True when x lies in conv(vertices) (exact LP feasibility).
bool contains(const VPolytope& k, const Point& x);

/// Smallest face G(K, v) containing v: every vertex w for which
/// (1 + lambda) v - lambda w stays in K for some lambda > 0. Throws NotInPolytope.
PolytopeFace minimal_face(const VPolytope& k, const Point& v);

/// Smallest face G(K, F) containing every point of F, taken at the barycenter
/// of F (a relative interior point of conv F). Throws NotInPolytope.
PolytopeFace minimal_face_of_set(const VPolytope& k, const std::vector<Point>& f);

/// Exact V-description of K cut by H (possibly empty).
VPolytope intersect_affine(const VPolytope& k, const AffineSubspace& h);

/// All nonempty faces of K, sorted by dimension and then by vertex subset.
/// Throws TooLarge above 20 vertices or ambient dimension 6.
std::vector<PolytopeFace> faces_of(const VPolytope& k);

/// Minimum dimension of a nonsingleton face. Throws Singleton for a point.
int facial_dimension(const VPolytope& k);

/// The facial-dimension hypothesis for a linear image in R^range_dim: facial
/// dimension strictly greater than range_dim. Never holds for polytopes with
/// range_dim >= 1, since every polytope with two vertices has an edge.
bool facial_dimension_exceeds(const VPolytope& k, int range_dim);

struct FaceCheck {
  std::vector<Point> face;         // vertices of F, a face of K cut by H
  int face_dim = -1;
  std::vector<int> minimal_face;   // G(K, F) as indices into K's vertices
  int g_dim = -1;
  bool pass = false;
};

struct IntersectionReport {
  std::vector<FaceCheck> faces;
  std::size_t failures = 0;
  bool pass() const { return failures == 0; }
};

/// For every face F of K cut by H, computes G(K, F) and verifies exactly that
/// G(K, F) cut by H is F again. Throws EmptyIntersection when H misses K.
IntersectionReport check_intersection_theorem(const VPolytope& k, const AffineSubspace& h);

/// Random polytope with i.i.d. integer coordinates in [-9, 9] from
/// `point_count` draws (duplicates and interior points removed).
VPolytope random_polytope(int ambient_dim, int point_count, std::uint64_t seed);

/// Random integer subspace of the given codimension through a random
/// rational point of K, so that the intersection is nonempty.
AffineSubspace random_subspace_through(const VPolytope& k, int codim, std::uint64_t seed);

}  // namespace autoconv::faces
