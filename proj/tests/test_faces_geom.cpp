#include <algorithm>

#include "autoconv/error.hpp"
#include "autoconv/exact_lp.hpp"
#include "autoconv/faces_geom.hpp"
#include "autoconv/rng.hpp"
#include "doctest.h"
#include "exact_oracles.hpp"

using namespace autoconv;
using namespace autoconv::faces;
using oracle::ipt;
using oracle::pt;

namespace {

VPolytope unit_square() {
  return VPolytope(2, {ipt({0, 0}), ipt({1, 0}), ipt({1, 1}), ipt({0, 1})});
}

std::vector<Point> sorted(std::vector<Point> v) {
  std::sort(v.begin(), v.end());
  return v;
}

template <typename F>
ErrorKind error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an autoconv::Error");
  return ErrorKind::BadInput;
}

}  // namespace

TEST_CASE("rational parsing and formatting") {
  CHECK(exact::parse_rational("3/6") == exact::Rational(1, 2));
  CHECK(exact::parse_rational("-0.25") == exact::Rational(-1, 4));
  CHECK(exact::parse_rational(" 7 ") == 7);
  CHECK(exact::parse_rational("010/3") == exact::Rational(10, 3));
  CHECK(exact::parse_rational("-007") == -7);
  CHECK(exact::format_rational(exact::Rational(-6, 4)) == "-3/2");
  CHECK(exact::format_rational(exact::Rational(5)) == "5");
  CHECK(error_of([] { exact::parse_rational("1/0"); }) == ErrorKind::BadInput);
  CHECK(error_of([] { exact::parse_rational("abc"); }) == ErrorKind::BadInput);
}

TEST_CASE("exact simplex") {
  // max x + y s.t. x + 2y + s1 = 4, 3x + y + s2 = 6 -> optimum at (8/5, 6/5).
  exact::Matrix a{{1, 2, 1, 0}, {3, 1, 0, 1}};
  exact::Vector b{4, 6};
  const auto r = exact::maximize(a, b, {1, 1, 0, 0});
  REQUIRE(r.status == exact::LpStatus::Optimal);
  CHECK(r.objective == exact::Rational(14, 5));
  CHECK(r.solution[0] == exact::Rational(8, 5));
  CHECK(exact::maximize({{1, -1}}, {0}, {1, 0}).status == exact::LpStatus::Unbounded);
  CHECK(exact::maximize({{1, 1}}, {-1}, {0, 0}).status == exact::LpStatus::Infeasible);
  // Redundant equality rows are tolerated.
  CHECK(exact::feasible({{1, 1}, {2, 2}}, {1, 2}));
}

TEST_CASE("VPolytope removes duplicates and interior points") {
  const VPolytope k(2, {ipt({0, 0}), ipt({2, 0}), ipt({1, 1}), ipt({0, 2}), ipt({2, 2}), ipt({0, 0}), ipt({1, 0})});
  CHECK(k.size() == 4);
  CHECK(k.dimension() == 2);
  const VPolytope segment(3, {ipt({0, 0, 0}), ipt({1, 1, 1}), ipt({2, 2, 2})});
  CHECK(segment.size() == 2);
  CHECK(segment.dimension() == 1);
  CHECK(facet_description(oracle::cube(3)).inequalities.size() == 6);
}

TEST_CASE("minimal_face on the unit square") {
  const VPolytope sq = unit_square();
  CHECK(minimal_face(sq, pt({"1/2", "1/2"})).vertex_subset == std::vector<int>{0, 1, 2, 3});
  const auto edge = minimal_face(sq, pt({"1/2", "0"}));
  CHECK(edge.vertex_subset == std::vector<int>{0, 1});
  CHECK(edge.dim == 1);
  const auto corner = minimal_face(sq, ipt({0, 0}));
  CHECK(corner.vertex_subset == std::vector<int>{0});
  CHECK(corner.dim == 0);
  CHECK(error_of([&] { minimal_face(sq, ipt({2, 0})); }) == ErrorKind::NotInPolytope);
}

TEST_CASE("minimal_face_of_set on the unit square") {
  const VPolytope sq = unit_square();
  CHECK(minimal_face_of_set(sq, {ipt({0, 0})}).vertex_subset == std::vector<int>{0});
  CHECK(minimal_face_of_set(sq, {ipt({0, 0}), ipt({1, 0})}).vertex_subset == std::vector<int>{0, 1});
  // Union of G(K, v) over F: {(0,0)} and the whole square.
  CHECK(minimal_face_of_set(sq, {ipt({0, 0}), pt({"1/2", "1/2"})}).vertex_subset ==
        std::vector<int>{0, 1, 2, 3});
  CHECK(error_of([&] { minimal_face_of_set(sq, {ipt({0, 0}), ipt({0, 5})}); }) ==
        ErrorKind::NotInPolytope);
}

TEST_CASE("intersect_affine on cube and square") {
  const VPolytope c3 = oracle::cube(3);
  AffineSubspace floor{3, {{0, 0, 1}}, {0}};
  CHECK(intersect_affine(c3, floor).size() == 4);

  AffineSubspace diagonal{3, {{1, 1, 1}}, {exact::Rational(3, 2)}};
  const VPolytope hexagon = intersect_affine(c3, diagonal);
  const std::vector<Point> expected = sorted({pt({"1", "1/2", "0"}), pt({"1", "0", "1/2"}),
                                              pt({"1/2", "1", "0"}), pt({"0", "1", "1/2"}),
                                              pt({"1/2", "0", "1"}), pt({"0", "1/2", "1"})});
  CHECK(sorted(hexagon.vertices()) == expected);
  for (const auto& v : hexagon.vertices()) CHECK(diagonal.contains(v));

  AffineSubspace far{2, {{1, 0}}, {2}};
  CHECK(intersect_affine(unit_square(), far).empty());
}

TEST_CASE("intersect_affine agrees with naive active-set enumeration") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int d = 2 + static_cast<int>(seed % 2);
    const VPolytope k = random_polytope(d, 4 + static_cast<int>(seed % 5), seed);
    if (k.dimension() != d) continue;
    const auto facets = oracle::brute_facets(k);
    CHECK(facets.size() == facet_description(k).inequalities.size());
    const AffineSubspace h = random_subspace_through(k, 1, seed + 1000);
    const auto expected = oracle::naive_vertices(static_cast<std::size_t>(d), h.equations, h.rhs, facets);
    CHECK(sorted(intersect_affine(k, h).vertices()) == expected);
    ++checked;
  }
  CHECK(checked >= 30);
}

TEST_CASE("faces_of counts") {
  const VPolytope segment(1, {ipt({0}), ipt({3})});
  CHECK(faces_of(segment).size() == 3);
  const VPolytope triangle(2, {ipt({0, 0}), ipt({1, 0}), ipt({0, 1})});
  CHECK(faces_of(triangle).size() == 7);

  const VPolytope c3 = oracle::cube(3);
  const auto faces = faces_of(c3);
  CHECK(faces.size() == 27);
  std::vector<int> by_dim(4, 0);
  for (const auto& f : faces) ++by_dim[static_cast<std::size_t>(f.dim)];
  CHECK(by_dim == std::vector<int>{8, 12, 6, 1});

  std::vector<std::vector<int>> subsets;
  for (const auto& f : faces) subsets.push_back(f.vertex_subset);
  std::sort(subsets.begin(), subsets.end());
  CHECK(subsets == oracle::brute_faces(c3));
}

TEST_CASE("faces_of matches the LP face oracle on random polytopes") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const VPolytope k = random_polytope(1 + static_cast<int>(seed % 3), 7, seed + 500);
    std::vector<std::vector<int>> subsets;
    for (const auto& f : faces_of(k)) subsets.push_back(f.vertex_subset);
    std::sort(subsets.begin(), subsets.end());
    CHECK(subsets == oracle::brute_faces(k));
  }
}

TEST_CASE("faces_of guard") {
  std::vector<Point> many;
  for (int i = 0; i < 21; ++i) many.push_back(ipt({i, i * i}));
  const VPolytope parabola(2, many);
  CHECK(parabola.size() == 21);
  CHECK(error_of([&] { faces_of(parabola); }) == ErrorKind::TooLarge);
}

TEST_CASE("facial_dimension") {
  CHECK(facial_dimension(VPolytope(1, {ipt({0}), ipt({1})})) == 1);
  CHECK(facial_dimension(oracle::cube(4)) == 1);
  CHECK(error_of([] { facial_dimension(VPolytope(2, {ipt({1, 1})})); }) == ErrorKind::Singleton);
  CHECK(facial_dimension_exceeds(oracle::cube(3), 0));
  CHECK_FALSE(facial_dimension_exceeds(oracle::cube(3), 1));  // strict
  CHECK_FALSE(facial_dimension_exceeds(oracle::cube(3), 2));
}

TEST_CASE("check_intersection_theorem examples") {
  const VPolytope c3 = oracle::cube(3);
  AffineSubspace diagonal{3, {{1, 1, 1}}, {exact::Rational(3, 2)}};
  const auto report = check_intersection_theorem(c3, diagonal);
  CHECK(report.pass());
  CHECK(report.faces.size() == 6 + 6 + 1);
  bool found = false;
  for (const auto& f : report.faces) {
    if (f.face == std::vector<Point>{pt({"1", "1/2", "0"})}) {
      found = true;
      const auto g = PolytopeFace{f.minimal_face, f.g_dim}.points(c3);
      CHECK(sorted(g) == sorted({ipt({1, 0, 0}), ipt({1, 1, 0})}));
      CHECK(f.g_dim == 1);
    }
  }
  CHECK(found);

  AffineSubspace floor{3, {{0, 0, 1}}, {0}};
  const auto floor_report = check_intersection_theorem(c3, floor);
  CHECK(floor_report.pass());
  const auto& whole = floor_report.faces.back();
  CHECK(whole.face_dim == 2);
  CHECK(whole.g_dim == 2);
  CHECK(sorted(PolytopeFace{whole.minimal_face, 2}.points(c3)) == sorted(whole.face));

  // H containing the affine hull of K: G(K, F) = F for every face.
  const VPolytope flat(3, {ipt({0, 0, 0}), ipt({2, 0, 0}), ipt({0, 3, 0}), ipt({1, 1, 0})});
  const auto same = check_intersection_theorem(flat, floor);
  CHECK(same.pass());
  for (const auto& f : same.faces) CHECK(f.face_dim == f.g_dim);

  AffineSubspace miss{3, {{0, 0, 1}}, {5}};
  CHECK(error_of([&] { check_intersection_theorem(c3, miss); }) == ErrorKind::EmptyIntersection);
}

TEST_CASE("minimal face properties on random polytopes") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int d = 2 + static_cast<int>(seed % 3);
    const VPolytope k = random_polytope(d, 8, seed + 77);
    const auto faces = faces_of(k);
    for (const auto& face : faces) {
      // Idempotence at the barycenter of the face.
      CHECK(minimal_face_of_set(k, face.points(k)).vertex_subset == face.vertex_subset);
      // Face property on vertex pairs: a midpoint inside conv(F) forces both ends into F.
      const VPolytope face_poly = VPolytope::from_vertices(d, face.points(k));
      for (std::size_t u = 0; u < k.size(); ++u)
        for (std::size_t w = u + 1; w < k.size(); ++w) {
          const Point mid = exact::scale(exact::add(k.vertices()[u], k.vertices()[w]), exact::Rational(1, 2));
          if (!contains(face_poly, mid)) continue;
          const auto& s = face.vertex_subset;
          CHECK(std::binary_search(s.begin(), s.end(), static_cast<int>(u)));
          CHECK(std::binary_search(s.begin(), s.end(), static_cast<int>(w)));
        }
    }
  }
}

TEST_CASE("intersection theorem on random polytopes with monotone minimal faces") {
  std::size_t faces_checked = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int d = 2 + static_cast<int>(seed % 3);
    const VPolytope k = random_polytope(d, 5 + static_cast<int>(seed % 6), seed + 9000);
    const int codim = 1 + static_cast<int>(seed % std::min(3, d));
    const AffineSubspace h = random_subspace_through(k, codim, seed);
    const auto report = check_intersection_theorem(k, h);
    CHECK(report.pass());
    faces_checked += report.faces.size();
    // F subset of F' implies G(K, F) subset of G(K, F').
    for (const auto& f : report.faces)
      for (const auto& g : report.faces) {
        const bool nested = std::all_of(f.face.begin(), f.face.end(), [&](const Point& p) {
          return std::find(g.face.begin(), g.face.end(), p) != g.face.end();
        });
        if (!nested) continue;
        CHECK(std::includes(g.minimal_face.begin(), g.minimal_face.end(), f.minimal_face.begin(),
                            f.minimal_face.end()));
      }
  }
  CHECK(faces_checked > 100);
}
