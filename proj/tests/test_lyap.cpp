#include <algorithm>
#include <cmath>
#include <map>

#include "autoconv/lyap.hpp"
#include "autoconv/rng.hpp"
#include "doctest.h"
#include "expect_error.hpp"

using namespace autoconv;
using namespace autoconv::lyap;

namespace {

DiscreteVectorMeasure uniform_measure(int atoms, double mass) {
  DiscreteVectorMeasure m;
  m.masses = Eigen::VectorXd::Constant(atoms, mass);
  m.target = Eigen::MatrixXd::Ones(1, atoms);
  m.constraints = Eigen::MatrixXd(0, atoms);
  m.z = Eigen::VectorXd(0);
  return m;
}

std::vector<double> sorted_points(const RangeSample& s) {
  std::vector<double> v(s.points.data(), s.points.data() + s.points.size());
  std::sort(v.begin(), v.end());
  return v;
}

double nearest(const RangeSample& s, const Eigen::VectorXd& q) {
  return (s.points.colwise() - q).colwise().norm().minCoeff();
}

// mu(A) by plain summation over the bits of the mask.
Eigen::VectorXd direct_sum(const Eigen::MatrixXd& increments, std::uint64_t mask) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(increments.rows());
  for (Eigen::Index a = 0; a < increments.cols(); ++a)
    if (mask >> a & 1) v += increments.col(a);
  return v;
}

std::map<std::uint64_t, Eigen::Index> by_subset(const RangeSample& s) {
  std::map<std::uint64_t, Eigen::Index> index;
  for (std::size_t c = 0; c < s.size(); ++c) index[s.subsets[c]] = static_cast<Eigen::Index>(c);
  return index;
}

}  // namespace

TEST_CASE("range_bruteforce examples") {
  DiscreteVectorMeasure one = uniform_measure(1, 1.0);
  one.target(0, 0) = 2.0;
  CHECK(sorted_points(range_bruteforce(one)) == std::vector<double>{0.0, 2.0});

  CHECK(sorted_points(range_bruteforce(uniform_measure(2, 1.0))) == std::vector<double>{0, 1, 1, 2});

  const auto m = random_measure(12, 2, 0, 5);
  const auto s = range_bruteforce(m);
  CHECK(s.size() == 4096);
  CHECK(s.provenance == Provenance::Exhaustive);
  const auto index = by_subset(s);
  CHECK(index.size() == 4096);
  const Eigen::VectorXd total = m.target_increments().rowwise().sum();
  CHECK((s.points.col(index.at(0xFFF)) - total).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(s.points.col(index.at(0)).isZero());
}

TEST_CASE("every point matches its generating subset") {
  const auto m = random_measure(10, 3, 0, 17);
  const auto s = range_bruteforce(m);
  const Eigen::MatrixXd inc = m.target_increments();
  for (std::size_t c = 0; c < s.size(); ++c)
    CHECK((s.points.col(static_cast<Eigen::Index>(c)) - direct_sum(inc, s.subsets[c])).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("additivity and complement symmetry") {
  const auto m = random_measure(14, 2, 0, 23);
  const auto s = range_bruteforce(m);
  const auto index = by_subset(s);
  const std::uint64_t all = (std::uint64_t{1} << 14) - 1;
  const Eigen::VectorXd total = s.points.col(index.at(all));
  CounterRng rng(4);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::uint64_t a = rng() & all;
    const std::uint64_t b = rng() & all & ~a;
    const Eigen::VectorXd joined = s.points.col(index.at(a | b));
    CHECK((joined - s.points.col(index.at(a)) - s.points.col(index.at(b))).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((s.points.col(index.at(all & ~a)) - (total - s.points.col(index.at(a)))).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("constrained_range") {
  const auto free = random_measure(8, 2, 0, 2);
  CHECK(sorted_points(constrained_range(free, 0.0)) == sorted_points(range_bruteforce(free)));

  DiscreteVectorMeasure total = uniform_measure(4, 1.0);
  total.masses << 0.5, 0.25, 1.0, 0.75;
  total.constraints = Eigen::MatrixXd::Ones(1, 4);
  total.z = Eigen::VectorXd::Constant(1, 2.5);
  const auto only = constrained_range(total, 0.0);
  REQUIRE(only.size() == 1);
  CHECK(only.subsets[0] == 0xF);
  CHECK(only.provenance == Provenance::Filtered);

  const auto m = random_measure(14, 2, 1, 9);
  const double eta = m.masses.maxCoeff();
  const auto kept = constrained_range(m, eta);
  CHECK(kept.size() > 0);
  CHECK(kept.eta == eta);
  const Eigen::MatrixXd nu = m.constraint_increments();
  for (std::uint64_t mask : kept.subsets) CHECK(std::abs(direct_sum(nu, mask)[0] - m.z[0]) <= eta + 1e-15);

  CHECK(max_constraint_increment(m) == doctest::Approx(nu.cwiseAbs().maxCoeff()));
  CHECK(max_constraint_increment(free) == 0.0);
}

TEST_CASE("guards") {
  CHECK(error_of([] { range_bruteforce(uniform_measure(23, 1.0)); }) == ErrorKind::TooManyAtoms);
  CHECK(error_of([] { refine(uniform_measure(2, 1.0), 0); }) == ErrorKind::BadInput);
  auto bad = uniform_measure(2, 1.0);
  bad.masses[1] = 0.0;
  CHECK(error_of([&] { bad.validate(); }) == ErrorKind::BadInput);
  bad = uniform_measure(2, 1.0);
  bad.target(0, 0) = std::nan("");
  CHECK(error_of([&] { bad.validate(); }) == ErrorKind::BadInput);
  bad = uniform_measure(2, 1.0);
  bad.z = Eigen::VectorXd::Zero(1);
  CHECK(error_of([&] { bad.validate(); }) == ErrorKind::BadInput);
  RangeSample lone;
  lone.points = Eigen::MatrixXd::Zero(1, 1);
  lone.subsets = {0};
  CHECK(error_of([&] { convexity_defect(lone, 10, 1); }) == ErrorKind::TooFewPoints);
}

TEST_CASE("convexity_defect examples") {
  RangeSample s;
  s.points = Eigen::MatrixXd(1, 2);
  s.points << 0.0, 1.0;
  s.subsets = {0, 1};
  CHECK(convexity_defect(s, 100, 1) == 0.5);
  CHECK(convexity_defect(s, 1, 1) <= 0.5);  // sampled

  s.points << 0.3, 0.3;
  CHECK(convexity_defect(s, 100, 1) == 0.0);

  // Uniform atoms give the grid {0, m, ..., N m}.
  const auto grid = range_bruteforce(uniform_measure(6, 0.25));
  CHECK(convexity_defect(grid, 1'000'000, 1) == doctest::Approx(0.125));
}

TEST_CASE("convexity_defect agrees with a brute-force nearest point") {
  const auto s = range_bruteforce(random_measure(7, 3, 0, 41));
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i; j < s.size(); ++j) {
      const Eigen::VectorXd mid = (s.points.col(static_cast<Eigen::Index>(i)) + s.points.col(static_cast<Eigen::Index>(j))) / 2;
      worst = std::max(worst, nearest(s, mid));
    }
  CHECK(convexity_defect(s, s.size() * (s.size() + 1) / 2, 3) == worst);
  const double sampled = convexity_defect(s, 500, 3);
  CHECK(sampled <= worst);
  CHECK(sampled == convexity_defect(s, 500, 3));
}

TEST_CASE("refine") {
  const auto one = refine(uniform_measure(1, 1.0), 1);
  CHECK(one.atoms() == 2);
  CHECK(one.masses[0] == 0.5);
  CHECK(one.masses[1] == 0.5);

  const auto m = random_measure(3, 2, 1, 12);
  const auto r = refine(m, 3);
  CHECK(r.atoms() == 24);
  // Halving is exact, so pairwise sums over the children of each atom recover it exactly.
  auto fold = [](Eigen::MatrixXd inc) {
    while (inc.cols() > 3) {
      Eigen::MatrixXd next(inc.rows(), inc.cols() / 2);
      for (Eigen::Index c = 0; c < next.cols(); ++c) next.col(c) = inc.col(2 * c) + inc.col(2 * c + 1);
      inc = next;
    }
    return inc;
  };
  CHECK(fold(r.masses.transpose()) == m.masses.transpose());
  CHECK(fold(r.target_increments()) == m.target_increments());
  CHECK(fold(r.constraint_increments()) == m.constraint_increments());
  CHECK(r.z == m.z);
  for (int a = 0; a < 3; ++a) CHECK(r.target.col(8 * a + 5) == m.target.col(a));

  // The dyadic grid defect halves each round.
  double previous = convexity_defect(range_bruteforce(uniform_measure(3, 1.0)), 1'000'000, 1);
  CHECK(previous == 0.5);
  for (int rounds = 1; rounds <= 3; ++rounds) {
    const auto grid = range_bruteforce(refine(uniform_measure(3, 1.0), rounds), Enumeration::AtomClasses);
    const double d = convexity_defect(grid, 1'000'000, 1);
    CHECK(d == doctest::Approx(previous / 2));
    previous = d;
  }
}

TEST_CASE("refinement keeps every old point") {
  const auto m = random_measure(4, 2, 0, 77);
  const auto before = range_bruteforce(m);
  const auto after = range_bruteforce(refine(m, 1));
  for (std::size_t c = 0; c < before.size(); ++c)
    CHECK(nearest(after, before.points.col(static_cast<Eigen::Index>(c))) <= 1e-12);
}

TEST_CASE("atom classes give the subset point set") {
  const auto m = refine(random_measure(3, 2, 1, 8), 2);
  const auto subsets = range_bruteforce(m, Enumeration::Subsets);
  const auto classes = range_bruteforce(m, Enumeration::AtomClasses);
  CHECK(classes.size() == 125);
  for (std::size_t c = 0; c < subsets.size(); ++c)
    CHECK(nearest(classes, subsets.points.col(static_cast<Eigen::Index>(c))) <= 1e-12);
  const Eigen::MatrixXd inc = m.target_increments();
  for (std::size_t c = 0; c < classes.size(); ++c) {
    CHECK(nearest(subsets, classes.points.col(static_cast<Eigen::Index>(c))) <= 1e-12);
    CHECK((classes.points.col(static_cast<Eigen::Index>(c)) - direct_sum(inc, classes.subsets[c])).cwiseAbs().maxCoeff() <= 1e-12);
  }
  const double eta = max_constraint_increment(m);
  CHECK(constrained_range(m, eta, Enumeration::AtomClasses).size() > 0);
}

TEST_CASE("defect shrinks under refinement") {
  for (int n0 = 2; n0 <= 4; ++n0) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto m = random_measure(n0, 2, 0, seed * 10 + static_cast<std::uint64_t>(n0));
      const double bound = 2 * m.masses.maxCoeff();
      double previous = convexity_defect(range_bruteforce(m), 200000, seed);
      CHECK(previous <= bound);
      for (int rounds = 1; rounds <= 2; ++rounds) {
        const double d = convexity_defect(range_bruteforce(refine(m, rounds), Enumeration::AtomClasses), 200000, seed);
        CAPTURE(n0);
        CAPTURE(rounds);
        CHECK(d <= previous + 1e-12);
        CHECK(d <= bound);
        previous = d;
      }
    }
  }
}

TEST_CASE("extreme_solutions examples") {
  const auto cube = extreme_solutions(uniform_measure(3, 1.0));
  CHECK(cube.vertices.size() == 8);
  for (const auto& g : cube.vertices) CHECK(fractional_count(g) == 0);

  DiscreteVectorMeasure slice = uniform_measure(3, 1.0);
  slice.constraints = Eigen::MatrixXd::Ones(1, 3);
  slice.z = Eigen::VectorXd::Constant(1, 1.5);
  const auto hex = extreme_solutions(slice);
  CHECK(hex.vertices.size() == 6);
  for (const auto& g : hex.vertices) {
    CHECK(fractional_count(g) == 1);
    CHECK(g.sum() == doctest::Approx(1.5));
    CHECK(std::count(g.begin(), g.end(), 0.5) == 1);
  }

  slice.z[0] = 3.5;
  CHECK(error_of([&] { extreme_solutions(slice); }) == ErrorKind::Infeasible);

  const auto capped = extreme_solutions(uniform_measure(5, 1.0), 10);
  CHECK(capped.cap_exceeded);
  CHECK(capped.vertices.size() == 10);
}

TEST_CASE("extreme solutions have at most n fractional coordinates") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    CounterRng rng(CounterRng::derive(5, seed));
    const int atoms = static_cast<int>(rng.uniform_int(1, 8));
    const int n = static_cast<int>(rng.uniform_int(1, 3));
    const auto m = random_measure(atoms, 1, n, seed);
    const auto out = extreme_solutions(m);
    CHECK_FALSE(out.vertices.empty());
    const Eigen::MatrixXd a = m.constraint_increments();
    for (const auto& g : out.vertices) {
      CHECK(fractional_count(g) <= n);
      CHECK((a * g - m.z).cwiseAbs().maxCoeff() <= 1e-8);
      CHECK(g.minCoeff() >= 0.0);
      CHECK(g.maxCoeff() <= 1.0);
    }
  }
}

TEST_CASE("normalized traces of projections") {
  const auto id = projection_trace_range(ComplexMatrix::Identity(4, 4), 3, 100, 1, 32);
  for (Complex z : id.points) CHECK(std::abs(z - Complex(0.75)) <= 1e-14);
  CHECK(id.pass());

  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = 3;
  d(1, 1) = 2;
  d(2, 2) = 1;
  const auto r = projection_trace_range(d, 2, 20000, 11);
  CHECK(r.pass());
  for (Complex z : r.points) {
    CHECK(z.real() >= 1.0 - 1e-12);
    CHECK(z.real() <= 5.0 / 3 + 1e-12);
  }
  CHECK(error_of([&] { projection_trace_range(d, 4, 10, 1); }) == ErrorKind::BadRank);
}
