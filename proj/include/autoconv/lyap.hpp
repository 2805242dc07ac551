#pragma once

// Atomized vector measures: exhaustive ranges, constrained ranges, atom
// refinement toward the non-atomic limit, and box-polytope vertices.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "autoconv/matcore.hpp"

namespace autoconv::lyap {

/// Atoms a = 0..N-1 with nu-weights `masses`; mu_i(A) = sum_{a in A} masses[a] * target(i, a)
/// and nu_j(A) = sum_{a in A} masses[a] * constraints(j, a).
struct DiscreteVectorMeasure {
  Eigen::VectorXd masses;
  Eigen::MatrixXd target;       // k x N
  Eigen::MatrixXd constraints;  // n x N (n may be 0)
  Eigen::VectorXd z;            // n

  int atoms() const { return static_cast<int>(masses.size()); }
  int target_dim() const { return static_cast<int>(target.rows()); }
  int constraint_count() const { return static_cast<int>(constraints.rows()); }

  /// Throws BadInput on non-positive masses, non-finite densities or shape errors.
  void validate() const;

  /// masses[a] * target(:, a): the contribution of atom a to mu.
  Eigen::MatrixXd target_increments() const;
  Eigen::MatrixXd constraint_increments() const;
};

enum class Provenance { Exhaustive, Filtered, LpVertex };

/// How subsets are enumerated. `Subsets` emits one point per subset (a multiset
/// when atoms coincide); `AtomClasses` merges atoms with identical mass and
/// densities and emits one point per count vector, which is the same point set
/// at a fraction of the cost for refined measures.
enum class Enumeration { Subsets, AtomClasses };

struct RangeSample {
  Eigen::MatrixXd points;                 // k x count, one column per point
  std::vector<std::uint64_t> subsets;     // generating subset of each point (bit a = atom a)
  Provenance provenance = Provenance::Exhaustive;
  double eta = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(points.cols()); }
};

/// Largest atom count for subset enumeration, and largest point count for class enumeration.
inline constexpr int kMaxEnumeratedAtoms = 22;

/// mu(A) for every subset A (Gray-code order with compensated running sums).
/// Throws TooManyAtoms.
RangeSample range_bruteforce(const DiscreteVectorMeasure& m, Enumeration how = Enumeration::Subsets);

/// Subsets with |nu_j(A) - z_j| <= eta for all j. Throws TooManyAtoms.
RangeSample constrained_range(const DiscreteVectorMeasure& m, double eta,
                              Enumeration how = Enumeration::Subsets);

/// max_{j, a} |masses[a] * constraints(j, a)|: the default constraint tolerance.
double max_constraint_increment(const DiscreteVectorMeasure& m);

/// Max over pairs (p, q) of the distance from (p + q)/2 to the nearest point of S.
/// Pairs are drawn at random (seeded) unless all |S|(|S|+1)/2 unordered pairs fit
/// in `n_pairs`, in which case every pair is evaluated. Throws TooFewPoints.
double convexity_defect(const RangeSample& s, std::size_t n_pairs, std::uint64_t seed);

/// Splits every atom into two atoms of half the mass with the same densities,
/// `rounds` times. Atom a becomes atoms 2a and 2a + 1.
DiscreteVectorMeasure refine(const DiscreteVectorMeasure& m, int rounds);

struct ExtremeSolutions {
  std::vector<Eigen::VectorXd> vertices;
  bool cap_exceeded = false;
  std::size_t candidates = 0;
};

/// Vertices of {g in [0,1]^N : sum_a g_a masses[a] constraints(j, a) = z_j}, by
/// enumerating column bases of the constraint matrix and 0/1 values for the
/// remaining coordinates. Throws Infeasible when no vertex exists.
ExtremeSolutions extreme_solutions(const DiscreteVectorMeasure& m, std::size_t candidate_cap = 1'000'000);

/// Coordinates of g inside [1e-9, 1 - 1e-9].
int fractional_count(const Eigen::VectorXd& g);

struct ProjectionRangeReport {
  std::vector<Complex> points;  // trace(p b) / n
  std::size_t n_outside = 0;
  double max_violation = 0.0;
  double tolerance = 1e-8;

  bool pass() const { return n_outside == 0; }
};

/// Normalized traces trace(p b)/n over random rank-k projections p, checked
/// against the support polygon of the k-numerical range scaled by k/n.
ProjectionRangeReport projection_trace_range(const ComplexMatrix& b, int k, std::size_t n_samples,
                                             std::uint64_t seed, int m_angles = 720);

/// Random measure with masses in [0.5, 1.5] and densities normalized so that
/// the absolute densities of each atom sum to 1 (Radon-Nikodym derivatives with
/// respect to the total variation). z is nu(A0) for a random subset A0.
DiscreteVectorMeasure random_measure(int atoms, int target_dim, int constraint_count, std::uint64_t seed);

}  // namespace autoconv::lyap
