#pragma once

// Facial structure of the matrix interval {0 <= a <= 1} and its trace slices,
// majorization of eigenvalue lists, and T-transform (pinching) sequences.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "autoconv/matcore.hpp"

namespace autoconv {

/// Real weights sorted non-increasing.
class WeightVector {
 public:
  /// Throws Unsorted unless the values are non-increasing.
  explicit WeightVector(std::vector<double> values);

  static WeightVector sorted(std::vector<double> values);
  /// Sorted eigenvalues of a Hermitian matrix.
  static WeightVector from_hermitian(const ComplexMatrix& c);
  /// (1/k)(1, ..., 1, 0, ..., 0) with k ones: the weights whose c-range is the k-range.
  static WeightVector projection_spectrum(int n, int k);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

/// Replace (v_i, v_j) by (lambda v_i + (1 - lambda) v_j, (1 - lambda) v_i + lambda v_j).
struct PinchingStep {
  std::size_t i = 0;
  std::size_t j = 1;
  double lambda = 1.0;
};

/// True iff b is majorized by c: prefix sums of b never exceed those of c and the
/// totals agree, all within 1e-10. Throws LengthMismatch.
bool majorizes(const WeightVector& b, const WeightVector& c);

/// Applies one pinching. Components other than i and j are untouched; lambda = 1
/// is the identity and lambda = 0 swaps exactly. Throws IndexOutOfRange.
std::vector<double> apply_pinching(std::vector<double> v, const PinchingStep& step);

/// At most n - 1 pinchings taking c to b. Each step pairs the largest index i
/// with c_i > b_i and the next index j > i with c_j < b_j, moving the smaller of
/// the two gaps so one coordinate lands on its target. Throws NotMajorized.
std::vector<PinchingStep> pinching_sequence(const WeightVector& c, const WeightVector& b);

/// The six matrices exhibiting a three-dimensional face through a pinched point
/// U^dagger [b] U of a unitary orbit: A, A' = U^dagger [a] U, U^dagger [a'] U with
/// a' the (i, j) swap of a, and four matrices whose (i, j) blocks carry the
/// off-diagonal entries +-sqrt(t - t^2)(a_i - a_j) and +-i sqrt(t - t^2)(a_i - a_j).
struct PinchWitnesses {
  ComplexMatrix a, a_swapped, first, first_mirror, second, second_mirror;
  RealVector pinched;      // b: b_i = t a_i + (1-t) a_j, b_j = (1-t) a_i + t a_j
  ComplexMatrix midpoint;  // U^dagger [b] U

  std::array<const ComplexMatrix*, 6> all() const {
    return {&a, &a_swapped, &first, &first_mirror, &second, &second_mirror};
  }
};

/// Throws DegeneratePinch when a_i == a_j or t is not in (0, 1), and
/// IndexOutOfRange for bad indices.
PinchWitnesses pinch_witnesses(const RealVector& a, std::size_t i, std::size_t j, double t,
                               const ComplexMatrix& u);

/// Dimension of the affine span of the matrices, as a real vector space:
/// singular values of the stacked differences above threshold * (largest one).
int affine_rank(const std::vector<ComplexMatrix>& matrices, double threshold = 1e-8);

/// Eigenvalue clustering band: |lambda| < 1e-7 counts as 0, |lambda - 1| < 1e-7 as 1.
inline constexpr double kSpectralBand = 1e-7;

/// Face p + r K r of K = {0 <= x <= 1} generated by a point a.
struct MatrixFaceDescriptor {
  ComplexMatrix p;  // spectral projection onto eigenvalues near 1
  ComplexMatrix r;  // spectral projection onto eigenvalues strictly inside (0, 1)
  int rank_r = 0;
  int dimension = 0;  // real dimension rank_r^2 of the face
};

/// Throws NotInK when a is not Hermitian with spectrum in [-1e-9, 1 + 1e-9].
MatrixFaceDescriptor minimal_face_K(const ComplexMatrix& a);

/// True iff a is a rank-k projection. Throws NotInQk when a is outside
/// Q_k = {a in K : trace a = k} (spectrum band 1e-9, trace tolerance 1e-8).
bool extreme_point_test_Qk(const ComplexMatrix& a, int k);

/// Dimension of the minimal face of Q_k at a: 0 at a projection, otherwise
/// rank(r)^2 - 1 (the face p + rKr cut by the trace hyperplane).
int minimal_face_Qk_dimension(const ComplexMatrix& a, int k);

/// Random point of Q_k in a Haar basis with exactly `fractional` eigenvalues in
/// [0.05, 0.95], the rest 0 or 1. Throws BadInput when no such spectrum exists
/// (fractional == 1, or too many fractional eigenvalues for n and k).
ComplexMatrix random_qk_point(int n, int k, int fractional, std::uint64_t seed);

}  // namespace autoconv
