#pragma once

// k-numerical and c-numerical ranges of a complex matrix, computed through their
// support functions h(theta) = sum_i c_i lambda_i(H_theta), and checked against
// Monte Carlo samples of the defining orbits.

#include <cstdint>
#include <span>
#include <vector>

#include "autoconv/matcore.hpp"
#include "autoconv/spectral_faces.hpp"

namespace autoconv {

enum class RangeMode { K, C };

/// Which range: W_k (rank-k frames) or W_c (unitary orbit weighted by c).
struct RangeParameter {
  RangeMode mode = RangeMode::K;
  int k = 1;
  WeightVector weights{std::vector<double>{1.0}};

  static RangeParameter rank(int k) { return {RangeMode::K, k, WeightVector({1.0})}; }
  static RangeParameter weighted(WeightVector c) { return {RangeMode::C, 0, std::move(c)}; }
};

/// Support data at one angle. The witness is the attaining rank-k projection
/// (mode K) or the attaining unitary whose columns are eigenvectors of H_theta (mode C).
struct SupportPoint {
  double h = 0.0;
  Complex z;
  ComplexMatrix witness;
  bool flat = false;  // eigenvalue tie across a weight change: the support set is a segment
};

/// Eigenvalue gap below which an angle is flagged flat.
inline constexpr double kFlatGap = 1e-9;

/// h = mean of the k largest eigenvalues of H_theta, z = trace(b p)/k. Throws BadRank.
SupportPoint support_point_k(const ComplexMatrix& b, int k, double theta);

/// h = sum_i c_i lambda_i(H_theta), z = trace([c] u^dagger b u). Throws LengthMismatch.
SupportPoint support_point_c(const ComplexMatrix& b, const WeightVector& c, double theta);

SupportPoint support_point(const ComplexMatrix& b, const RangeParameter& param, double theta);

struct BoundarySupportCurve {
  ComplexMatrix matrix;
  RangeParameter param;
  std::vector<double> angles;
  std::vector<Complex> directions;  // e^{i theta}
  std::vector<double> support_values;
  std::vector<Complex> support_points;
  std::vector<ComplexMatrix> witnesses;  // one per angle, or empty when stripped
  std::vector<bool> flat;
  std::vector<Complex> polygon;  // vertices of the intersection of supporting half-planes

  std::size_t size() const { return angles.size(); }
};

inline constexpr int kDefaultAngles = 720;

/// Support function on theta_j = 2 pi j / m_angles. Angles are evaluated in
/// parallel and assembled by index. Throws BadInput when m_angles < 8.
BoundarySupportCurve boundary_polygon(const ComplexMatrix& b, const RangeParameter& param,
                                      int m_angles = kDefaultAngles);

/// max_j <z, dir_j> - scale * h_j; positive when z is outside the support polygon.
double support_violation(const BoundarySupportCurve& curve, Complex z, double scale = 1.0);

/// Euclidean distance from z to the support polygon (0 inside).
double distance_to_support_polygon(const BoundarySupportCurve& curve, Complex z);

/// Shoelace area of a polygon given counter-clockwise.
double polygon_area(std::span<const Complex> polygon);

/// Points of the range from random orbit elements: mode K takes the first k
/// columns of a Haar unitary as the frame and emits (1/k) sum <b x_j, x_j>;
/// mode C emits trace([c] u^dagger b u). Sample s uses its own derived stream.
std::vector<Complex> sample_range(const ComplexMatrix& b, const RangeParameter& param,
                                  std::size_t n_samples, std::uint64_t seed);

struct RegionReport {
  std::size_t n_samples = 0;
  std::size_t n_outside = 0;
  double max_violation = 0.0;
  std::size_t n_midpoints = 0;
  double midpoint_defect = 0.0;
  double tolerance = 0.0;

  bool pass() const { return n_outside == 0 && midpoint_defect <= tolerance; }
};

/// Containment of every sample in the support polygon, and of the midpoints of
/// `n_midpoints` random sample pairs (seeded).
RegionReport certify_convexity(std::span<const Complex> samples, const BoundarySupportCurve& curve,
                               double tol, std::uint64_t seed, std::size_t n_midpoints = 10000);

/// Re-evaluates every support point from its stored witness and checks the
/// witness is an extreme point of the parameter set (a rank-k projection or a
/// unitary). Throws MissingWitness when the curve carries no witnesses.
bool attainment_check(const BoundarySupportCurve& curve);

}  // namespace autoconv
