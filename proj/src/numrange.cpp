#include "autoconv/numrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "autoconv/error.hpp"
#include "autoconv/parallel.hpp"
#include "autoconv/rng.hpp"

namespace autoconv {

namespace {

constexpr double kWitnessTolerance = 1e-8;
constexpr double kReproductionTolerance = 1e-10;

// trace([c] u^dagger b u) = sum_i c_i <b u_i, u_i>.
Complex weighted_orbit_point(const ComplexMatrix& b, const std::vector<double>& c,
                             const ComplexMatrix& u) {
  Complex z = 0.0;
  for (Eigen::Index i = 0; i < u.cols(); ++i) {
    const double weight = c[static_cast<std::size_t>(i)];
    if (weight == 0.0) continue;
    z += weight * u.col(i).dot(b * u.col(i));
  }
  return z;
}

bool has_flat_gap(const RealVector& eigenvalues, const std::vector<double>& c) {
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    if (c[i] > c[i + 1] && eigenvalues[ii] - eigenvalues[ii + 1] <= kFlatGap) return true;
  }
  return false;
}

double dot2(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }

double segment_distance(Complex z, Complex a, Complex b) {
  const Complex ab = b - a;
  const double length2 = std::norm(ab);
  const double t = length2 > 0.0 ? std::clamp(dot2(z - a, ab) / length2, 0.0, 1.0) : 0.0;
  return std::abs(z - (a + t * ab));
}

}  // namespace

SupportPoint support_point_k(const ComplexMatrix& b, int k, double theta) {
  const auto n = static_cast<int>(b.rows());
  if (k < 1 || k > n) {
    throw Error(ErrorKind::BadRank, "rank " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
  const auto s = hermitian_eig(rotated_hermitian_part(b, theta));
  SupportPoint out;
  out.h = s.eigenvalues.head(k).sum() / k;
  out.witness = projection_onto(s.eigenvectors.leftCols(k));
  out.z = (b * out.witness).trace() / static_cast<double>(k);
  out.flat = k < n && s.eigenvalues[k - 1] - s.eigenvalues[k] <= kFlatGap;
  return out;
}

SupportPoint support_point_c(const ComplexMatrix& b, const WeightVector& c, double theta) {
  if (static_cast<Eigen::Index>(c.size()) != b.rows()) {
    throw Error(ErrorKind::LengthMismatch, "weights have length " + std::to_string(c.size()) +
                                               " but the matrix is " + std::to_string(b.rows()) + "x" +
                                               std::to_string(b.rows()));
  }
  const auto s = hermitian_eig(rotated_hermitian_part(b, theta));
  SupportPoint out;
  for (std::size_t i = 0; i < c.size(); ++i) out.h += c[i] * s.eigenvalues[static_cast<Eigen::Index>(i)];
  out.witness = s.eigenvectors;
  out.z = weighted_orbit_point(b, c.values(), s.eigenvectors);
  out.flat = has_flat_gap(s.eigenvalues, c.values());
  return out;
}

SupportPoint support_point(const ComplexMatrix& b, const RangeParameter& param, double theta) {
  return param.mode == RangeMode::K ? support_point_k(b, param.k, theta)
                                    : support_point_c(b, param.weights, theta);
}

BoundarySupportCurve boundary_polygon(const ComplexMatrix& b, const RangeParameter& param, int m_angles) {
  if (m_angles < 8) throw Error(ErrorKind::BadInput, "at least 8 angles are required");
  const auto m = static_cast<std::size_t>(m_angles);
  BoundarySupportCurve curve;
  curve.matrix = b;
  curve.param = param;
  curve.angles.resize(m);
  curve.directions.resize(m);
  curve.support_values.resize(m);
  curve.support_points.resize(m);
  curve.witnesses.resize(m);
  std::vector<char> flat(m, 0);
  parallel_for(m, [&](std::size_t j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / m_angles;
    auto point = support_point(b, param, theta);
    curve.angles[j] = theta;
    curve.directions[j] = std::polar(1.0, theta);
    curve.support_values[j] = point.h;
    curve.support_points[j] = point.z;
    curve.witnesses[j] = std::move(point.witness);
    flat[j] = point.flat;
  });
  curve.flat.assign(flat.begin(), flat.end());

  curve.polygon.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t next = (j + 1) % m;
    const Complex u = curve.directions[j], v = curve.directions[next];
    const double det = u.real() * v.imag() - u.imag() * v.real();
    const double hu = curve.support_values[j], hv = curve.support_values[next];
    curve.polygon[j] = Complex((hu * v.imag() - hv * u.imag()) / det, (u.real() * hv - v.real() * hu) / det);
  }
  return curve;
}

double support_violation(const BoundarySupportCurve& curve, Complex z, double scale) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < curve.size(); ++j)
    worst = std::max(worst, dot2(z, curve.directions[j]) - scale * curve.support_values[j]);
  return worst;
}

double distance_to_support_polygon(const BoundarySupportCurve& curve, Complex z) {
  if (support_violation(curve, z) <= 0.0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const auto& poly = curve.polygon;
  for (std::size_t j = 0; j < poly.size(); ++j)
    best = std::min(best, segment_distance(z, poly[j], poly[(j + 1) % poly.size()]));
  return best;
}

double polygon_area(std::span<const Complex> polygon) {
  double twice = 0.0;
  for (std::size_t j = 0; j < polygon.size(); ++j) {
    const Complex a = polygon[j], b = polygon[(j + 1) % polygon.size()];
    twice += a.real() * b.imag() - b.real() * a.imag();
  }
  return twice / 2.0;
}

std::vector<Complex> sample_range(const ComplexMatrix& b, const RangeParameter& param,
                                  std::size_t n_samples, std::uint64_t seed) {
  const auto n = static_cast<int>(b.rows());
  if (param.mode == RangeMode::K && (param.k < 1 || param.k > n)) {
    throw Error(ErrorKind::BadRank, "rank outside [1, n]");
  }
  if (param.mode == RangeMode::C && static_cast<int>(param.weights.size()) != n) {
    throw Error(ErrorKind::LengthMismatch, "weights and matrix differ in size");
  }
  const std::vector<double> weights = param.mode == RangeMode::K
                                          ? WeightVector::projection_spectrum(n, param.k).values()
                                          : param.weights.values();
  std::vector<Complex> out(n_samples);
  parallel_for(n_samples, [&](std::size_t s) {
    const ComplexMatrix u = haar_unitary(n, CounterRng::derive(seed, s));
    out[s] = weighted_orbit_point(b, weights, u);
  });
  return out;
}

RegionReport certify_convexity(std::span<const Complex> samples, const BoundarySupportCurve& curve,
                               double tol, std::uint64_t seed, std::size_t n_midpoints) {
  RegionReport report;
  report.n_samples = samples.size();
  report.tolerance = tol;
  std::vector<double> violation(samples.size());
  parallel_for(samples.size(), [&](std::size_t s) { violation[s] = support_violation(curve, samples[s]); });
  for (double v : violation) {
    if (v > tol) ++report.n_outside;
    report.max_violation = std::max(report.max_violation, v);
  }
  if (samples.empty()) return report;

  CounterRng rng(seed);
  std::vector<Complex> midpoints(n_midpoints);
  for (auto& mid : midpoints) {
    const auto i = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(samples.size()) - 1));
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(samples.size()) - 1));
    mid = (samples[i] + samples[j]) / 2.0;
  }
  std::vector<double> defect(n_midpoints);
  parallel_for(n_midpoints, [&](std::size_t s) { defect[s] = distance_to_support_polygon(curve, midpoints[s]); });
  report.n_midpoints = n_midpoints;
  for (double d : defect) report.midpoint_defect = std::max(report.midpoint_defect, d);
  return report;
}

bool attainment_check(const BoundarySupportCurve& curve) {
  if (curve.witnesses.size() != curve.size() || curve.size() == 0) {
    throw Error(ErrorKind::MissingWitness, "curve carries no attaining witnesses");
  }
  const ComplexMatrix& b = curve.matrix;
  const double scale = 1.0 + max_row_sum_norm(b);
  for (std::size_t j = 0; j < curve.size(); ++j) {
    const ComplexMatrix& w = curve.witnesses[j];
    if (w.rows() != b.rows() || w.cols() != b.cols()) return false;
    Complex z;
    if (curve.param.mode == RangeMode::K) {
      const int k = curve.param.k;
      if (projection_defect(w) > kWitnessTolerance) return false;
      if (std::abs(w.trace() - Complex(k)) > kWitnessTolerance) return false;
      z = (b * w).trace() / static_cast<double>(k);
    } else {
      if (unitarity_defect(w) > kWitnessTolerance) return false;
      z = weighted_orbit_point(b, curve.param.weights.values(), w);
    }
    if (std::abs(z - curve.support_points[j]) > kReproductionTolerance) return false;
    if (std::abs(dot2(z, curve.directions[j]) - curve.support_values[j]) > kReproductionTolerance * scale)
      return false;
  }
  return true;
}

}  // namespace autoconv
