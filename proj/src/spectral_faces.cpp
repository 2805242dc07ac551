#include "autoconv/spectral_faces.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "autoconv/error.hpp"
#include "autoconv/rng.hpp"

namespace autoconv {

namespace {

constexpr double kMajorizationTolerance = 1e-10;
constexpr double kIntervalBand = 1e-9;
constexpr double kTraceTolerance = 1e-8;

void require_interval(const SpectralDecomposition& s, ErrorKind kind) {
  const Eigen::Index n = s.eigenvalues.size();
  if (s.eigenvalues[0] > 1.0 + kIntervalBand || s.eigenvalues[n - 1] < -kIntervalBand) {
    throw Error(kind, "spectrum [" + std::to_string(s.eigenvalues[n - 1]) + ", " +
                          std::to_string(s.eigenvalues[0]) + "] leaves [0, 1]");
  }
}

SpectralDecomposition interval_spectrum(const ComplexMatrix& a, ErrorKind kind) {
  if (a.rows() != a.cols() || a.rows() < 1) throw Error(kind, "expected a square matrix");
  if (hermitian_defect(a) > kHermitianTolerance) throw Error(kind, "matrix is not Hermitian");
  auto s = hermitian_eig(a);
  require_interval(s, kind);
  return s;
}

void require_in_Qk(const ComplexMatrix& a, int k, const SpectralDecomposition& s) {
  if (k < 1 || k > a.rows()) throw Error(ErrorKind::NotInQk, "rank k outside [1, n]");
  const double trace = s.eigenvalues.sum();
  if (std::abs(trace - k) > kTraceTolerance) {
    throw Error(ErrorKind::NotInQk, "trace " + std::to_string(trace) + " differs from k = " +
                                        std::to_string(k));
  }
}

}  // namespace

WeightVector::WeightVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorKind::LengthMismatch, "empty weight vector");
  for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
    if (!(values_[i] >= values_[i + 1])) {
      throw Error(ErrorKind::Unsorted, "weights must be non-increasing (index " +
                                           std::to_string(i) + ")");
    }
  }
}

WeightVector WeightVector::sorted(std::vector<double> values) {
  std::sort(values.begin(), values.end(), std::greater<>());
  return WeightVector(std::move(values));
}

WeightVector WeightVector::from_hermitian(const ComplexMatrix& c) {
  const auto s = hermitian_eig(c);
  return WeightVector(std::vector<double>(s.eigenvalues.begin(), s.eigenvalues.end()));
}

WeightVector WeightVector::projection_spectrum(int n, int k) {
  if (k < 1 || k > n) throw Error(ErrorKind::BadRank, "rank k outside [1, n]");
  std::vector<double> values(static_cast<std::size_t>(n), 0.0);
  std::fill_n(values.begin(), k, 1.0 / k);
  return WeightVector(std::move(values));
}

bool majorizes(const WeightVector& b, const WeightVector& c) {
  if (b.size() != c.size()) throw Error(ErrorKind::LengthMismatch, "weight vectors differ in length");
  double prefix_b = 0.0, prefix_c = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    prefix_b += b[i];
    prefix_c += c[i];
    if (prefix_b > prefix_c + kMajorizationTolerance) return false;
  }
  return std::abs(prefix_b - prefix_c) <= kMajorizationTolerance;
}

std::vector<double> apply_pinching(std::vector<double> v, const PinchingStep& step) {
  if (step.i >= v.size() || step.j >= v.size() || step.i == step.j) {
    throw Error(ErrorKind::IndexOutOfRange, "pinching indices (" + std::to_string(step.i) + ", " +
                                                std::to_string(step.j) + ") invalid for length " +
                                                std::to_string(v.size()));
  }
  if (!(step.lambda >= 0.0 && step.lambda <= 1.0)) {
    throw Error(ErrorKind::BadInput, "pinching weight outside [0, 1]");
  }
  if (step.lambda == 1.0) return v;
  if (step.lambda == 0.0) {
    std::swap(v[step.i], v[step.j]);
    return v;
  }
  // Transfer form: the same delta leaves i and enters j.
  const double delta = (1.0 - step.lambda) * (v[step.i] - v[step.j]);
  v[step.i] -= delta;
  v[step.j] += delta;
  return v;
}

std::vector<PinchingStep> pinching_sequence(const WeightVector& c, const WeightVector& b) {
  if (!majorizes(b, c)) throw Error(ErrorKind::NotMajorized, "b is not majorized by c");
  const std::size_t n = c.size();
  double scale = 1.0;
  for (double x : c.values()) scale = std::max(scale, std::abs(x));
  const double eps = 1e-12 * scale;

  std::vector<double> x = c.values();
  const auto& target = b.values();
  std::vector<PinchingStep> steps;
  for (;;) {
    std::size_t i = n;
    for (std::size_t m = n; m-- > 0;) {
      if (x[m] - target[m] > eps) {
        i = m;
        break;
      }
    }
    if (i == n) break;
    std::size_t j = i + 1;
    while (j < n && !(target[j] - x[j] > eps)) ++j;
    if (j == n) break;  // residue below eps
    if (steps.size() + 1 > n - 1) throw std::logic_error("pinching_sequence exceeded n - 1 steps");
    const double delta = std::min(x[i] - target[i], target[j] - x[j]);
    const PinchingStep step{i, j, 1.0 - delta / (x[i] - x[j])};
    x = apply_pinching(std::move(x), step);
    steps.push_back(step);
  }
  return steps;
}

PinchWitnesses pinch_witnesses(const RealVector& a, std::size_t i, std::size_t j, double t,
                               const ComplexMatrix& u) {
  const auto n = static_cast<std::size_t>(a.size());
  if (i >= n || j >= n || i == j) throw Error(ErrorKind::IndexOutOfRange, "pinch indices invalid");
  if (u.rows() != a.size() || u.cols() != a.size()) {
    throw Error(ErrorKind::LengthMismatch, "unitary size differs from the eigenvalue list");
  }
  if (!(t > 0.0 && t < 1.0)) throw Error(ErrorKind::DegeneratePinch, "t must lie in (0, 1)");
  const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
  if (a[ii] == a[jj]) throw Error(ErrorKind::DegeneratePinch, "a_i equals a_j");

  RealVector swapped = a;
  std::swap(swapped[ii], swapped[jj]);
  RealVector pinched = a;
  pinched[ii] = t * a[ii] + (1.0 - t) * a[jj];
  pinched[jj] = (1.0 - t) * a[ii] + t * a[jj];
  const double off = std::sqrt(t - t * t) * (a[ii] - a[jj]);

  auto conjugate = [&](const ComplexMatrix& m) -> ComplexMatrix { return u.adjoint() * m * u; };
  auto with_block = [&](Complex upper) {
    ComplexMatrix m = diagonal(pinched);
    m(ii, jj) = upper;
    m(jj, ii) = std::conj(upper);
    return conjugate(m);
  };
  const Complex imag(0.0, 1.0);

  PinchWitnesses w;
  w.a = conjugate(diagonal(a));
  w.a_swapped = conjugate(diagonal(swapped));
  w.first = with_block(off);
  w.first_mirror = with_block(-off);
  w.second = with_block(imag * off);
  w.second_mirror = with_block(-imag * off);
  w.pinched = pinched;
  w.midpoint = conjugate(diagonal(pinched));
  return w;
}

int affine_rank(const std::vector<ComplexMatrix>& matrices, double threshold) {
  if (matrices.size() < 2) return 0;
  const Eigen::Index entries = matrices[0].size();
  Eigen::MatrixXd stacked(static_cast<Eigen::Index>(matrices.size() - 1), 2 * entries);
  for (std::size_t m = 1; m < matrices.size(); ++m) {
    const ComplexMatrix diff = matrices[m] - matrices[0];
    for (Eigen::Index e = 0; e < entries; ++e) {
      stacked(static_cast<Eigen::Index>(m - 1), 2 * e) = diff.data()[e].real();
      stacked(static_cast<Eigen::Index>(m - 1), 2 * e + 1) = diff.data()[e].imag();
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
  const auto& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma[0] == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index s = 0; s < sigma.size(); ++s)
    if (sigma[s] >= threshold * sigma[0]) ++rank;
  return rank;
}

MatrixFaceDescriptor minimal_face_K(const ComplexMatrix& a) {
  const auto s = interval_spectrum(a, ErrorKind::NotInK);
  const Eigen::Index n = a.rows();
  std::vector<Eigen::Index> upper, middle, support;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = s.eigenvalues[i];
    if (lambda >= 1.0 - kSpectralBand) upper.push_back(i);
    else if (lambda >= kSpectralBand) middle.push_back(i);
    if (lambda >= kSpectralBand) support.push_back(i);
  }
  auto projection = [&](const std::vector<Eigen::Index>& cols) {
    ComplexMatrix basis(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
      basis.col(static_cast<Eigen::Index>(c)) = s.eigenvectors.col(cols[c]);
    return cols.empty() ? ComplexMatrix(ComplexMatrix::Zero(n, n)) : projection_onto(basis);
  };

  MatrixFaceDescriptor face;
  face.p = projection(upper);
  face.r = projection(middle);
  face.rank_r = static_cast<int>(middle.size());
  face.dimension = face.rank_r * face.rank_r;

  // a lies in p + rKr: p <= a <= q with q = p + r.
  const ComplexMatrix q = projection(support);
  const double lower_gap = (face.p * a - face.p).cwiseAbs().maxCoeff();
  const double upper_gap = (a * q - a).cwiseAbs().maxCoeff();
  if (lower_gap > 1e-6 || upper_gap > 1e-6) {
    throw Error(ErrorKind::NotInK, "face projections do not bracket the matrix");
  }
  return face;
}

bool extreme_point_test_Qk(const ComplexMatrix& a, int k) {
  const auto s = interval_spectrum(a, ErrorKind::NotInQk);
  require_in_Qk(a, k, s);
  const double idempotence = (a * a - a).cwiseAbs().maxCoeff();
  const auto large = std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(),
                                   [](double x) { return x >= 0.5; });
  return idempotence <= 1e-8 && large == k;
}

int minimal_face_Qk_dimension(const ComplexMatrix& a, int k) {
  const auto s = interval_spectrum(a, ErrorKind::NotInQk);
  require_in_Qk(a, k, s);
  const auto face = minimal_face_K(a);
  if (face.rank_r == 0) return 0;
  if (face.rank_r == 1) {
    // One eigenvalue strictly inside (0, 1) cannot coexist with an integer trace.
    throw Error(ErrorKind::NotInQk, "a single fractional eigenvalue contradicts trace k");
  }
  return face.rank_r * face.rank_r - 1;
}

ComplexMatrix random_qk_point(int n, int k, int fractional, std::uint64_t seed) {
  if (k < 1 || k > n || fractional < 0 || fractional > n || fractional == 1) {
    throw Error(ErrorKind::BadInput, "no Q_k spectrum with that many fractional eigenvalues");
  }
  CounterRng rng(seed);
  // The fractional block sums to an integer s in [1, fractional - 1]; k - s ones fill the rest.
  std::vector<int> totals;
  for (int s = 1; s < fractional; ++s)
    if (k - s >= 0 && k - s + fractional <= n) totals.push_back(s);
  if (fractional == 0) totals.push_back(0);
  if (totals.empty()) throw Error(ErrorKind::BadInput, "no Q_k spectrum with that many fractional eigenvalues");
  const int s = totals[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(totals.size()) - 1))];

  RealVector spectrum = RealVector::Zero(n);
  for (int i = 0; i < k - s; ++i) spectrum[i] = 1.0;
  if (fractional > 0) {
    RealVector dev(fractional);
    for (auto& x : dev) x = rng.normal();
    dev.array() -= dev.mean();
    const double mean = static_cast<double>(s) / fractional;
    const double room = std::min(mean, 1.0 - mean) - 0.05;
    const double largest = dev.cwiseAbs().maxCoeff();
    if (largest > 0.0) dev *= rng.uniform(0.1, 1.0) * room / largest;
    spectrum.segment(k - s, fractional) = dev.array() + mean;
  }
  const ComplexMatrix u = haar_unitary(n, CounterRng::derive(seed, 1));
  ComplexMatrix a = u.adjoint() * diagonal(spectrum) * u;
  return (a + a.adjoint()) / 2.0;
}

}  // namespace autoconv
