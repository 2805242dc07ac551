#include "autoconv/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "autoconv/error.hpp"
#include "autoconv/rng.hpp"

namespace autoconv {

namespace {

void require_square(const ComplexMatrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw Error(ErrorKind::ShapeMismatch, "expected a non-empty square matrix, got " +
                                              std::to_string(a.rows()) + "x" +
                                              std::to_string(a.cols()));
  }
}

double off_diagonal_mass(const ComplexMatrix& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

// Zeroes a(p, q) with the unitary W = diag(1, e^{-i phi}) * [[c, s], [-s, c]]
// acting on coordinates (p, q): a <- W^dagger a W, v <- v W.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, Eigen::Index p, Eigen::Index q) {
  const Complex b = a(p, q);
  const double magnitude = std::abs(b);
  if (magnitude == 0.0) return;
  const Complex phase = std::conj(b) / magnitude;  // e^{-i phi}
  const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * magnitude);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const Complex w00 = c, w01 = s, w10 = -s * phase, w11 = c * phase;
  const Eigen::Index n = a.rows();
  for (Eigen::Index r = 0; r < n; ++r) {
    const Complex x = a(r, p), y = a(r, q);
    a(r, p) = x * w00 + y * w10;
    a(r, q) = x * w01 + y * w11;
  }
  for (Eigen::Index col = 0; col < n; ++col) {
    const Complex x = a(p, col), y = a(q, col);
    a(p, col) = std::conj(w00) * x + std::conj(w10) * y;
    a(q, col) = std::conj(w01) * x + std::conj(w11) * y;
  }
  a(p, q) = a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
  for (Eigen::Index r = 0; r < n; ++r) {
    const Complex x = v(r, p), y = v(r, q);
    v(r, p) = x * w00 + y * w10;
    v(r, q) = x * w01 + y * w11;
  }
}

ComplexMatrix gaussian_matrix(int n, CounterRng& rng) {
  ComplexMatrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(re, im) * std::sqrt(0.5);
    }
  return g;
}

}  // namespace

double hermitian_defect(const ComplexMatrix& h) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

double max_row_sum_norm(const ComplexMatrix& a) {
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

SpectralDecomposition hermitian_eig(const ComplexMatrix& h, int max_sweeps) {
  require_square(h);
  const double defect = hermitian_defect(h);
  if (!(defect <= kHermitianTolerance)) {
    throw Error(ErrorKind::NotHermitian,
                "max |H - H^dagger| = " + std::to_string(defect) + " exceeds 1e-10");
  }
  const Eigen::Index n = h.rows();
  ComplexMatrix a = (h + h.adjoint()) / 2.0;
  ComplexMatrix v = ComplexMatrix::Identity(n, n);

  const double scale = a.norm();
  const double target = 1e-13 * scale;
  int sweeps = 0;
  while (off_diagonal_mass(a) > target) {
    if (sweeps == max_sweeps) {
      throw Error(ErrorKind::NoConvergence,
                  "Jacobi did not converge after " + std::to_string(sweeps) + " sweeps");
    }
    for (Eigen::Index p = 0; p + 1 < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
    ++sweeps;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return a(x, x).real() > a(y, y).real();
  });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  out.sweeps = sweeps;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto src = order[static_cast<std::size_t>(i)];
    out.eigenvalues[i] = a(src, src).real();
    out.eigenvectors.col(i) = v.col(src);
  }
  return out;
}

ComplexMatrix rotated_hermitian_part(const ComplexMatrix& a, double theta) {
  require_square(a);
  const Complex phase = std::polar(1.0, -theta);
  ComplexMatrix h = (phase * a + std::conj(phase) * a.adjoint()) / 2.0;
  for (Eigen::Index i = 0; i < h.rows(); ++i) h(i, i) = h(i, i).real();
  return h;
}

ComplexMatrix haar_unitary(int n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::ShapeMismatch, "dimension must be positive");
  CounterRng rng(seed);
  const ComplexMatrix g = gaussian_matrix(n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const double magnitude = std::abs(r(j, j));
    const Complex phase = magnitude > 0.0 ? r(j, j) / magnitude : Complex(1.0);
    q.col(j) *= phase;
  }
  return q;
}

ComplexMatrix projection_onto(const ComplexMatrix& columns) {
  ComplexMatrix p = columns * columns.adjoint();
  p = (p + p.adjoint()) / 2.0;
  return p;
}

ComplexMatrix random_rank_k_projection(int n, int k, std::uint64_t seed) {
  if (k < 1 || k > n) {
    throw Error(ErrorKind::BadRank,
                "rank " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
  const ComplexMatrix u = haar_unitary(n, seed);
  return projection_onto(u.leftCols(k));
}

ComplexMatrix random_complex(int n, std::uint64_t seed) {
  CounterRng rng(seed);
  return gaussian_matrix(n, rng);
}

ComplexMatrix random_hermitian(int n, std::uint64_t seed) {
  const ComplexMatrix g = random_complex(n, seed);
  ComplexMatrix h = (g + g.adjoint()) / 2.0;
  for (int i = 0; i < n; ++i) h(i, i) = h(i, i).real();
  return h;
}

ComplexMatrix diagonal(const RealVector& values) {
  return values.cast<Complex>().asDiagonal();
}

double unitarity_defect(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

double projection_defect(const ComplexMatrix& p) {
  return std::max((p * p - p).cwiseAbs().maxCoeff(), hermitian_defect(p));
}

}  // namespace autoconv
