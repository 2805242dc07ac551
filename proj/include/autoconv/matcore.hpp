#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace autoconv {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Eigensystem of a Hermitian matrix with eigenvalues sorted non-increasing;
/// column i of `eigenvectors` belongs to `eigenvalues[i]`.
struct SpectralDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
  int sweeps = 0;
};

/// Absolute tolerance on max |H - H^dagger| entry accepted as Hermitian.
inline constexpr double kHermitianTolerance = 1e-10;

/// Largest |entry| of H - H^dagger.
double hermitian_defect(const ComplexMatrix& h);

/// Max absolute row sum (induced infinity norm).
double max_row_sum_norm(const ComplexMatrix& a);

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Throws NotHermitian when the symmetry check fails and NoConvergence when the
/// off-diagonal mass does not drop below 1e-13 * ||H||_F within the sweep bound.
/// The input is symmetrized as (H + H^dagger)/2 before iterating. Equal
/// eigenvalues keep the order of their diagonal positions at convergence.
SpectralDecomposition hermitian_eig(const ComplexMatrix& h, int max_sweeps = 100);

/// H_theta = (e^{-i theta} A + e^{i theta} A^dagger) / 2.
///
/// For Hermitian q, trace(H_theta q) = Re(e^{-i theta} trace(A q)); the support
/// function of any trace-image set in direction theta is therefore an
/// eigenvalue problem for H_theta.
ComplexMatrix rotated_hermitian_part(const ComplexMatrix& a, double theta);

/// Haar-distributed unitary: QR of a standard complex Gaussian matrix with the
/// diagonal of R normalized to positive reals. Identical seeds give identical output.
ComplexMatrix haar_unitary(int n, std::uint64_t seed);

/// Projection onto the span of k Haar-random orthonormal vectors.
ComplexMatrix random_rank_k_projection(int n, int k, std::uint64_t seed);

/// P = V V^dagger for the given orthonormal columns.
ComplexMatrix projection_onto(const ComplexMatrix& columns);

/// Random Hermitian matrix with i.i.d. Gaussian entries (GUE scaling 1/2 on the
/// off-diagonal real and imaginary parts).
ComplexMatrix random_hermitian(int n, std::uint64_t seed);

/// Random complex matrix with i.i.d. standard complex Gaussian entries.
ComplexMatrix random_complex(int n, std::uint64_t seed);

/// diag(values) as a complex matrix.
ComplexMatrix diagonal(const RealVector& values);

/// Max |entry| of U^dagger U - I.
double unitarity_defect(const ComplexMatrix& u);

/// Max |entry| of P^2 - P together with the Hermitian defect.
double projection_defect(const ComplexMatrix& p);

}  // namespace autoconv
