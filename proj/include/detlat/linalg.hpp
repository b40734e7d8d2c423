#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

namespace detlat {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Relative tolerance shared by every rank, inclusion and equality decision.
///
/// The process-wide session value is read by default arguments throughout the
/// library; set it once at startup (the CLI does this from --tol).
struct Tolerance {
  double eps = 1e-9;

  Tolerance() = default;
  explicit Tolerance(double value);

  static Tolerance session();
  static void set_session(Tolerance tol);
};

/// Orthonormal basis of the column space of `m`.
///
/// Modified Gram-Schmidt with one reorthogonalization pass. A column is dropped
/// when its residual after projection onto the accepted columns falls below
/// eps times the largest input column norm; the returned column count is the
/// numerical rank. Throws std::invalid_argument on a 0-row input.
ComplexMatrix orthonormalize(const ComplexMatrix& m,
                             Tolerance tol = Tolerance::session());

/// B * B^dagger for a basis with orthonormal columns.
ComplexMatrix projector(const ComplexMatrix& basis);

/// Seeded Haar-like unitary: orthonormalized complex Gaussian matrix.
ComplexMatrix random_unitary(int n, std::uint64_t seed);

bool is_unitary(const ComplexMatrix& u, Tolerance tol = Tolerance::session());

bool all_finite(const ComplexMatrix& m);

/// Frobenius norm of U^dagger U - I.
double unitarity_defect(const ComplexMatrix& u);

}  // namespace detlat
