#include "detlat/subspace.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace detlat {

namespace {

void require_same_dim(const Subspace& p, const Subspace& q) {
  if (p.ambient_dim() != q.ambient_dim()) {
    throw DimensionMismatch(p.ambient_dim(), q.ambient_dim());
  }
}

// Extends the orthonormal columns of `basis` by exactly `extra` standard
// basis directions, always taking the candidate with the largest residual.
ComplexMatrix complete_basis(const ComplexMatrix& basis, int extra) {
  const Eigen::Index n = basis.rows();
  ComplexMatrix out(n, extra);
  ComplexMatrix residual = ComplexMatrix::Identity(n, n) - projector(basis);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int t = 0; t < extra; ++t) {
    Eigen::Index best = -1;
    double best_norm = -1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double r = residual.col(j).norm();
      if (r > best_norm) {
        best_norm = r;
        best = j;
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    ComplexVector v = ComplexVector::Unit(n, best);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index k = 0; k < basis.cols(); ++k) {
        v -= basis.col(k) * basis.col(k).dot(v);
      }
      for (int k = 0; k < t; ++k) v -= out.col(k) * out.col(k).dot(v);
    }
    v.normalize();
    out.col(t) = v;
    // Deflate the remaining candidates against the new direction.
    residual -= v * (v.adjoint() * residual);
  }
  return out;
}

}  // namespace

DimensionMismatch::DimensionMismatch(int lhs, int rhs)
    : std::invalid_argument("ambient dimension mismatch: " +
                            std::to_string(lhs) + " vs " +
                            std::to_string(rhs)) {}

Subspace::Subspace(ComplexMatrix basis)
    : basis_(std::move(basis)), projector_(detlat::projector(basis_)) {}

Subspace Subspace::span(const ComplexMatrix& vectors, Tolerance tol) {
  return Subspace(orthonormalize(vectors, tol));
}

Subspace Subspace::from_orthonormal(ComplexMatrix basis) {
  if (basis.rows() == 0) {
    throw std::invalid_argument("subspace needs ambient dimension >= 1");
  }
  if (basis.cols() > basis.rows()) {
    throw std::invalid_argument("subspace basis has more columns than rows");
  }
  return Subspace(std::move(basis));
}

Subspace Subspace::null(int ambient_dim) {
  return from_orthonormal(ComplexMatrix(ambient_dim, 0));
}

Subspace Subspace::full(int ambient_dim) {
  return from_orthonormal(ComplexMatrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::axes(int ambient_dim, std::initializer_list<int> indices) {
  ComplexMatrix b = ComplexMatrix::Zero(ambient_dim, static_cast<Eigen::Index>(indices.size()));
  Eigen::Index c = 0;
  for (int i : indices) {
    if (i < 0 || i >= ambient_dim) {
      throw std::invalid_argument("axis index " + std::to_string(i) +
                                  " out of range for dimension " +
                                  std::to_string(ambient_dim));
    }
    b(i, c++) = 1.0;
  }
  return span(b);
}

Ray::Ray(ComplexVector v, Subspace s)
    : vector_(std::move(v)), subspace_(std::move(s)) {}

Ray Ray::from_vector(const ComplexVector& v) {
  const double norm = v.norm();
  if (!(norm > 1e-12) || !all_finite(v)) {
    throw std::invalid_argument("ray needs a finite nonzero vector");
  }
  ComplexVector u = v / norm;
  return Ray(u, Subspace::from_orthonormal(u));
}

Ray Ray::from_subspace(const Subspace& s) {
  if (s.dim() != 1) {
    throw std::invalid_argument("ray needs a 1-dimensional subspace, got dim " +
                                std::to_string(s.dim()));
  }
  return Ray(s.basis().col(0), s);
}

Subspace ortho(const Subspace& p) {
  return Subspace::from_orthonormal(
      complete_basis(p.basis(), p.ambient_dim() - p.dim()));
}

Subspace join(const Subspace& p, const Subspace& q, Tolerance tol) {
  require_same_dim(p, q);
  if (p.is_null() || q.is_full()) return q;
  if (q.is_null() || p.is_full()) return p;
  ComplexMatrix both(p.ambient_dim(), p.dim() + q.dim());
  both << p.basis(), q.basis();
  return Subspace::span(both, tol);
}

Subspace meet(const Subspace& p, const Subspace& q, Tolerance tol) {
  require_same_dim(p, q);
  if (p.is_full() || q.is_null()) return q;
  if (q.is_full() || p.is_null()) return p;
  return ortho(join(ortho(p), ortho(q), tol));
}

bool leq(const Subspace& p, const Subspace& q, Tolerance tol) {
  require_same_dim(p, q);
  return (q.projector() * p.projector() - p.projector()).norm() < tol.eps;
}

bool equal(const Subspace& p, const Subspace& q, Tolerance tol) {
  require_same_dim(p, q);
  return p.dim() == q.dim() && projector_distance(p, q) < tol.eps;
}

double projector_distance(const Subspace& p, const Subspace& q) {
  require_same_dim(p, q);
  return (p.projector() - q.projector()).norm();
}

double commutator_norm(const Subspace& p, const Subspace& q) {
  require_same_dim(p, q);
  const ComplexMatrix pq = p.projector() * q.projector();
  // (P_q P_p) = (P_p P_q)^dagger for Hermitian projectors.
  return (pq - pq.adjoint()).norm();
}

Subspace apply_unitary(const ComplexMatrix& u, const Subspace& p,
                       Tolerance tol) {
  if (u.rows() != p.ambient_dim() || u.cols() != p.ambient_dim()) {
    throw DimensionMismatch(static_cast<int>(u.rows()), p.ambient_dim());
  }
  if (!is_unitary(u, tol)) {
    throw std::invalid_argument("apply_unitary: matrix is not unitary");
  }
  if (p.is_null()) return p;
  // Images of orthonormal columns under a unitary stay orthonormal; one
  // orthonormalization pass removes the residual defect.
  return Subspace::from_orthonormal(orthonormalize(u * p.basis(), tol));
}

Subspace relative_ortho(const Subspace& p, const Subspace& within,
                        Tolerance tol) {
  return meet(within, ortho(p), tol);
}

}  // namespace detlat
