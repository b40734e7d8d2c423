#pragma once

#include "detlat/linalg.hpp"

#include <stdexcept>

namespace detlat {

class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(int lhs, int rhs);
};

/// A subspace of C^n held as an orthonormal column basis.
///
/// The null subspace is an ordinary value with a zero-column basis. Equality is
/// representation independent: two subspaces are equal when their projectors
/// agree to within eps in Frobenius norm.
class Subspace {
 public:
  /// Span of the columns of `vectors` (orthonormalized; may be rank deficient).
  static Subspace span(const ComplexMatrix& vectors,
                       Tolerance tol = Tolerance::session());
  /// Trusts that `basis` already has orthonormal columns.
  static Subspace from_orthonormal(ComplexMatrix basis);
  static Subspace null(int ambient_dim);
  static Subspace full(int ambient_dim);
  /// Span of the standard basis vectors with the given indices.
  static Subspace axes(int ambient_dim, std::initializer_list<int> indices);

  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  int dim() const { return static_cast<int>(basis_.cols()); }
  bool is_null() const { return dim() == 0; }
  bool is_full() const { return dim() == ambient_dim(); }

  const ComplexMatrix& basis() const { return basis_; }
  const ComplexMatrix& projector() const { return projector_; }

 private:
  explicit Subspace(ComplexMatrix basis);

  ComplexMatrix basis_;
  ComplexMatrix projector_;
};

/// A one-dimensional subspace with a distinguished unit representative.
class Ray {
 public:
  /// Normalizes `v`; throws std::invalid_argument for a (numerically) zero vector.
  static Ray from_vector(const ComplexVector& v);
  /// Throws std::invalid_argument unless dim(s) == 1.
  static Ray from_subspace(const Subspace& s);

  const ComplexVector& vector() const { return vector_; }
  const Subspace& subspace() const { return subspace_; }
  operator const Subspace&() const { return subspace_; }  // NOLINT
  int ambient_dim() const { return subspace_.ambient_dim(); }

 private:
  Ray(ComplexVector v, Subspace s);

  ComplexVector vector_;
  Subspace subspace_;
};

Subspace ortho(const Subspace& p);
Subspace join(const Subspace& p, const Subspace& q,
              Tolerance tol = Tolerance::session());
/// Computed as ortho(join(ortho(p), ortho(q))).
Subspace meet(const Subspace& p, const Subspace& q,
              Tolerance tol = Tolerance::session());
/// ||P_q P_p - P_p||_F < eps.
bool leq(const Subspace& p, const Subspace& q,
         Tolerance tol = Tolerance::session());
bool equal(const Subspace& p, const Subspace& q,
           Tolerance tol = Tolerance::session());
double projector_distance(const Subspace& p, const Subspace& q);
/// ||P_p P_q - P_q P_p||_F.
double commutator_norm(const Subspace& p, const Subspace& q);
/// Span of U * basis(p). Throws std::invalid_argument for non-unitary U.
Subspace apply_unitary(const ComplexMatrix& u, const Subspace& p,
                       Tolerance tol = Tolerance::session());
/// Orthogonal complement of `p` taken inside `within` (p <= within assumed).
Subspace relative_ortho(const Subspace& p, const Subspace& within,
                        Tolerance tol = Tolerance::session());

}  // namespace detlat
