#pragma once

#include "detlat/subspace.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace detlat {

/// Resolution of C^n into mutually orthogonal eigenspaces r_1..r_m.
class Observable {
 public:
  /// Validates pairwise orthogonality and that the dimensions sum to n.
  explicit Observable(std::vector<Subspace> eigenspaces,
                      Tolerance tol = Tolerance::session());

  /// Groups the eigenvectors of a Hermitian matrix whose eigenvalues agree to
  /// within `cluster_tol`, in ascending eigenvalue order.
  static Observable from_hermitian(const ComplexMatrix& h,
                                   double cluster_tol = 1e-8,
                                   Tolerance tol = Tolerance::session());

  int ambient_dim() const { return ambient_dim_; }
  std::size_t size() const { return eigenspaces_.size(); }
  const Subspace& eigenspace(std::size_t i) const { return eigenspaces_.at(i); }
  const std::vector<Subspace>& eigenspaces() const { return eigenspaces_; }

 private:
  int ambient_dim_;
  std::vector<Subspace> eigenspaces_;
};

/// A pure state: a unit ray in the ambient space.
class State {
 public:
  explicit State(Ray ray) : ray_(std::move(ray)) {}
  static State from_vector(const ComplexVector& v) {
    return State(Ray::from_vector(v));
  }

  const Ray& ray() const { return ray_; }
  const ComplexVector& vector() const { return ray_.vector(); }
  int ambient_dim() const { return ray_.ambient_dim(); }

 private:
  Ray ray_;
};

struct StateProjection {
  std::size_t eigenspace_index;
  Ray projection;  // e_{r_i}
  double weight;   // ||P_{r_i} e||^2
};

/// The nonzero projections of a state onto the eigenspaces of an observable,
/// together with the state and observable they were computed from.
class StateProjections {
 public:
  StateProjections(State state, Observable observable,
                   std::vector<StateProjection> entries,
                   std::vector<std::size_t> dropped)
      : state_(std::move(state)),
        observable_(std::move(observable)),
        entries_(std::move(entries)),
        dropped_(std::move(dropped)) {}

  const State& state() const { return state_; }
  const Observable& observable() const { return observable_; }
  const std::vector<StateProjection>& entries() const { return entries_; }
  /// Eigenspace indices onto which the state projects to zero.
  const std::vector<std::size_t>& dropped() const { return dropped_; }
  std::size_t size() const { return entries_.size(); }
  int ambient_dim() const { return state_.ambient_dim(); }

  /// Entry for eigenspace `eigen_index`, or nullptr if that projection is zero.
  const StateProjection* find(std::size_t eigen_index) const;
  /// Like find(), but throws std::invalid_argument when absent.
  const StateProjection& at_eigenspace(std::size_t eigen_index) const;

  /// Join of every e_{r_i}.
  Subspace projections_span(Tolerance tol = Tolerance::session()) const;

 private:
  State state_;
  Observable observable_;
  std::vector<StateProjection> entries_;
  std::vector<std::size_t> dropped_;
};

/// e_{r_i} = (e v r_i^perp) ^ r_i for each eigenspace, dropping null results.
/// Every kept projection is cross-checked against span(P_{r_i} e); a
/// disagreement throws std::logic_error.
StateProjections project_state(const State& e, const Observable& r,
                               Tolerance tol = Tolerance::session());

/// True iff for every i, e_{r_i} <= p or e_{r_i} <= p^perp.
bool membership_in_D(const Subspace& p, const StateProjections& sp,
                     Tolerance tol = Tolerance::session());

/// Smallest inclusion defect over the membership decision, used to keep
/// sampled subspaces away from the tolerance boundary: for each i the smaller
/// of ||P_{p^perp} e_{r_i}|| and ||P_p e_{r_i}||, maximized over i.
double membership_margin(const Subspace& p, const StateProjections& sp);

struct Decomposition {
  std::vector<std::size_t> selected;  // eigenspace indices i with e_{r_i} <= p
  Subspace residue;                   // p ^ (v_{i in S} e_{r_i})^perp
};

/// Writes a member p as (v_{i in S} e_{r_i}) v q with q orthogonal to every
/// e_{r_j}. Returns nullopt for non-members.
std::optional<Decomposition> canonical_decomposition(
    const Subspace& p, const StateProjections& sp,
    Tolerance tol = Tolerance::session());

/// Inverse of canonical_decomposition.
Subspace reconstruct(const Decomposition& d, const StateProjections& sp,
                     Tolerance tol = Tolerance::session());

/// e_{r_i}': the orthocomplement of e_{r_i} inside r_i.
Subspace projection_complement(const StateProjections& sp,
                               std::size_t eigen_index,
                               Tolerance tol = Tolerance::session());

/// Orthonormal pair (u, v) spanning the seeded rotation plane in e_{r_i}'.
ComplexMatrix rotation_plane(const StateProjections& sp,
                             std::size_t eigen_index, std::uint64_t plane_seed,
                             Tolerance tol = Tolerance::session());

/// Rotation about e_{r_i} inside r_i (identity on r_i^perp): turns the seeded
/// plane of e_{r_i}' by `angle`, u -> cos(a) u + sin(a) v. Angles that are a
/// multiple of 2*pi give the identity for any eigenspace; otherwise
/// dim(r_i) >= 3 is required.
ComplexMatrix build_rotation(const StateProjections& sp,
                             std::size_t eigen_index, double angle,
                             std::uint64_t plane_seed,
                             Tolerance tol = Tolerance::session());

/// Reflection through the hyperplane e_{r_i} v c of r_i, identity outside r_i.
/// `c` must lie in r_i and be orthogonal to e_{r_i}.
ComplexMatrix build_reflection(const StateProjections& sp,
                               std::size_t eigen_index, const Subspace& c,
                               Tolerance tol = Tolerance::session());

/// diag(i, 1) in the basis (e_{r_i}, e_{r_i}') of a 2-dimensional r_i,
/// identity on r_i^perp.
ComplexMatrix build_phase_map(const StateProjections& sp,
                              std::size_t eigen_index,
                              Tolerance tol = Tolerance::session());

/// A phase per eigenspace: sum_i exp(i * phases[i]) P_{r_i}.
ComplexMatrix build_eigenspace_phases(const Observable& r,
                                      const std::vector<double>& phases);

/// U maps every eigenspace r_i onto itself and every nonzero projection
/// e_{r_i} onto itself. Throws std::invalid_argument for non-unitary U.
bool is_preserving(const ComplexMatrix& u, const State& e, const Observable& r,
                   Tolerance tol = Tolerance::session());

/// Stronger check: U also fixes the state ray e itself.
bool fixes_state_ray(const ComplexMatrix& u, const State& e,
                     Tolerance tol = Tolerance::session());

/// Join of U(b) over the given unitaries.
Subspace span_orbit(const Subspace& b, const std::vector<ComplexMatrix>& unitaries,
                    Tolerance tol = Tolerance::session());

}  // namespace detlat
