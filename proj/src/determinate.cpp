#include "detlat/determinate.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace detlat {

namespace {

ComplexMatrix identity(int n) { return ComplexMatrix::Identity(n, n); }

const Subspace& eigenspace_with_projection(const StateProjections& sp,
                                           std::size_t eigen_index) {
  sp.at_eigenspace(eigen_index);
  return sp.observable().eigenspace(eigen_index);
}

}  // namespace

Observable::Observable(std::vector<Subspace> eigenspaces, Tolerance tol)
    : ambient_dim_(0), eigenspaces_(std::move(eigenspaces)) {
  if (eigenspaces_.empty()) {
    throw std::invalid_argument("observable needs at least one eigenspace");
  }
  ambient_dim_ = eigenspaces_.front().ambient_dim();
  int total = 0;
  for (std::size_t i = 0; i < eigenspaces_.size(); ++i) {
    const Subspace& r = eigenspaces_[i];
    if (r.ambient_dim() != ambient_dim_) {
      throw DimensionMismatch(ambient_dim_, r.ambient_dim());
    }
    if (r.is_null()) {
      throw std::invalid_argument("eigenspace " + std::to_string(i) +
                                  " is the null subspace");
    }
    total += r.dim();
    for (std::size_t j = 0; j < i; ++j) {
      if ((r.projector() * eigenspaces_[j].projector()).norm() >= tol.eps) {
        throw std::invalid_argument("eigenspaces " + std::to_string(j) +
                                    " and " + std::to_string(i) +
                                    " are not orthogonal");
      }
    }
  }
  if (total != ambient_dim_) {
    throw std::invalid_argument(
        "eigenspace dimensions sum to " + std::to_string(total) +
        ", expected " + std::to_string(ambient_dim_));
  }
}

Observable Observable::from_hermitian(const ComplexMatrix& h,
                                      double cluster_tol, Tolerance tol) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw std::invalid_argument("observable matrix must be square and non-empty");
  }
  if (!all_finite(h) || (h - h.adjoint()).norm() > cluster_tol) {
    throw std::invalid_argument("observable matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  std::vector<Subspace> spaces;
  Eigen::Index start = 0;
  for (Eigen::Index j = 1; j <= values.size(); ++j) {
    if (j == values.size() || values(j) - values(j - 1) > cluster_tol) {
      spaces.push_back(
          Subspace::span(vectors.middleCols(start, j - start), tol));
      start = j;
    }
  }
  return Observable(std::move(spaces), tol);
}

const StateProjection* StateProjections::find(std::size_t eigen_index) const {
  for (const auto& entry : entries_) {
    if (entry.eigenspace_index == eigen_index) return &entry;
  }
  return nullptr;
}

const StateProjection& StateProjections::at_eigenspace(
    std::size_t eigen_index) const {
  if (eigen_index >= observable_.size()) {
    throw std::invalid_argument("eigenspace index " +
                                std::to_string(eigen_index) + " out of range");
  }
  const StateProjection* entry = find(eigen_index);
  if (entry == nullptr) {
    throw std::invalid_argument("state has zero projection onto eigenspace " +
                                std::to_string(eigen_index));
  }
  return *entry;
}

Subspace StateProjections::projections_span(Tolerance tol) const {
  Subspace acc = Subspace::null(ambient_dim());
  for (const auto& entry : entries_) {
    acc = join(acc, entry.projection, tol);
  }
  return acc;
}

StateProjections project_state(const State& e, const Observable& r,
                               Tolerance tol) {
  if (e.ambient_dim() != r.ambient_dim()) {
    throw DimensionMismatch(e.ambient_dim(), r.ambient_dim());
  }
  std::vector<StateProjection> entries;
  std::vector<std::size_t> dropped;
  double total = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Subspace& ri = r.eigenspace(i);
    const Subspace lattice = meet(join(e.ray(), ortho(ri), tol), ri, tol);
    const ComplexVector direct = ri.projector() * e.vector();
    const double norm = direct.norm();
    if (lattice.is_null()) {
      // Null by the lattice route means e sits inside r_i^perp to within eps.
      if (norm > 10 * tol.eps) {
        throw std::logic_error("projection routes disagree on eigenspace " +
                               std::to_string(i) + " (lattice null)");
      }
      dropped.push_back(i);
      continue;
    }
    if (lattice.dim() != 1 || norm == 0.0) {
      throw std::logic_error("projection routes disagree on eigenspace " +
                             std::to_string(i));
    }
    Ray ray = Ray::from_vector(direct);
    if (projector_distance(lattice, ray) >= 1e-8) {
      throw std::logic_error("projection routes disagree on eigenspace " +
                             std::to_string(i));
    }
    entries.push_back({i, std::move(ray), norm * norm});
    total += norm * norm;
  }
  if (std::abs(total - 1.0) > 1e-8) {
    throw std::logic_error("projection weights sum to " +
                           std::to_string(total));
  }
  return StateProjections(e, r, std::move(entries), std::move(dropped));
}

bool membership_in_D(const Subspace& p, const StateProjections& sp,
                     Tolerance tol) {
  const Subspace perp = ortho(p);
  for (const auto& entry : sp.entries()) {
    if (!leq(entry.projection, p, tol) && !leq(entry.projection, perp, tol)) {
      return false;
    }
  }
  return true;
}

double membership_margin(const Subspace& p, const StateProjections& sp) {
  double margin = 0.0;
  for (const auto& entry : sp.entries()) {
    const ComplexVector inside = p.projector() * entry.projection.vector();
    const double into_p = (entry.projection.vector() - inside).norm();
    const double into_perp = inside.norm();
    margin = std::max(margin, std::min(into_p, into_perp));
  }
  return margin;
}

std::optional<Decomposition> canonical_decomposition(
    const Subspace& p, const StateProjections& sp, Tolerance tol) {
  if (!membership_in_D(p, sp, tol)) return std::nullopt;
  Decomposition d{{}, Subspace::null(p.ambient_dim())};
  Subspace selected_span = Subspace::null(p.ambient_dim());
  for (const auto& entry : sp.entries()) {
    if (leq(entry.projection, p, tol)) {
      d.selected.push_back(entry.eigenspace_index);
      selected_span = join(selected_span, entry.projection, tol);
    }
  }
  d.residue = meet(p, ortho(selected_span), tol);
  return d;
}

Subspace reconstruct(const Decomposition& d, const StateProjections& sp,
                     Tolerance tol) {
  Subspace acc = d.residue;
  for (std::size_t i : d.selected) {
    acc = join(acc, sp.at_eigenspace(i).projection, tol);
  }
  return acc;
}

Subspace projection_complement(const StateProjections& sp,
                               std::size_t eigen_index, Tolerance tol) {
  const Subspace& ri = eigenspace_with_projection(sp, eigen_index);
  return meet(ri, ortho(sp.at_eigenspace(eigen_index).projection), tol);
}

ComplexMatrix rotation_plane(const StateProjections& sp,
                             std::size_t eigen_index, std::uint64_t plane_seed,
                             Tolerance tol) {
  const Subspace rest = projection_complement(sp, eigen_index, tol);
  if (rest.dim() < 2) {
    throw std::invalid_argument(
        "rotation about e_r needs dim(r_i) >= 3, eigenspace " +
        std::to_string(eigen_index) + " has dim " +
        std::to_string(rest.dim() + 1));
  }
  const ComplexMatrix mix = random_unitary(rest.dim(), plane_seed);
  return rest.basis() * mix.leftCols(2);
}

ComplexMatrix build_rotation(const StateProjections& sp,
                             std::size_t eigen_index, double angle,
                             std::uint64_t plane_seed, Tolerance tol) {
  eigenspace_with_projection(sp, eigen_index);
  const int n = sp.ambient_dim();
  if (std::abs(std::remainder(angle, 2 * std::numbers::pi)) < 1e-12) {
    return identity(n);
  }
  const ComplexMatrix plane = rotation_plane(sp, eigen_index, plane_seed, tol);
  const ComplexVector u = plane.col(0);
  const ComplexVector v = plane.col(1);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return identity(n) + (c - 1.0) * (u * u.adjoint() + v * v.adjoint()) +
         s * (v * u.adjoint() - u * v.adjoint());
}

ComplexMatrix build_reflection(const StateProjections& sp,
                               std::size_t eigen_index, const Subspace& c,
                               Tolerance tol) {
  const Subspace& ri = eigenspace_with_projection(sp, eigen_index);
  const Ray& eri = sp.at_eigenspace(eigen_index).projection;
  if (c.ambient_dim() != sp.ambient_dim()) {
    throw DimensionMismatch(sp.ambient_dim(), c.ambient_dim());
  }
  if (!leq(c, ri, tol)) {
    throw std::invalid_argument("reflection: c is not inside the eigenspace");
  }
  if (!leq(c, ortho(eri), tol)) {
    throw std::invalid_argument("reflection: c is not orthogonal to e_r");
  }
  const Subspace hyperplane = join(eri, c, tol);
  const Subspace normal = meet(ri, ortho(hyperplane), tol);
  return identity(sp.ambient_dim()) - 2.0 * normal.projector();
}

ComplexMatrix build_phase_map(const StateProjections& sp,
                              std::size_t eigen_index, Tolerance tol) {
  const Subspace& ri = eigenspace_with_projection(sp, eigen_index);
  (void)tol;
  if (ri.dim() != 2) {
    throw std::invalid_argument("phase map needs a 2-dimensional eigenspace, "
                                "eigenspace " + std::to_string(eigen_index) +
                                " has dim " + std::to_string(ri.dim()));
  }
  const Subspace& eri = sp.at_eigenspace(eigen_index).projection;
  return identity(sp.ambient_dim()) +
         (Complex(0.0, 1.0) - 1.0) * eri.projector();
}

ComplexMatrix build_eigenspace_phases(const Observable& r,
                                      const std::vector<double>& phases) {
  if (phases.size() != r.size()) {
    throw std::invalid_argument("one phase per eigenspace required");
  }
  ComplexMatrix u = ComplexMatrix::Zero(r.ambient_dim(), r.ambient_dim());
  for (std::size_t i = 0; i < r.size(); ++i) {
    u += std::polar(1.0, phases[i]) * r.eigenspace(i).projector();
  }
  return u;
}

bool is_preserving(const ComplexMatrix& u, const State& e, const Observable& r,
                   Tolerance tol) {
  if (!is_unitary(u, tol)) {
    throw std::invalid_argument("is_preserving: matrix is not unitary");
  }
  for (const Subspace& ri : r.eigenspaces()) {
    if (!equal(apply_unitary(u, ri, tol), ri, tol)) return false;
  }
  const StateProjections sp = project_state(e, r, tol);
  for (const auto& entry : sp.entries()) {
    if (!equal(apply_unitary(u, entry.projection, tol), entry.projection, tol)) {
      return false;
    }
  }
  return true;
}

bool fixes_state_ray(const ComplexMatrix& u, const State& e, Tolerance tol) {
  return equal(apply_unitary(u, e.ray(), tol), e.ray(), tol);
}

Subspace span_orbit(const Subspace& b,
                    const std::vector<ComplexMatrix>& unitaries,
                    Tolerance tol) {
  Subspace acc = Subspace::null(b.ambient_dim());
  for (const auto& u : unitaries) {
    acc = join(acc, apply_unitary(u, b, tol), tol);
  }
  return acc;
}

}  // namespace detlat
