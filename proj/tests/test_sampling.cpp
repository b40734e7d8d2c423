#include "detlat/sampling.hpp"

#include "detlat/ortholattice.hpp"
#include "support.hpp"

#include <doctest.h>

#include <numeric>
#include <set>

using namespace detlat;

TEST_CASE("random_subspace covers every dimension and is reproducible") {
  Rng a(4), b(4);
  std::set<int> dims;
  for (int k = 0; k < 200; ++k) {
    const Subspace p = random_subspace(4, a);
    const Subspace q = random_subspace(4, b);
    CHECK(p.dim() == q.dim());
    CHECK(projector_distance(p, q) == 0.0);
    CHECK((p.basis().adjoint() * p.basis() -
           ComplexMatrix::Identity(p.dim(), p.dim())).norm() < 1e-9);
    dims.insert(p.dim());
  }
  CHECK(dims == std::set<int>{0, 1, 2, 3, 4});
}

TEST_CASE("random_subspace_of stays inside its container") {
  Rng rng(5);
  const Subspace within = Subspace::axes(5, {1, 3, 4});
  for (int k = 0; k < 50; ++k) {
    const Subspace p = random_subspace_of(within, rng);
    CHECK(leq(p, within));
    CHECK(p.dim() <= 3);
  }
}

TEST_CASE("random_partition composes n") {
  Rng rng(6);
  for (int n = 1; n <= 8; ++n) {
    for (int k = 0; k < 20; ++k) {
      const auto parts = random_partition(n, rng);
      CHECK(std::accumulate(parts.begin(), parts.end(), 0) == n);
      for (int p : parts) CHECK(p >= 1);
    }
  }
}

TEST_CASE("random_observable and random_state") {
  Rng rng(7);
  const Observable r = random_observable({2, 1, 3}, rng);
  CHECK(r.ambient_dim() == 6);
  CHECK(r.size() == 3);
  CHECK(r.eigenspace(2).dim() == 3);
  const State e = random_state(r, rng, {0, 2});
  CHECK(std::abs(e.vector().norm() - 1.0) < 1e-12);
  CHECK((r.eigenspace(0).projector() * e.vector()).norm() < 1e-12);
  CHECK((r.eigenspace(2).projector() * e.vector()).norm() < 1e-12);
  const StateProjections sp = project_state(e, r);
  CHECK(sp.size() == 1);
  CHECK(sp.dropped() == std::vector<std::size_t>{0, 2});
}

TEST_CASE("random_unit_vector has unit norm") {
  Rng rng(8);
  for (int n = 1; n <= 6; ++n) {
    CHECK(std::abs(random_unit_vector(n, rng).norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("MemberSampler draws members only") {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 5;
    const auto inst = support::random_instance(n, rng, true, trial % 4 == 0);
    const StateProjections sp = project_state(inst.state, inst.observable);
    for (auto mode : {MemberSampler::Mode::Generic, MemberSampler::Mode::Framed}) {
      MemberSampler sampler(sp, rng(), mode);
      for (int k = 0; k < 10; ++k) CHECK(membership_in_D(sampler.next(), sp));
    }
  }
}

TEST_CASE("MemberSampler is deterministic per seed") {
  Rng rng(10);
  const auto inst = support::random_instance(4, rng, true);
  const StateProjections sp = project_state(inst.state, inst.observable);
  MemberSampler a(sp, 33, MemberSampler::Mode::Framed);
  MemberSampler b(sp, 33, MemberSampler::Mode::Framed);
  for (int k = 0; k < 10; ++k) CHECK(projector_distance(a.next(), b.next()) == 0.0);
}

TEST_CASE("Framed draws stay inside one finite sublattice") {
  // A single 5-dimensional eigenspace leaves a 4-dimensional block outside e_r,
  // where generic draws would generate an infinite lattice.
  const Observable r({Subspace::axes(5, {0, 1, 2, 3, 4})});
  const StateProjections sp =
      project_state(State::from_vector(support::vec({1.0, 0.0, 0.0, 0.0, 0.0})), r);
  MemberSampler sampler(sp, 12, MemberSampler::Mode::Framed);
  std::vector<Subspace> gens;
  for (int k = 0; k < 12; ++k) gens.push_back(sampler.next());
  const FiniteOrtholattice l = generate(gens, 64);
  CHECK(l.size() <= 32);
  CHECK(is_sublattice_of_D(l, sp));
}
