#include "detlat/verifier.hpp"

#include "detlat/sampling.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace detlat;
using support::ray;
using support::vec;

namespace {

const double kPi = std::numbers::pi;

// Exhaustive count of homomorphisms sending span(x1,x2) to 1 for the four-ray
// lattice of b at `angle` to x1 in C^3, with U given explicitly.
std::size_t brute_four_ray_count(double angle, bool phase) {
  const Subspace plane = Subspace::axes(3, {0, 1});
  ComplexMatrix u = ComplexMatrix::Identity(3, 3);
  if (phase) {
    u(0, 0) = Complex(0.0, 1.0);
  } else {
    u(1, 1) = -1.0;
  }
  const ComplexVector bv = vec({std::cos(angle), std::sin(angle), 0.0});
  const ComplexVector bperp = vec({-std::sin(angle), std::cos(angle), 0.0});
  const std::vector<Subspace> gens{Subspace::span(bv), Subspace::span(bperp),
                                   Subspace::span(u * bv), Subspace::span(u * bperp),
                                   plane};
  const FiniteOrtholattice l = generate(gens);
  const auto idx = *l.find(plane);
  std::size_t count = 0;
  for (const auto& bits : support::brute_force_homs(l)) count += bits[idx] == '1' ? 1 : 0;
  return count;
}

State generic_state(int n, std::uint64_t seed) {
  Rng rng(seed);
  return State::from_vector(random_unit_vector(n, rng));
}

Observable axis_observable(int n) {
  std::vector<Subspace> rays;
  for (int i = 0; i < n; ++i) rays.push_back(Subspace::axes(n, {i}));
  return Observable(rays);
}

}  // namespace

TEST_CASE("four-ray: reflection at 45 degrees collapses to one pair") {
  const auto r = four_ray_obstruction(kPi / 4, 3, Automorphism::Reflection);
  CHECK_FALSE(r.passed);
  CHECK(r.details["image_equals_b_perp"].get<bool>());
  CHECK(r.details["distinct_rays"] == 2);
  CHECK(r.details["homs_on_eigenspace"] == 2);
  CHECK(r.details["homs_on_eigenspace"].get<std::size_t>() == brute_four_ray_count(kPi / 4, false));
}

TEST_CASE("four-ray: the phase map obstructs at 45 degrees") {
  const auto r = four_ray_obstruction(kPi / 4, 3, Automorphism::PhaseMap);
  CHECK(r.passed);
  CHECK(r.details["preserving"].get<bool>());
  CHECK_FALSE(r.details["image_equals_b"].get<bool>());
  CHECK(r.details["distinct_rays"] == 4);
  CHECK(r.details["homs_on_eigenspace"] == 0);
  CHECK(brute_four_ray_count(kPi / 4, true) == 0);
}

TEST_CASE("four-ray: reflection alone works off 45 degrees") {
  for (double deg : {30.0, 10.0, 60.0}) {
    const double a = deg * kPi / 180;
    const auto r = four_ray_obstruction(a, 3, Automorphism::Reflection);
    CHECK(r.passed);
    CHECK(r.details["homs_on_eigenspace"] == 0);
    CHECK(brute_four_ray_count(a, false) == 0);
    CHECK(four_ray_obstruction(a, 3, Automorphism::PhaseMap).passed);
  }
}

TEST_CASE("four-ray: in C^2 and with explicit rays") {
  CHECK(four_ray_obstruction(kPi / 4, 2, Automorphism::PhaseMap).passed);
  CHECK_FALSE(four_ray_obstruction(kPi / 4, 2, Automorphism::Reflection).passed);
  const Subspace plane = Subspace::axes(4, {1, 2});
  const Ray er = Ray::from_vector(vec({0.0, 0.6, 0.8, 0.0}));
  const Ray b = Ray::from_vector(vec({0.0, 1.0, 0.0, 0.0}));
  CHECK(four_ray_obstruction(plane, er, b, Automorphism::PhaseMap).passed);
}

TEST_CASE("four-ray: preconditions") {
  CHECK_THROWS_AS(four_ray_obstruction(0.0, 3, Automorphism::Reflection), std::invalid_argument);
  CHECK_THROWS_AS(four_ray_obstruction(kPi / 2, 3, Automorphism::PhaseMap), std::invalid_argument);
  CHECK_THROWS_AS(four_ray_obstruction(0.3, 1, Automorphism::PhaseMap), std::invalid_argument);
  const Ray er = Ray::from_vector(vec({1.0, 0.0, 0.0}));
  const Ray outside = Ray::from_vector(vec({1.0, 0.0, 1.0}));
  CHECK_THROWS_AS(four_ray_obstruction(Subspace::axes(3, {0, 1}), er, outside,
                                       Automorphism::PhaseMap),
                  std::invalid_argument);
  CHECK_THROWS_AS(four_ray_obstruction(Subspace::axes(3, {0}), er, er,
                                       Automorphism::PhaseMap),
                  std::invalid_argument);
}

TEST_CASE("forty_five_demo") {
  const auto r = forty_five_demo();
  CHECK(r.passed);
  CHECK(r.details["at_45"].get<bool>());
  CHECK(r.details["reflection"]["homs_on_eigenspace"].get<std::size_t>() >= 1);
  CHECK(r.details["phase_map"]["homs_on_eigenspace"] == 0);

  const auto off = forty_five_demo(kPi / 6);
  CHECK(off.passed);
  CHECK_FALSE(off.details["at_45"].get<bool>());
  CHECK(off.details["reflection"]["homs_on_eigenspace"] == 0);
  CHECK(off.details["phase_map"]["homs_on_eigenspace"] == 0);

  CHECK_THROWS_AS(forty_five_demo(0.0), std::invalid_argument);
}

TEST_CASE("recompute_passed follows the details") {
  auto r = forty_five_demo();
  CHECK(recompute_passed(r) == r.passed);
  r.details["phase_map"]["homs_on_eigenspace"] = 3;
  CHECK_FALSE(recompute_passed(r));

  auto four = four_ray_obstruction(kPi / 4, 3, Automorphism::PhaseMap);
  four.details["preserving"] = false;
  CHECK_FALSE(recompute_passed(four));

  auto scan = membership_dichotomy_scan(generic_state(3, 1), axis_observable(3), 6, 2);
  CHECK(recompute_passed(scan) == scan.passed);
  scan.details["nonconforming"] = 1;
  CHECK_FALSE(recompute_passed(scan));

  auto scan2 = membership_dichotomy_scan(generic_state(3, 1), axis_observable(3), 6, 2);
  scan2.details["inconclusive_rate"] = 0.5;
  CHECK_FALSE(recompute_passed(scan2));

  VerificationReport unknown{"nope", true, nlohmann::json::object()};
  CHECK_THROWS_AS(recompute_passed(unknown), std::invalid_argument);
}

TEST_CASE("membership_dichotomy_scan") {
  SUBCASE("C^3, nondegenerate, 50 samples") {
    const auto r = membership_dichotomy_scan(generic_state(3, 3), axis_observable(3), 50, 7);
    CHECK(r.passed);
    CHECK(r.details["members"].get<std::size_t>() > 0);
    CHECK(r.details["non_members"].get<std::size_t>() > 0);
    CHECK(r.details["nonconforming"] == 0);
  }
  SUBCASE("C^2") {
    const auto r = membership_dichotomy_scan(generic_state(2, 4), axis_observable(2), 30, 8);
    CHECK(r.passed);
  }
  SUBCASE("no samples") {
    const auto r = membership_dichotomy_scan(generic_state(2, 4), axis_observable(2), 0, 8);
    CHECK(r.passed);
    CHECK(r.details["vacuous"].get<bool>());
    CHECK(r.details.contains("warning"));
  }
  SUBCASE("deterministic per seed") {
    const auto a = membership_dichotomy_scan(generic_state(3, 5), axis_observable(3), 8, 9);
    const auto b = membership_dichotomy_scan(generic_state(3, 5), axis_observable(3), 8, 9);
    CHECK(a.details == b.details);
  }
}

TEST_CASE("maximality_probe") {
  const double s = 1.0 / std::sqrt(2.0);
  const State e = State::from_vector(vec({s, s}));
  SUBCASE("the diagonal ray is rejected with the first eigenspace as witness") {
    const auto r = maximality_probe(e, axis_observable(2), {ray({s, s})});
    CHECK(r.passed);
    CHECK(r.details["rejected"] == 1);
    CHECK(r.details["findings"][0]["witness_index"] == 0);
  }
  SUBCASE("members are skipped") {
    const auto r = maximality_probe(e, axis_observable(2), {Subspace::axes(2, {0})});
    CHECK(r.passed);
    CHECK(r.details["skipped_members"] == 1);
    CHECK(r.details["non_members"] == 0);
  }
  SUBCASE("degenerate C^4, 30 samples") {
    const Observable r({Subspace::axes(4, {0, 1}), Subspace::axes(4, {2, 3})});
    const auto rep = maximality_probe(generic_state(4, 6), r, 30, 11);
    CHECK(rep.passed);
    CHECK(rep.details["not_rejected"] == 0);
  }
}

TEST_CASE("adjoin_nonmember") {
  const double s = 1.0 / std::sqrt(2.0);
  const auto sp = project_state(State::from_vector(vec({s, s})), axis_observable(2));
  const auto f = adjoin_nonmember(ray({1.0, 2.0}), sp);
  CHECK(f.conclusive);
  CHECK(f.obstructed);
  CHECK(f.lattice == "base");
  CHECK(f.hom_count == 0);
  CHECK_FALSE(f.tp_feasible);
  CHECK(f.to_json()["obstructed"].get<bool>());
  CHECK_THROWS_AS(adjoin_nonmember(Subspace::axes(2, {0}), sp), std::invalid_argument);

  // Forcing the fallback with a tiny cap.
  ScanOptions tiny;
  tiny.max_elements = 7;
  const auto g = adjoin_nonmember(ray({1.0, 2.0}), sp, tiny);
  CHECK(g.base_overflow == false);
  ScanOptions tinier;
  tinier.max_elements = 4;
  const auto h = adjoin_nonmember(ray({1.0, 2.0}), sp, tinier);
  CHECK(h.base_overflow);
  CHECK_FALSE(h.conclusive);
}

TEST_CASE("def_invariance_scan") {
  SUBCASE("identity only") {
    const auto r = def_invariance_scan(generic_state(3, 2), axis_observable(3), 1, 3);
    CHECK(r.passed);
    CHECK(r.details["kind_counts"]["identity"] == 1);
  }
  SUBCASE("phase maps on a 2-dimensional eigenspace") {
    const Observable r({Subspace::axes(3, {0, 1}), Subspace::axes(3, {2})});
    const auto rep = def_invariance_scan(generic_state(3, 4), r, 40, 5);
    CHECK(rep.passed);
    CHECK(rep.details["kind_counts"].contains("phase_map"));
    CHECK(rep.details["members_checked"].get<std::size_t>() > 0);
  }
  SUBCASE("100 trials in C^3") {
    const auto rep = def_invariance_scan(generic_state(3, 6), axis_observable(3), 100, 7, 10);
    CHECK(rep.passed);
    CHECK(rep.details["checks"] == 1000);
  }
  SUBCASE("rotations in a 3-dimensional eigenspace") {
    const Observable r({Subspace::axes(4, {0, 1, 2}), Subspace::axes(4, {3})});
    const auto rep = def_invariance_scan(generic_state(4, 8), r, 30, 9, 10);
    CHECK(rep.passed);
    CHECK(rep.details["kind_counts"].contains("rotation"));
  }
}
