#pragma once

#include "detlat/determinate.hpp"
#include "detlat/ortholattice.hpp"
#include "detlat/probability.hpp"

#include <json.hpp>

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace detlat {

/// Outcome of one executable scenario. `passed` is a pure function of
/// `details`; see recompute_passed().
struct VerificationReport {
  std::string scenario;
  bool passed = false;
  nlohmann::json details;
};

/// Re-derives the verdict of a report from its recorded details.
bool recompute_passed(const VerificationReport& report);

struct ScanOptions {
  std::size_t max_elements = kDefaultMaxElements;
  std::size_t max_family = kDefaultMaxFamily;
  /// Upper bound on the share of samples whose adjunction lattice could not be
  /// materialized before the scan counts as failed.
  double max_inconclusive_rate = 0.2;
};

enum class Automorphism { Reflection, PhaseMap };

const char* to_string(Automorphism kind);

/// The four rays b, b', U(b), U(b)' inside a 2-dimensional eigenspace, where '
/// is the complement within the eigenspace and U is either the reflection
/// through e_r or the diag(i,1) phase map. Counts the 2-valued homomorphisms of
/// the generated lattice that send the eigenspace to 1; passes iff there are
/// none. Throws std::invalid_argument unless b is skew to e_r inside the
/// eigenspace.
VerificationReport four_ray_obstruction(const Subspace& eigenspace,
                                        const Ray& e_r, const Ray& b,
                                        Automorphism kind,
                                        Tolerance tol = Tolerance::session());

/// Standard fixture: eigenspace span(x1, x2) in C^ambient, e_r = x1,
/// b = cos(angle) x1 + sin(angle) x2.
VerificationReport four_ray_obstruction(double angle, int ambient,
                                        Automorphism kind,
                                        Tolerance tol = Tolerance::session());

/// Reflection-only versus phase-map runs on the same ray, in C^3 with one
/// 2-dimensional eigenspace. Passes iff the phase map always yields zero
/// homomorphisms and the reflection admits some exactly when b is at 45
/// degrees to e_r.
VerificationReport forty_five_demo(double angle = std::numbers::pi / 4,
                                   Tolerance tol = Tolerance::session());

/// Samples subspaces (alternating generic draws and random members); members
/// must satisfy the per-index dichotomy and generate TP-feasible sublattices
/// with all r_i and e_{r_i}; non-members must be obstructed after adjunction.
VerificationReport membership_dichotomy_scan(
    const State& e, const Observable& r, std::size_t samples,
    std::uint64_t seed, const ScanOptions& options = {},
    Tolerance tol = Tolerance::session());

/// Rejection witnesses (skew index plus failed TP run) for sampled generic
/// subspaces; members are skipped.
VerificationReport maximality_probe(const State& e, const Observable& r,
                                    std::size_t samples, std::uint64_t seed,
                                    const ScanOptions& options = {},
                                    Tolerance tol = Tolerance::session());

/// Same, over an explicit candidate list.
VerificationReport maximality_probe(const State& e, const Observable& r,
                                    const std::vector<Subspace>& candidates,
                                    const ScanOptions& options = {},
                                    Tolerance tol = Tolerance::session());

/// Builds e,R-preserving unitaries (rotations, reflections, phase maps,
/// eigenspace phases and compositions) and checks membership invariance on
/// `subspaces_per_trial` sampled subspaces each.
VerificationReport def_invariance_scan(const State& e, const Observable& r,
                                       std::size_t trials, std::uint64_t seed,
                                       std::size_t subspaces_per_trial = 50,
                                       Tolerance tol = Tolerance::session());

/// Findings for one non-member after adjoining it to the determinate
/// structure.
struct AdjunctionFinding {
  std::size_t witness_index = 0;  // eigenspace i with e_{r_i} skew to p, p^perp
  bool conclusive = false;
  bool obstructed = false;        // no hom sends e_{r_i} to 1, or TP infeasible
  bool base_overflow = false;     // full base lattice exceeded the cap
  std::string lattice;            // "base" or "witness"
  std::size_t lattice_size = 0;
  std::size_t hom_count = 0;
  std::size_t homs_with_witness_true = 0;
  bool tp_feasible = false;
  double tp_residual = 0.0;

  nlohmann::json to_json() const;
};

/// Adjoins p to {r_j, e_{r_j}} and runs homomorphism enumeration and TP. On
/// overflow falls back to the two-generator lattice of {e_{r_i}, p}.
/// Precondition: p is not a member.
AdjunctionFinding adjoin_nonmember(const Subspace& p, const StateProjections& sp,
                                   const ScanOptions& options = {},
                                   Tolerance tol = Tolerance::session());

}  // namespace detlat
