#include "detlat/verifier.hpp"

#include "detlat/sampling.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace detlat {

using json = nlohmann::json;
using Index = FiniteOrtholattice::Index;

namespace {

// Membership decisions whose margin falls in [kBoundaryLow * eps, 1e-6) are
// too close to the tolerance to be trusted; such samples are redrawn.
constexpr double kBoundaryLow = 1e-3;
constexpr double kBoundaryHigh = 1e-6;
constexpr int kMaxRedraws = 100;

double degrees(double radians) { return radians * 180.0 / std::numbers::pi; }

bool near_boundary(const Subspace& p, const StateProjections& sp,
                   Tolerance tol) {
  const double margin = membership_margin(p, sp);
  return margin >= kBoundaryLow * tol.eps && margin < kBoundaryHigh;
}

// Draws from `draw` until the sample is clear of the membership boundary.
Subspace draw_clear(const std::function<Subspace()>& draw,
                    const StateProjections& sp, Tolerance tol,
                    std::size_t& redraws) {
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    Subspace p = draw();
    if (!near_boundary(p, sp, tol)) return p;
    ++redraws;
  }
  throw std::runtime_error("could not draw a subspace clear of the boundary");
}

std::vector<Subspace> determinate_base(const StateProjections& sp) {
  std::vector<Subspace> base = sp.observable().eigenspaces();
  for (const auto& entry : sp.entries()) base.push_back(entry.projection);
  return base;
}

}  // namespace

const char* to_string(Automorphism kind) {
  return kind == Automorphism::Reflection ? "reflection" : "phase_map";
}

json AdjunctionFinding::to_json() const {
  return json{{"witness_index", witness_index},
              {"conclusive", conclusive},
              {"obstructed", obstructed},
              {"base_overflow", base_overflow},
              {"lattice", lattice},
              {"lattice_size", lattice_size},
              {"hom_count", hom_count},
              {"homs_with_witness_true", homs_with_witness_true},
              {"tp_feasible", tp_feasible},
              {"tp_residual", tp_residual}};
}

VerificationReport four_ray_obstruction(const Subspace& eigenspace,
                                        const Ray& e_r, const Ray& b,
                                        Automorphism kind, Tolerance tol) {
  const int n = eigenspace.ambient_dim();
  if (eigenspace.dim() != 2) {
    throw std::invalid_argument("four-ray argument needs a 2-dimensional eigenspace");
  }
  if (e_r.ambient_dim() != n || b.ambient_dim() != n) {
    throw DimensionMismatch(n, b.ambient_dim());
  }
  if (!leq(e_r, eigenspace, tol) || !leq(b, eigenspace, tol)) {
    throw std::invalid_argument("e_r and b must lie in the eigenspace");
  }
  if (equal(b, e_r, tol) || leq(b, ortho(e_r), tol)) {
    throw std::invalid_argument("b must be skew to e_r (distinct, not orthogonal)");
  }

  // Scenario realizing e_r as the projection of a state onto the eigenspace.
  std::vector<Subspace> spaces{eigenspace};
  const Subspace outside = ortho(eigenspace);
  ComplexVector state = e_r.vector();
  if (!outside.is_null()) {
    spaces.push_back(outside);
    state += outside.basis().col(0);
  }
  const Observable r(std::move(spaces), tol);
  const State e = State::from_vector(state);
  const StateProjections sp = project_state(e, r, tol);

  const ComplexMatrix u =
      kind == Automorphism::Reflection
          ? build_reflection(sp, 0, Subspace::null(n), tol)
          : build_phase_map(sp, 0, tol);
  const bool preserving = is_preserving(u, e, r, tol);

  const Subspace ub = apply_unitary(u, b, tol);
  const Subspace b_perp = relative_ortho(b, eigenspace, tol);
  const Subspace ub_perp = relative_ortho(ub, eigenspace, tol);
  const std::vector<Subspace> rays{b, b_perp, ub, ub_perp};
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < rays.size(); ++i) {
    bool seen = false;
    for (std::size_t j = 0; j < i; ++j) seen = seen || equal(rays[i], rays[j], tol);
    if (!seen) ++distinct;
  }

  std::vector<Subspace> generators = rays;
  generators.push_back(eigenspace);
  const FiniteOrtholattice lattice = generate(generators, kDefaultMaxElements, tol);
  const auto homs = enumerate_homs(lattice);
  const Index space_index = *lattice.find(eigenspace, tol);
  std::size_t on_space = 0;
  for (const auto& h : homs) {
    if (h(space_index)) ++on_space;
  }

  const double cos_angle = std::abs(e_r.vector().dot(Ray::from_subspace(b).vector()));
  VerificationReport report;
  report.scenario = "four-ray";
  report.details = json{
      {"automorphism", to_string(kind)},
      {"ambient_dim", n},
      {"angle_degrees", degrees(std::acos(std::min(1.0, cos_angle)))},
      {"preserving", preserving},
      {"image_equals_b", equal(ub, b, tol)},
      {"image_equals_b_perp", equal(ub, b_perp, tol)},
      {"distinct_rays", distinct},
      {"lattice_size", lattice.size()},
      {"hom_count", homs.size()},
      {"homs_on_eigenspace", on_space}};
  report.passed = recompute_passed(report);
  return report;
}

VerificationReport four_ray_obstruction(double angle, int ambient,
                                        Automorphism kind, Tolerance tol) {
  if (ambient < 2) throw std::invalid_argument("ambient dimension must be >= 2");
  ComplexVector er = ComplexVector::Zero(ambient);
  er(0) = 1.0;
  ComplexVector bv = ComplexVector::Zero(ambient);
  bv(0) = std::cos(angle);
  bv(1) = std::sin(angle);
  return four_ray_obstruction(Subspace::axes(ambient, {0, 1}),
                              Ray::from_vector(er), Ray::from_vector(bv), kind,
                              tol);
}

VerificationReport forty_five_demo(double angle, Tolerance tol) {
  const VerificationReport reflection =
      four_ray_obstruction(angle, 3, Automorphism::Reflection, tol);
  const VerificationReport phase =
      four_ray_obstruction(angle, 3, Automorphism::PhaseMap, tol);
  const double c = std::cos(angle);
  VerificationReport report;
  report.scenario = "forty-five";
  report.details = json{{"angle_degrees", degrees(angle)},
                        {"at_45", std::abs(c * c - 0.5) < 1e-9},
                        {"reflection", reflection.details},
                        {"phase_map", phase.details}};
  report.passed = recompute_passed(report);
  return report;
}

AdjunctionFinding adjoin_nonmember(const Subspace& p, const StateProjections& sp,
                                   const ScanOptions& options, Tolerance tol) {
  AdjunctionFinding finding;
  const Subspace perp = ortho(p);
  const StateProjection* witness = nullptr;
  for (const auto& entry : sp.entries()) {
    if (!leq(entry.projection, p, tol) && !leq(entry.projection, perp, tol)) {
      witness = &entry;
      break;
    }
  }
  if (witness == nullptr) {
    throw std::invalid_argument("adjoin_nonmember: subspace is a member");
  }
  finding.witness_index = witness->eigenspace_index;

  std::optional<FiniteOrtholattice> lattice;
  std::vector<Subspace> base = determinate_base(sp);
  base.push_back(p);
  try {
    lattice = generate(base, options.max_elements, tol);
    finding.lattice = "base";
  } catch (const ClosureOverflow&) {
    finding.base_overflow = true;
  }
  if (!lattice) {
    const std::vector<Subspace> pair{witness->projection, p};
    try {
      lattice = generate(pair, options.max_elements, tol);
      finding.lattice = "witness";
    } catch (const ClosureOverflow&) {
      return finding;
    }
  }

  finding.conclusive = true;
  finding.lattice_size = lattice->size();
  auto homs = enumerate_homs(*lattice);
  finding.hom_count = homs.size();
  const Index w = *lattice->find(witness->projection, tol);
  for (const auto& h : homs) {
    if (h(w)) ++finding.homs_with_witness_true;
  }
  const TpResult tp =
      tp_verify(sp.state(), *lattice, std::move(homs), options.max_family, tol);
  finding.tp_feasible = tp.feasible();
  finding.tp_residual =
      tp.feasible() ? tp.solution().residual : tp.infeasible().residual;
  finding.obstructed = finding.homs_with_witness_true == 0 || !finding.tp_feasible;
  return finding;
}

VerificationReport membership_dichotomy_scan(const State& e, const Observable& r,
                                             std::size_t samples,
                                             std::uint64_t seed,
                                             const ScanOptions& options,
                                             Tolerance tol) {
  const StateProjections sp = project_state(e, r, tol);
  Rng rng(seed);
  MemberSampler sampler(sp, rng(), MemberSampler::Mode::Generic);
  const int n = e.ambient_dim();

  std::size_t members = 0, non_members = 0, conforming = 0, nonconforming = 0;
  std::size_t inconclusive = 0, redraws = 0;
  json findings = json::array();
  for (std::size_t s = 0; s < samples; ++s) {
    const bool want_member = s % 2 == 1;
    const Subspace p = draw_clear(
        [&] { return want_member ? sampler.next() : random_subspace(n, rng); },
        sp, tol, redraws);
    json f{{"sample", s}, {"dim", p.dim()}};
    if (membership_in_D(p, sp, tol)) {
      ++members;
      f["member"] = true;
      const Subspace perp = ortho(p);
      bool dichotomy = true;
      json sides = json::array();
      for (const auto& entry : sp.entries()) {
        const bool in = leq(entry.projection, p, tol);
        const bool out = leq(entry.projection, perp, tol);
        dichotomy = dichotomy && (in || out);
        sides.push_back(in ? "p" : (out ? "p_perp" : "neither"));
      }
      f["dichotomy"] = dichotomy;
      f["sides"] = sides;
      std::vector<Subspace> gens = determinate_base(sp);
      gens.push_back(p);
      try {
        const FiniteOrtholattice lattice = generate(gens, options.max_elements, tol);
        const bool inside = is_sublattice_of_D(lattice, sp, tol);
        const TpResult tp = tp_verify(e, lattice, options.max_family, tol);
        f["lattice_size"] = lattice.size();
        f["sublattice_of_D"] = inside;
        f["hom_count"] = tp.homs.size();
        f["tp_feasible"] = tp.feasible();
        f["tp_residual"] =
            tp.feasible() ? tp.solution().residual : tp.infeasible().residual;
        f["conclusive"] = true;
        f["conforms"] = dichotomy && inside && tp.feasible();
      } catch (const ClosureOverflow&) {
        f["conclusive"] = false;
        f["conforms"] = false;
      }
    } else {
      ++non_members;
      f["member"] = false;
      const AdjunctionFinding adj = adjoin_nonmember(p, sp, options, tol);
      f["adjunction"] = adj.to_json();
      f["conclusive"] = adj.conclusive;
      f["conforms"] = adj.conclusive && adj.obstructed;
    }
    if (!f["conclusive"].get<bool>()) {
      ++inconclusive;
    } else if (f["conforms"].get<bool>()) {
      ++conforming;
    } else {
      ++nonconforming;
    }
    findings.push_back(std::move(f));
  }

  VerificationReport report;
  report.scenario = "dichotomy";
  report.details = json{
      {"samples", samples},
      {"seed", seed},
      {"members", members},
      {"non_members", non_members},
      {"conforming", conforming},
      {"nonconforming", nonconforming},
      {"inconclusive", inconclusive},
      {"inconclusive_rate",
       samples == 0 ? 0.0 : static_cast<double>(inconclusive) / samples},
      {"max_inconclusive_rate", options.max_inconclusive_rate},
      {"redrawn_near_boundary", redraws},
      {"vacuous", samples == 0},
      {"findings", findings}};
  if (samples == 0) report.details["warning"] = "no samples: vacuous pass";
  report.passed = recompute_passed(report);
  return report;
}

VerificationReport maximality_probe(const State& e, const Observable& r,
                                    const std::vector<Subspace>& candidates,
                                    const ScanOptions& options, Tolerance tol) {
  const StateProjections sp = project_state(e, r, tol);
  std::size_t skipped = 0, rejected = 0, not_rejected = 0, inconclusive = 0;
  json findings = json::array();
  for (std::size_t s = 0; s < candidates.size(); ++s) {
    const Subspace& p = candidates[s];
    if (membership_in_D(p, sp, tol)) {
      ++skipped;
      findings.push_back(json{{"candidate", s}, {"member", true}, {"skipped", true}});
      continue;
    }
    const AdjunctionFinding adj = adjoin_nonmember(p, sp, options, tol);
    json f{{"candidate", s},
           {"member", false},
           {"dim", p.dim()},
           {"witness_index", adj.witness_index},
           {"adjunction", adj.to_json()}};
    if (!adj.conclusive) {
      ++inconclusive;
    } else if (adj.obstructed) {
      ++rejected;
    } else {
      ++not_rejected;
    }
    f["rejected"] = adj.conclusive && adj.obstructed;
    findings.push_back(std::move(f));
  }
  const std::size_t probed = candidates.size() - skipped;
  VerificationReport report;
  report.scenario = "maximality";
  report.details = json{
      {"candidates", candidates.size()},
      {"skipped_members", skipped},
      {"non_members", probed},
      {"rejected", rejected},
      {"not_rejected", not_rejected},
      {"inconclusive", inconclusive},
      {"inconclusive_rate",
       probed == 0 ? 0.0 : static_cast<double>(inconclusive) / probed},
      {"max_inconclusive_rate", options.max_inconclusive_rate},
      {"coverage", "sampled candidates only; not a proof over all subspaces"},
      {"findings", findings}};
  report.passed = recompute_passed(report);
  return report;
}

VerificationReport maximality_probe(const State& e, const Observable& r,
                                    std::size_t samples, std::uint64_t seed,
                                    const ScanOptions& options, Tolerance tol) {
  const StateProjections sp = project_state(e, r, tol);
  Rng rng(seed);
  std::size_t redraws = 0;
  std::vector<Subspace> candidates;
  for (std::size_t s = 0; s < samples; ++s) {
    candidates.push_back(draw_clear(
        [&] { return random_subspace(e.ambient_dim(), rng); }, sp, tol, redraws));
  }
  VerificationReport report = maximality_probe(e, r, candidates, options, tol);
  report.details["seed"] = seed;
  report.details["redrawn_near_boundary"] = redraws;
  return report;
}

VerificationReport def_invariance_scan(const State& e, const Observable& r,
                                       std::size_t trials, std::uint64_t seed,
                                       std::size_t subspaces_per_trial,
                                       Tolerance tol) {
  const StateProjections sp = project_state(e, r, tol);
  const int n = e.ambient_dim();
  Rng rng(seed);
  MemberSampler sampler(sp, rng(), MemberSampler::Mode::Generic);

  std::vector<std::size_t> rotatable, reflectable, phaseable;
  for (const auto& entry : sp.entries()) {
    const int d = r.eigenspace(entry.eigenspace_index).dim();
    if (d >= 3) rotatable.push_back(entry.eigenspace_index);
    if (d >= 2) reflectable.push_back(entry.eigenspace_index);
    if (d == 2) phaseable.push_back(entry.eigenspace_index);
  }
  std::vector<std::string> kinds{"eigenspace_phases", "composition"};
  if (!rotatable.empty()) kinds.push_back("rotation");
  if (!reflectable.empty()) kinds.push_back("reflection");
  if (!phaseable.empty()) kinds.push_back("phase_map");

  auto pick = [&](const std::vector<std::size_t>& from) {
    return from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)];
  };
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  std::function<ComplexMatrix(const std::string&)> build =
      [&](const std::string& kind) -> ComplexMatrix {
    if (kind == "rotation") {
      const std::size_t i = pick(rotatable);
      const double a = angle(rng);
      return build_rotation(sp, i, a, rng(), tol);
    }
    if (kind == "reflection") {
      const std::size_t i = pick(reflectable);
      const Subspace c = random_subspace_of(projection_complement(sp, i, tol), rng);
      return build_reflection(sp, i, c, tol);
    }
    if (kind == "phase_map") return build_phase_map(sp, pick(phaseable), tol);
    if (kind == "eigenspace_phases") {
      std::vector<double> phases;
      for (std::size_t i = 0; i < r.size(); ++i) phases.push_back(angle(rng));
      return build_eigenspace_phases(r, phases);
    }
    // Composition of two or three non-composite factors.
    const int factors = std::uniform_int_distribution<int>(2, 3)(rng);
    ComplexMatrix u = ComplexMatrix::Identity(n, n);
    for (int f = 0; f < factors; ++f) {
      std::string k;
      do {
        k = kinds[std::uniform_int_distribution<std::size_t>(0, kinds.size() - 1)(rng)];
      } while (k == "composition");
      u = build(k) * u;
    }
    return u;
  };

  std::map<std::string, std::size_t> kind_counts;
  std::size_t non_preserving = 0, violations = 0, checks = 0, members_seen = 0,
              redraws = 0;
  json counterexamples = json::array();
  for (std::size_t t = 0; t < trials; ++t) {
    const std::string kind =
        t == 0 ? "identity"
               : kinds[std::uniform_int_distribution<std::size_t>(0, kinds.size() - 1)(rng)];
    const ComplexMatrix u =
        kind == "identity" ? ComplexMatrix::Identity(n, n) : build(kind);
    ++kind_counts[kind];
    if (!is_preserving(u, e, r, tol)) {
      ++non_preserving;
      counterexamples.push_back(json{{"trial", t}, {"kind", kind}, {"reason", "not preserving"}});
      continue;
    }
    for (std::size_t j = 0; j < subspaces_per_trial; ++j) {
      const bool want_member = j % 2 == 1;
      const Subspace p = draw_clear(
          [&] { return want_member ? sampler.next() : random_subspace(n, rng); },
          sp, tol, redraws);
      const bool before = membership_in_D(p, sp, tol);
      const bool after = membership_in_D(apply_unitary(u, p, tol), sp, tol);
      ++checks;
      if (before) ++members_seen;
      if (before != after) {
        ++violations;
        counterexamples.push_back(json{{"trial", t},
                                       {"kind", kind},
                                       {"subspace", j},
                                       {"member_before", before},
                                       {"member_after", after}});
      }
    }
  }

  VerificationReport report;
  report.scenario = "def-invariance";
  report.details = json{{"trials", trials},
                        {"seed", seed},
                        {"kind_counts", kind_counts},
                        {"non_preserving", non_preserving},
                        {"checks", checks},
                        {"members_checked", members_seen},
                        {"violations", violations},
                        {"redrawn_near_boundary", redraws},
                        {"counterexamples", counterexamples}};
  report.passed = recompute_passed(report);
  return report;
}

bool recompute_passed(const VerificationReport& report) {
  const json& d = report.details;
  if (report.scenario == "four-ray") {
    return d.at("preserving").get<bool>() &&
           d.at("homs_on_eigenspace").get<std::size_t>() == 0;
  }
  if (report.scenario == "forty-five") {
    const json& refl = d.at("reflection");
    const json& phase = d.at("phase_map");
    const bool reflection_admits = refl.at("homs_on_eigenspace").get<std::size_t>() >= 1;
    return refl.at("preserving").get<bool>() && phase.at("preserving").get<bool>() &&
           phase.at("homs_on_eigenspace").get<std::size_t>() == 0 &&
           reflection_admits == d.at("at_45").get<bool>();
  }
  if (report.scenario == "dichotomy" || report.scenario == "maximality") {
    const std::size_t bad = report.scenario == "dichotomy"
                                ? d.at("nonconforming").get<std::size_t>()
                                : d.at("not_rejected").get<std::size_t>();
    return bad == 0 && d.at("inconclusive_rate").get<double>() <=
                           d.at("max_inconclusive_rate").get<double>();
  }
  if (report.scenario == "def-invariance") {
    return d.at("non_preserving").get<std::size_t>() == 0 &&
           d.at("violations").get<std::size_t>() == 0;
  }
  throw std::invalid_argument("unknown scenario: " + report.scenario);
}

}  // namespace detlat
