#include "detlat/cli.hpp"

#include "detlat/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

namespace detlat::cli {

namespace {

using io::json;

struct Flags {
  std::optional<double> tol;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t samples = 50;
  std::size_t max_elements = kDefaultMaxElements;
  std::size_t max_family = kDefaultMaxFamily;
};

class Context {
 public:
  Context(const Flags& flags, std::istream& in, std::ostream& out,
          std::ostream& err)
      : flags_(flags), in_(in), out_(out), err_(err) {}

  json read(const std::vector<std::string>& files, std::size_t which,
            bool required = true) const {
    if (which >= files.size() && !(which == 0 && required)) return json();
    const std::string path = which < files.size() ? files[which] : "-";
    std::stringstream buffer;
    if (path == "-") {
      buffer << in_.rdbuf();
    } else {
      std::ifstream file(path);
      if (!file) throw io::InputError(path, "cannot open file");
      buffer << file.rdbuf();
    }
    return io::parse_document(buffer.str(), path == "-" ? "<stdin>" : path);
  }

  // Installs the session tolerance: flag first, then the document's override.
  void install_tolerance(const json& doc) const {
    std::optional<double> tol = flags_.tol;
    if (!tol && !doc.is_null()) tol = io::scenario_tolerance(doc);
    try {
      Tolerance::set_session(Tolerance(tol.value_or(1e-9)));
    } catch (const std::invalid_argument& e) {
      throw io::InputError("tol", e.what());
    }
  }

  io::Scenario scenario(const json& doc) const {
    install_tolerance(doc);
    return io::load_scenario(doc);
  }

  std::uint64_t seed(const io::Scenario* s) const {
    if (flags_.seed_given || s == nullptr || !s->seed) return flags_.seed;
    return *s->seed;
  }

  int emit(const json& doc, int code) const {
    out_ << doc.dump(2) << "\n";
    return code;
  }

  const Flags& flags() const { return flags_; }
  std::ostream& err() const { return err_; }

 private:
  const Flags& flags_;
  std::istream& in_;
  std::ostream& out_;
  std::ostream& err_;
};

std::vector<Subspace> generators_from(const json& j, const std::string& field,
                                      int n) {
  const json* list = &j;
  std::string list_field = field;
  if (j.is_object()) {
    if (!j.contains("generators")) {
      throw io::InputError(field + ".generators", "missing required field");
    }
    list = &j.at("generators");
    list_field = field + ".generators";
  }
  if (!list->is_array()) {
    throw io::InputError(list_field, "expected an array of subspaces");
  }
  std::vector<Subspace> out;
  for (std::size_t i = 0; i < list->size(); ++i) {
    out.push_back(io::subspace_from_json(
        (*list)[i], list_field + "[" + std::to_string(i) + "]", n));
  }
  return out;
}

int cmd_project(const Context& ctx, const std::vector<std::string>& files) {
  const io::Scenario s = ctx.scenario(ctx.read(files, 0));
  const StateProjections sp = project_state(s.state, s.observable);
  return ctx.emit(io::to_json(sp), kPassed);
}

int cmd_member(const Context& ctx, const std::vector<std::string>& files) {
  const json doc = ctx.read(files, 0);
  const io::Scenario s = ctx.scenario(doc);
  const int n = s.state.ambient_dim();
  Subspace p = Subspace::null(n);
  if (files.size() > 1) {
    p = io::subspace_from_json(ctx.read(files, 1), files[1], n);
  } else if (doc.contains("subspace")) {
    p = io::subspace_from_json(doc.at("subspace"), "subspace", n);
  } else {
    throw io::InputError("subspace", "missing: give it in the scenario or as a second file");
  }
  const StateProjections sp = project_state(s.state, s.observable);
  const auto decomposition = canonical_decomposition(p, sp);
  json out{{"member", decomposition.has_value()}, {"subspace", io::to_json(p)}};
  out["decomposition"] = decomposition ? io::to_json(*decomposition) : json();
  if (!decomposition) {
    const Subspace perp = ortho(p);
    for (const auto& entry : sp.entries()) {
      if (!leq(entry.projection, p) && !leq(entry.projection, perp)) {
        out["witness_index"] = entry.eigenspace_index;
        break;
      }
    }
  }
  return ctx.emit(out, kPassed);
}

int cmd_homs(const Context& ctx, const std::vector<std::string>& files) {
  const json doc = ctx.read(files, 0);
  ctx.install_tolerance(doc);
  if (!doc.is_object() || !doc.contains("ambient_dim") ||
      !doc.at("ambient_dim").is_number_integer() ||
      doc.at("ambient_dim").get<int>() < 1) {
    throw io::InputError("ambient_dim", "expected a positive integer");
  }
  const int n = doc.at("ambient_dim").get<int>();
  const auto gens = generators_from(doc, "lattice", n);
  const FiniteOrtholattice lattice = generate(n, gens, ctx.flags().max_elements);
  return ctx.emit(io::lattice_to_json(lattice, enumerate_homs(lattice)), kPassed);
}

int cmd_tp(const Context& ctx, const std::vector<std::string>& files) {
  const json doc = ctx.read(files, 0);
  const io::Scenario s = ctx.scenario(doc);
  const int n = s.state.ambient_dim();
  std::vector<Subspace> gens = s.observable.eigenspaces();
  if (files.size() > 1) {
    gens = generators_from(ctx.read(files, 1), files[1], n);
  } else if (doc.contains("generators")) {
    gens = generators_from(doc, "scenario", n);
  }
  const FiniteOrtholattice lattice = generate(n, gens, ctx.flags().max_elements);
  const TpResult tp = tp_verify(s.state, lattice, ctx.flags().max_family);
  json out = io::to_json(tp);
  out["lattice_size"] = lattice.size();
  return ctx.emit(out, tp.feasible() ? kPassed : kVerificationFailed);
}

io::Scenario default_fixture() {
  // C^3 with a 2-dimensional eigenspace, so every automorphism kind applies.
  ComplexVector e(3);
  e << 1.0, 1.0, 1.0;
  return io::Scenario{
      State::from_vector(e),
      Observable({Subspace::axes(3, {0, 1}), Subspace::axes(3, {2})}),
      std::nullopt, std::nullopt, json()};
}

int report_code(const VerificationReport& r) {
  if (r.passed) return kPassed;
  const json& d = r.details;
  const bool only_inconclusive =
      d.contains("inconclusive") && d.at("inconclusive").get<std::size_t>() > 0 &&
      d.value("nonconforming", std::size_t{0}) == 0 &&
      d.value("not_rejected", std::size_t{0}) == 0;
  return only_inconclusive ? kInconclusive : kVerificationFailed;
}

int cmd_demo(const Context& ctx, const std::string& name,
             const std::vector<std::string>& files, double angle_degrees,
             const std::string& automorphism) {
  const double angle = angle_degrees * std::numbers::pi / 180.0;
  if (name == "forty-five" || name == "four-ray") {
    ctx.install_tolerance(json());
    VerificationReport r;
    if (name == "forty-five") {
      r = forty_five_demo(angle);
    } else {
      if (automorphism != "reflection" && automorphism != "phase") {
        throw io::InputError("--automorphism", "expected reflection or phase");
      }
      r = four_ray_obstruction(angle, 3,
                               automorphism == "reflection"
                                   ? Automorphism::Reflection
                                   : Automorphism::PhaseMap);
    }
    return ctx.emit(io::to_json(r), report_code(r));
  }

  std::optional<io::Scenario> loaded;
  if (!files.empty()) {
    loaded = ctx.scenario(ctx.read(files, 0));
  } else {
    ctx.install_tolerance(json());
    loaded = default_fixture();
  }
  const io::Scenario& s = *loaded;
  ScanOptions options;
  options.max_elements = ctx.flags().max_elements;
  options.max_family = ctx.flags().max_family;
  const std::uint64_t seed = ctx.seed(files.empty() ? nullptr : &s);
  const std::size_t samples = ctx.flags().samples;

  VerificationReport r;
  if (name == "dichotomy") {
    r = membership_dichotomy_scan(s.state, s.observable, samples, seed, options);
  } else if (name == "maximality") {
    r = maximality_probe(s.state, s.observable, samples, seed, options);
  } else if (name == "def-invariance") {
    r = def_invariance_scan(s.state, s.observable, samples, seed);
  } else {
    throw io::InputError("demo", "unknown demo '" + name + "'");
  }
  return ctx.emit(io::to_json(r), report_code(r));
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Determinate sublattice construction and verification", "detlat"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags flags;
  double tol = 1e-9;
  auto* tol_opt = app.add_option("--tol", tol, "Rank/inclusion tolerance (default 1e-9)");
  auto* seed_opt = app.add_option("--seed", flags.seed, "Random seed (default 0)");
  app.add_option("--samples", flags.samples, "Samples/trials for scans (default 50)");
  app.add_option("--max-elements", flags.max_elements,
                 "Lattice generation cap (default 4096)");
  app.add_option("--max-family", flags.max_family,
                 "Largest compatible family in TP constraints (default 3)");

  std::vector<std::string> files;
  auto* project = app.add_subcommand("project", "Nonzero projections of the state");
  project->add_option("files", files, "Scenario JSON (default stdin)");
  auto* member = app.add_subcommand("member", "Membership in D(e,R) and decomposition");
  member->add_option("files", files, "Scenario JSON [subspace JSON]");
  auto* homs = app.add_subcommand("homs", "Generate a lattice and list its 2-valued homomorphisms");
  homs->add_option("files", files, "Lattice JSON {ambient_dim, generators}");
  auto* tp = app.add_subcommand("tp", "Measure over homomorphisms reproducing Born probabilities");
  tp->add_option("files", files, "Scenario JSON [generators JSON]");
  auto* demo = app.add_subcommand("demo", "Run a verification scenario");
  std::string demo_name;
  double angle = 45.0;
  std::string automorphism = "phase";
  demo->add_option("name", demo_name, "forty-five | four-ray | dichotomy | maximality | def-invariance")
      ->required()
      ->check(CLI::IsMember({"forty-five", "four-ray", "dichotomy", "maximality",
                             "def-invariance"}));
  demo->add_option("files", files, "Scenario JSON (built-in fixture if omitted)");
  demo->add_option("--angle", angle, "Angle of b to e_r in degrees (default 45)");
  demo->add_option("--automorphism", automorphism, "reflection | phase (four-ray)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kPassed;
  } catch (const CLI::ParseError& e) {
    err << "detlat: " << e.what() << "\n";
    out << json{{"error", e.what()}}.dump(2) << "\n";
    return kInputError;
  }
  if (*tol_opt) flags.tol = tol;
  flags.seed_given = static_cast<bool>(*seed_opt);

  const Context ctx(flags, in, out, err);
  try {
    if (*project) return cmd_project(ctx, files);
    if (*member) return cmd_member(ctx, files);
    if (*homs) return cmd_homs(ctx, files);
    if (*tp) return cmd_tp(ctx, files);
    return cmd_demo(ctx, demo_name, files, angle, automorphism);
  } catch (const io::InputError& e) {
    err << "detlat: input error: " << e.what() << "\n";
    out << json{{"error", e.what()}, {"field", e.field()}}.dump(2) << "\n";
    return kInputError;
  } catch (const ClosureOverflow& e) {
    err << "detlat: inconclusive: " << e.what() << "\n";
    out << json{{"inconclusive", true}, {"reason", e.what()},
                {"max_elements", e.max_elements()}}.dump(2)
        << "\n";
    return kInconclusive;
  } catch (const std::invalid_argument& e) {
    err << "detlat: invalid input: " << e.what() << "\n";
    out << json{{"error", e.what()}}.dump(2) << "\n";
    return kInputError;
  }
}

}  // namespace detlat::cli
