#pragma once

#include "detlat/determinate.hpp"
#include "detlat/ortholattice.hpp"
#include "detlat/probability.hpp"
#include "detlat/verifier.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace detlat::io {

using json = nlohmann::json;

/// Malformed or invalid input; `field` is a dotted path into the document.
class InputError : public std::runtime_error {
 public:
  InputError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Complex numbers are [re, im] pairs (a bare number is read as real).
json to_json(Complex z);
Complex complex_from_json(const json& j, const std::string& field);

json to_json(const ComplexVector& v);
ComplexVector vector_from_json(const json& j, const std::string& field);

/// Row-major: an array of rows, each an array of pairs.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j, const std::string& field);

/// { "ambient_dim": n, "basis": [ column, ... ] }, columns as vectors.
json to_json(const Subspace& s);
/// Accepts the object form, or a bare array of column vectors when
/// `ambient_dim` is known. Columns are re-orthonormalized.
Subspace subspace_from_json(const json& j, const std::string& field,
                            std::optional<int> ambient_dim = std::nullopt);

json to_json(const StateProjections& sp);
json to_json(const Decomposition& d);

/// Element list, complement map and homomorphisms as bit strings.
json lattice_to_json(const FiniteOrtholattice& lattice,
                     const std::vector<TwoValuedHom>& homs);

/// { "feasible", "weights", "residual", "witness_families", ... }.
json to_json(const TpResult& tp);

json to_json(const VerificationReport& report);

/// Scenario document: { "state": vector, "observable": { "eigenspaces": [...] }
/// | { "hermitian": matrix }, "tol"?, "seed"?, ... }.
struct Scenario {
  State state;
  Observable observable;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  json raw;
};

/// Reads only the "tol" override, so it can be installed before validation.
std::optional<double> scenario_tolerance(const json& doc);

/// Validates state and observable invariants; throws InputError naming the
/// offending field.
Scenario load_scenario(const json& doc);

/// Parses text, converting parse failures into InputError with line/column.
json parse_document(const std::string& text, const std::string& source);

}  // namespace detlat::io
