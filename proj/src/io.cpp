#include "detlat/io.hpp"

#include <cmath>

namespace detlat::io {

namespace {

std::string at(const std::string& field, std::size_t i) {
  return field + "[" + std::to_string(i) + "]";
}

std::string dot(const std::string& field, const std::string& key) {
  return field.empty() ? key : field + "." + key;
}

const json& require(const json& j, const std::string& key,
                    const std::string& field) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(dot(field, key), "missing required field");
  }
  return j.at(key);
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw InputError(field, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw InputError(field, "non-finite number");
  return x;
}

}  // namespace

InputError::InputError(std::string field, const std::string& message)
    : std::runtime_error(field.empty() ? message : field + ": " + message),
      field_(std::move(field)) {}

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j, const std::string& field) {
  if (j.is_number()) return {number(j, field), 0.0};
  if (!j.is_array() || j.size() != 2) {
    throw InputError(field, "expected a complex number as [re, im]");
  }
  return {number(j[0], at(field, 0)), number(j[1], at(field, 1))};
}

json to_json(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

ComplexVector vector_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw InputError(field, "expected a non-empty array of complex entries");
  }
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], at(field, i));
  }
  return v;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw InputError(field, "expected a non-empty array of rows");
  }
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  ComplexMatrix m(static_cast<Eigen::Index>(j.size()),
                  static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw InputError(at(field, r), "rows must have equal length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          complex_from_json(j[r][c], at(at(field, r), c));
    }
  }
  return m;
}

json to_json(const Subspace& s) {
  json basis = json::array();
  for (Eigen::Index c = 0; c < s.basis().cols(); ++c) {
    basis.push_back(to_json(ComplexVector(s.basis().col(c))));
  }
  return json{{"ambient_dim", s.ambient_dim()}, {"basis", basis}};
}

Subspace subspace_from_json(const json& j, const std::string& field,
                            std::optional<int> ambient_dim) {
  const json* columns = &j;
  std::string columns_field = field;
  if (j.is_object()) {
    const json& n = require(j, "ambient_dim", field);
    if (!n.is_number_integer() || n.get<int>() < 1) {
      throw InputError(dot(field, "ambient_dim"), "expected a positive integer");
    }
    if (ambient_dim && *ambient_dim != n.get<int>()) {
      throw InputError(dot(field, "ambient_dim"),
                       "expected " + std::to_string(*ambient_dim));
    }
    ambient_dim = n.get<int>();
    columns = &require(j, "basis", field);
    columns_field = dot(field, "basis");
  }
  if (!ambient_dim) {
    throw InputError(field, "expected {\"ambient_dim\", \"basis\"}");
  }
  if (!columns->is_array()) {
    throw InputError(columns_field, "expected an array of column vectors");
  }
  ComplexMatrix m(*ambient_dim, static_cast<Eigen::Index>(columns->size()));
  for (std::size_t c = 0; c < columns->size(); ++c) {
    const ComplexVector v = vector_from_json((*columns)[c], at(columns_field, c));
    if (v.size() != *ambient_dim) {
      throw InputError(at(columns_field, c),
                       "column has " + std::to_string(v.size()) +
                           " entries, expected " + std::to_string(*ambient_dim));
    }
    m.col(static_cast<Eigen::Index>(c)) = v;
  }
  if (m.cols() == 0) return Subspace::null(*ambient_dim);
  return Subspace::span(m);
}

json to_json(const StateProjections& sp) {
  json entries = json::array();
  double total = 0.0;
  for (const auto& e : sp.entries()) {
    entries.push_back(json{{"eigenspace_index", e.eigenspace_index},
                           {"projection", to_json(e.projection.vector())},
                           {"weight", e.weight}});
    total += e.weight;
  }
  return json{{"entries", entries},
              {"dropped", sp.dropped()},
              {"weight_sum", total}};
}

json to_json(const Decomposition& d) {
  return json{{"selected", d.selected}, {"residue", to_json(d.residue)}};
}

json lattice_to_json(const FiniteOrtholattice& lattice,
                     const std::vector<TwoValuedHom>& homs) {
  json elements = json::array();
  for (const auto& s : lattice.elements()) elements.push_back(to_json(s));
  json bits = json::array();
  for (const auto& h : homs) bits.push_back(h.bits());
  return json{{"ambient_dim", lattice.ambient_dim()},
              {"size", lattice.size()},
              {"elements", elements},
              {"complement", lattice.complement_map()},
              {"homomorphisms", bits},
              {"hom_count", homs.size()}};
}

json to_json(const TpResult& tp) {
  json out{{"feasible", tp.feasible()},
           {"hom_count", tp.homs.size()},
           {"family_count", tp.family_count},
           {"constraint_count", tp.constraint_count}};
  if (tp.feasible()) {
    out["weights"] = tp.solution().weights;
    out["residual"] = tp.solution().residual;
    out["witness_families"] = json::array();
  } else {
    out["weights"] = json::array();
    out["residual"] = tp.infeasible().residual;
    json families = json::array();
    for (const auto& f : tp.infeasible().witness_families) {
      families.push_back(f.indices);
    }
    out["witness_families"] = families;
  }
  json bits = json::array();
  for (const auto& h : tp.homs) bits.push_back(h.bits());
  out["homomorphisms"] = bits;
  return out;
}

json to_json(const VerificationReport& report) {
  return json{{"scenario", report.scenario},
              {"passed", report.passed},
              {"details", report.details}};
}

std::optional<double> scenario_tolerance(const json& doc) {
  if (!doc.is_object() || !doc.contains("tol")) return std::nullopt;
  return number(doc.at("tol"), "tol");
}

Scenario load_scenario(const json& doc) {
  if (!doc.is_object()) throw InputError("", "scenario must be a JSON object");
  const ComplexVector v = vector_from_json(require(doc, "state", ""), "state");
  const int n = static_cast<int>(v.size());
  std::optional<State> state;
  try {
    state = State::from_vector(v);
  } catch (const std::invalid_argument& e) {
    throw InputError("state", e.what());
  }
  if (std::abs(v.norm() - 1.0) > 1e-6) {
    throw InputError("state", "state vector must be normalized (norm " +
                                  std::to_string(v.norm()) + ")");
  }

  const json& obs = require(doc, "observable", "");
  std::optional<Observable> observable;
  try {
    if (obs.is_object() && obs.contains("hermitian")) {
      const ComplexMatrix h = matrix_from_json(obs.at("hermitian"), "observable.hermitian");
      observable = Observable::from_hermitian(h);
    } else {
      const json& spaces = require(obs, "eigenspaces", "observable");
      if (!spaces.is_array() || spaces.empty()) {
        throw InputError("observable.eigenspaces", "expected a non-empty array");
      }
      std::vector<Subspace> list;
      for (std::size_t i = 0; i < spaces.size(); ++i) {
        list.push_back(subspace_from_json(spaces[i], at("observable.eigenspaces", i), n));
      }
      observable = Observable(std::move(list));
    }
  } catch (const InputError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw InputError("observable", e.what());
  }
  if (observable->ambient_dim() != n) {
    throw InputError("observable", "ambient dimension " +
                                       std::to_string(observable->ambient_dim()) +
                                       " does not match state dimension " +
                                       std::to_string(n));
  }

  Scenario s{*state, *observable, scenario_tolerance(doc), std::nullopt, doc};
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) {
      throw InputError("seed", "expected a nonnegative integer");
    }
    s.seed = doc.at("seed").get<std::uint64_t>();
  }
  return s;
}

json parse_document(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(source, e.what());
  }
}

}  // namespace detlat::io
