#pragma once

#include "detlat/determinate.hpp"
#include "detlat/ortholattice.hpp"

#include <Eigen/Dense>

#include <variant>
#include <vector>

namespace detlat {

inline constexpr std::size_t kDefaultMaxFamily = 3;
inline constexpr double kFeasibilityResidual = 1e-7;

/// Lattice element indices whose projectors pairwise commute.
struct CompatibleFamily {
  std::vector<FiniteOrtholattice::Index> indices;

  friend bool operator==(const CompatibleFamily&,
                         const CompatibleFamily&) = default;
};

class IncompatibleFamily : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Pairwise commutation table, ||P_i P_j - P_j P_i||_F < eps.
std::vector<std::vector<bool>> commutation_table(
    const FiniteOrtholattice& lattice, Tolerance tol = Tolerance::session());

/// Every family of 1..max_size distinct elements with pairwise commuting
/// projectors: singletons first, then pairs, then triples, each in
/// lexicographic index order.
std::vector<CompatibleFamily> compatible_families(
    const FiniteOrtholattice& lattice, std::size_t max_size = kDefaultMaxFamily,
    Tolerance tol = Tolerance::session());

/// tr(P_e * prod_i P_i), clamped to [0, 1]. Throws IncompatibleFamily when
/// the projectors do not commute.
double born_probability(const State& e, const CompatibleFamily& family,
                        const FiniteOrtholattice& lattice,
                        Tolerance tol = Tolerance::session());

struct MeasureSolution {
  std::vector<double> weights;  // one per homomorphism, nonnegative
  double residual = 0.0;        // max |A w - b|
};

struct Infeasible {
  std::vector<CompatibleFamily> witness_families;  // irreducible conflict
  double residual = 0.0;                           // best achievable max |A w - b|
};

struct TpResult {
  std::vector<TwoValuedHom> homs;
  std::size_t family_count = 0;      // compatible families considered
  std::size_t constraint_count = 0;  // distinct rows after deduplication
  std::variant<MeasureSolution, Infeasible> outcome;

  bool feasible() const {
    return std::holds_alternative<MeasureSolution>(outcome);
  }
  const MeasureSolution& solution() const {
    return std::get<MeasureSolution>(outcome);
  }
  const Infeasible& infeasible() const { return std::get<Infeasible>(outcome); }
};

/// Looks for a nonnegative weight per homomorphism such that, for every
/// compatible family I, the weight of {h : h(p_i) = 1 for all i in I} equals
/// the Born probability of I. Feasible when the max violation is below 1e-7.
TpResult tp_verify(const State& e, const FiniteOrtholattice& lattice,
                   std::vector<TwoValuedHom> homs,
                   std::size_t max_family = kDefaultMaxFamily,
                   Tolerance tol = Tolerance::session());

/// Enumerates the homomorphisms first.
TpResult tp_verify(const State& e, const FiniteOrtholattice& lattice,
                   std::size_t max_family = kDefaultMaxFamily,
                   Tolerance tol = Tolerance::session());

struct NnlsResult {
  Eigen::VectorXd x;
  double residual_inf = 0.0;
};

/// Lawson-Hanson nonnegative least squares: min ||A x - b||_2 s.t. x >= 0.
NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

}  // namespace detlat
