#include "detlat/probability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace detlat {

using Index = FiniteOrtholattice::Index;

std::vector<std::vector<bool>> commutation_table(
    const FiniteOrtholattice& lattice, Tolerance tol) {
  const std::size_t n = lattice.size();
  std::vector<std::vector<bool>> table(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    table[i][i] = true;
    for (std::size_t j = 0; j < i; ++j) {
      const bool c =
          commutator_norm(lattice.elements()[i], lattice.elements()[j]) <
          tol.eps;
      table[i][j] = table[j][i] = c;
    }
  }
  return table;
}

std::vector<CompatibleFamily> compatible_families(
    const FiniteOrtholattice& lattice, std::size_t max_size, Tolerance tol) {
  const auto n = static_cast<Index>(lattice.size());
  const auto commute = commutation_table(lattice, tol);
  std::vector<std::vector<Index>> later(n);  // commuting partners j > i
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (commute[i][j]) later[i].push_back(j);
    }
  }

  std::vector<CompatibleFamily> out;
  std::vector<Index> current;
  // Depth-first extension restricted to one target size keeps the output
  // grouped by size.
  std::function<void(std::size_t, const std::vector<Index>&)> extend =
      [&](std::size_t target, const std::vector<Index>& candidates) {
        if (current.size() == target) {
          out.push_back({current});
          return;
        }
        for (Index c : candidates) {
          std::vector<Index> next;
          for (Index d : later[c]) {
            if (std::binary_search(candidates.begin(), candidates.end(), d)) {
              next.push_back(d);
            }
          }
          current.push_back(c);
          if (current.size() == target || !next.empty()) extend(target, next);
          current.pop_back();
        }
      };
  std::vector<Index> all(n);
  for (Index i = 0; i < n; ++i) all[i] = i;
  for (std::size_t size = 1; size <= max_size && size <= n; ++size) {
    extend(size, all);
  }
  return out;
}

double born_probability(const State& e, const CompatibleFamily& family,
                        const FiniteOrtholattice& lattice, Tolerance tol) {
  for (std::size_t a = 0; a < family.indices.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      if (commutator_norm(lattice.element(family.indices[a]),
                          lattice.element(family.indices[b])) >= tol.eps) {
        throw IncompatibleFamily("family elements " +
                                 std::to_string(family.indices[b]) + " and " +
                                 std::to_string(family.indices[a]) +
                                 " do not commute");
      }
    }
  }
  ComplexVector v = e.vector();
  for (auto it = family.indices.rbegin(); it != family.indices.rend(); ++it) {
    v = lattice.element(*it).projector() * v;
  }
  const Complex value = e.vector().dot(v);
  if (std::abs(value.imag()) > 1e-10 || value.real() < -1e-10 ||
      value.real() > 1.0 + 1e-10) {
    throw std::logic_error("Born probability outside [0,1]: " +
                           std::to_string(value.real()) + "+" +
                           std::to_string(value.imag()) + "i");
  }
  return std::clamp(value.real(), 0.0, 1.0);
}

NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff() * (b.size() ? b.cwiseAbs().maxCoeff() : 1.0));
  const double grad_tol = 1e-13 * scale * static_cast<double>(std::max<Eigen::Index>(m, 1));

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
    }
    Eigen::MatrixXd sub(m, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) {
      sub.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
    }
    const Eigen::VectorXd zs =
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(sub).solve(b);
    z = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      z(cols[k]) = zs(static_cast<Eigen::Index>(k));
    }
  };

  const int max_outer = static_cast<int>(3 * n + 10);
  for (int outer = 0; outer < max_outer; ++outer) {
    const Eigen::VectorXd grad = a.transpose() * (b - a * x);
    Eigen::Index best = -1;
    double best_value = grad_tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && grad(j) > best_value) {
        best_value = grad(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;

    for (int inner = 0; inner <= n; ++inner) {
      Eigen::VectorXd z;
      solve_passive(z);
      bool all_positive = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
          all_positive = false;
        }
      }
      if (all_positive) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
          alpha = std::min(alpha, x(j) / (x(j) - z(j)));
        }
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x(j) <= 1e-15) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
    }
  }
  NnlsResult result{x, 0.0};
  result.residual_inf = m == 0 ? 0.0 : (a * x - b).cwiseAbs().maxCoeff();
  return result;
}

namespace {

struct Row {
  std::vector<std::uint64_t> pattern;  // bit h set iff h(p_i) = 1 for all i
  double rhs;
  CompatibleFamily family;
};

NnlsResult solve_rows(const std::vector<Row>& rows,
                      const std::vector<std::size_t>& which,
                      std::size_t hom_count) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(which.size()),
                    static_cast<Eigen::Index>(hom_count));
  Eigen::VectorXd b(static_cast<Eigen::Index>(which.size()));
  for (std::size_t r = 0; r < which.size(); ++r) {
    const Row& row = rows[which[r]];
    for (std::size_t h = 0; h < hom_count; ++h) {
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(h)) =
          (row.pattern[h / 64] >> (h % 64)) & 1U ? 1.0 : 0.0;
    }
    b(static_cast<Eigen::Index>(r)) = row.rhs;
  }
  return nnls(a, b);
}

}  // namespace

TpResult tp_verify(const State& e, const FiniteOrtholattice& lattice,
                   std::vector<TwoValuedHom> homs, std::size_t max_family,
                   Tolerance tol) {
  if (e.ambient_dim() != lattice.ambient_dim()) {
    throw DimensionMismatch(e.ambient_dim(), lattice.ambient_dim());
  }
  TpResult result;
  result.homs = std::move(homs);
  const std::size_t hom_count = result.homs.size();
  const std::size_t words = (hom_count + 63) / 64;

  std::vector<std::vector<std::uint64_t>> column(lattice.size(),
                                                 std::vector<std::uint64_t>(words, 0));
  for (std::size_t h = 0; h < hom_count; ++h) {
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      if (result.homs[h].values.at(i)) column[i][h / 64] |= 1ULL << (h % 64);
    }
  }

  const auto families = compatible_families(lattice, max_family, tol);
  result.family_count = families.size();
  std::vector<Row> rows;
  std::map<std::vector<std::uint64_t>, std::vector<std::size_t>> by_pattern;
  for (const auto& family : families) {
    std::vector<std::uint64_t> pattern(words, ~0ULL);
    for (Index i : family.indices) {
      for (std::size_t w = 0; w < words; ++w) pattern[w] &= column[i][w];
    }
    if (words > 0 && hom_count % 64 != 0) {
      pattern.back() &= (1ULL << (hom_count % 64)) - 1;
    }
    const double rhs = born_probability(e, family, lattice, tol);
    auto& same = by_pattern[pattern];
    const bool duplicate = std::any_of(same.begin(), same.end(), [&](std::size_t r) {
      return std::abs(rows[r].rhs - rhs) < 1e-12;
    });
    if (duplicate) continue;
    same.push_back(rows.size());
    rows.push_back({std::move(pattern), rhs, family});
  }
  result.constraint_count = rows.size();

  std::vector<std::size_t> all(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) all[r] = r;

  auto residual_of = [&](const std::vector<std::size_t>& which) {
    if (hom_count == 0) {
      double worst = 0.0;
      for (std::size_t r : which) worst = std::max(worst, std::abs(rows[r].rhs));
      return worst;
    }
    return solve_rows(rows, which, hom_count).residual_inf;
  };

  if (hom_count > 0) {
    NnlsResult fit = solve_rows(rows, all, hom_count);
    if (fit.residual_inf < kFeasibilityResidual) {
      MeasureSolution sol;
      sol.residual = fit.residual_inf;
      for (Eigen::Index h = 0; h < fit.x.size(); ++h) {
        sol.weights.push_back(fit.x(h) < 0.0 ? 0.0 : fit.x(h));
      }
      result.outcome = std::move(sol);
      return result;
    }
  }

  Infeasible bad;
  bad.residual = residual_of(all);
  // A row no homomorphism can satisfy is already an irreducible witness.
  std::vector<std::size_t> witness;
  for (std::size_t r = 0; r < rows.size() && witness.empty(); ++r) {
    const bool empty_pattern = std::all_of(
        rows[r].pattern.begin(), rows[r].pattern.end(),
        [](std::uint64_t w) { return w == 0; });
    if (empty_pattern && rows[r].rhs >= kFeasibilityResidual) witness = {r};
  }
  if (witness.empty()) {
    // Deletion filter: drop every row whose removal keeps the rest infeasible.
    witness = all;
    for (std::size_t r : all) {
      std::vector<std::size_t> trial;
      for (std::size_t k : witness) {
        if (k != r) trial.push_back(k);
      }
      if (residual_of(trial) >= kFeasibilityResidual) witness = std::move(trial);
    }
  }
  for (std::size_t r : witness) bad.witness_families.push_back(rows[r].family);
  result.outcome = std::move(bad);
  return result;
}

TpResult tp_verify(const State& e, const FiniteOrtholattice& lattice,
                   std::size_t max_family, Tolerance tol) {
  return tp_verify(e, lattice, enumerate_homs(lattice), max_family, tol);
}

}  // namespace detlat
