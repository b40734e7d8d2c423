#pragma once

#include "detlat/determinate.hpp"
#include "detlat/ortholattice.hpp"
#include "detlat/sampling.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace support {

using detlat::Complex;
using detlat::ComplexMatrix;
using detlat::ComplexVector;
using detlat::FiniteOrtholattice;
using detlat::Subspace;

inline ComplexVector vec(std::initializer_list<Complex> xs) {
  ComplexVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const Complex& x : xs) v(i++) = x;
  return v;
}

inline Subspace ray(std::initializer_list<Complex> xs) {
  return Subspace::span(vec(xs));
}

inline Subspace span_of(std::initializer_list<ComplexVector> cols) {
  const auto first = *cols.begin();
  ComplexMatrix m(first.size(), static_cast<Eigen::Index>(cols.size()));
  Eigen::Index c = 0;
  for (const auto& v : cols) m.col(c++) = v;
  return Subspace::span(m);
}

inline double frob(const ComplexMatrix& m) { return m.norm(); }

// Classical Gram-Schmidt, one pass per column, written out longhand.
inline ComplexMatrix hand_gram_schmidt(const ComplexMatrix& m, double drop) {
  std::vector<ComplexVector> out;
  double largest = 0.0;
  for (Eigen::Index c = 0; c < m.cols(); ++c) largest = std::max(largest, m.col(c).norm());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    ComplexVector v = m.col(c);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : out) {
        Complex coeff = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i) coeff += std::conj(q(i)) * v(i);
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) -= coeff * q(i);
      }
    }
    double norm = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) norm += std::norm(v(i));
    norm = std::sqrt(norm);
    if (norm > drop * largest) out.push_back(v / norm);
  }
  ComplexMatrix q(m.rows(), static_cast<Eigen::Index>(out.size()));
  for (std::size_t c = 0; c < out.size(); ++c) q.col(static_cast<Eigen::Index>(c)) = out[c];
  return q;
}

// Rank of a matrix from its singular values.
inline int svd_rank(const ComplexMatrix& m, double rel = 1e-9) {
  if (m.cols() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > rel * s(0) ? 1 : 0;
  return r;
}

// Element-level operation tables rebuilt from subspace arithmetic, independent
// of the lattice's stored tables.
struct Tables {
  std::vector<std::uint32_t> comp;
  std::vector<std::vector<std::uint32_t>> meet, join;
};

inline Tables tables_from_subspaces(const FiniteOrtholattice& l) {
  const std::size_t k = l.size();
  auto locate = [&](const Subspace& s) {
    for (std::size_t i = 0; i < k; ++i) {
      if (detlat::projector_distance(s, l.element(static_cast<std::uint32_t>(i))) < 1e-7) {
        return static_cast<std::uint32_t>(i);
      }
    }
    throw std::logic_error("lattice not closed");
  };
  Tables t;
  t.meet.assign(k, std::vector<std::uint32_t>(k));
  t.join = t.meet;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& a = l.element(static_cast<std::uint32_t>(i));
    t.comp.push_back(locate(detlat::ortho(a)));
    for (std::size_t j = 0; j < k; ++j) {
      const auto& b = l.element(static_cast<std::uint32_t>(j));
      t.meet[i][j] = locate(detlat::meet(a, b));
      t.join[i][j] = locate(detlat::join(a, b));
    }
  }
  return t;
}

// Exhaustive truth-table filter over all 2^k assignments, bit strings sorted.
inline std::vector<std::string> brute_force_homs(const FiniteOrtholattice& l) {
  const std::size_t k = l.size();
  if (k > 24) throw std::invalid_argument("lattice too large for brute force");
  const Tables t = tables_from_subspaces(l);
  std::vector<std::string> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    auto h = [&](std::size_t i) { return ((mask >> i) & 1U) != 0; };
    bool ok = !h(0) && h(1);
    for (std::size_t i = 0; ok && i < k; ++i) ok = h(t.comp[i]) != h(i);
    for (std::size_t i = 0; ok && i < k; ++i) {
      for (std::size_t j = 0; ok && j < k; ++j) {
        ok = h(t.meet[i][j]) == (h(i) && h(j)) && h(t.join[i][j]) == (h(i) || h(j));
      }
    }
    if (!ok) continue;
    std::string bits(k, '0');
    for (std::size_t i = 0; i < k; ++i) bits[i] = h(i) ? '1' : '0';
    out.push_back(bits);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Instance {
  detlat::State state;
  detlat::Observable observable;
};

// Random (e, R) in C^n; with `degenerate` the eigenspace dimensions come from a
// random composition of n, otherwise every eigenspace is a ray. With
// `drop_one` the state is orthogonal to the last eigenspace (when m >= 2).
inline Instance random_instance(int n, detlat::Rng& rng, bool degenerate,
                                bool drop_one = false) {
  std::vector<int> dims = degenerate ? detlat::random_partition(n, rng)
                                     : std::vector<int>(static_cast<std::size_t>(n), 1);
  auto r = detlat::random_observable(dims, rng);
  std::vector<std::size_t> dropped;
  if (drop_one && r.size() >= 2) dropped.push_back(r.size() - 1);
  auto e = detlat::random_state(r, rng, dropped);
  return Instance{e, r};
}

inline Instance axis_instance(int n, const ComplexVector& state) {
  std::vector<Subspace> rays;
  for (int i = 0; i < n; ++i) rays.push_back(Subspace::axes(n, {i}));
  return Instance{detlat::State::from_vector(state), detlat::Observable(rays)};
}

}  // namespace support
