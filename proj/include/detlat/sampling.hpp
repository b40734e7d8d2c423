#pragma once

#include "detlat/determinate.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace detlat {

using Rng = std::mt19937_64;

/// Dimension uniform in [0, dim(within)], spanned by the leading columns of a
/// seeded random unitary on `within`.
Subspace random_subspace_of(const Subspace& within, Rng& rng);
Subspace random_subspace(int n, Rng& rng);

/// Unit vector with complex Gaussian entries.
ComplexVector random_unit_vector(int n, Rng& rng);

/// Random composition of n into positive parts (eigenspace dimensions).
std::vector<int> random_partition(int n, Rng& rng);

/// Eigenspaces with the given dimensions, cut from one random unitary.
Observable random_observable(const std::vector<int>& dims, Rng& rng);

/// Random state with zero weight on the listed eigenspaces.
State random_state(const Observable& r, Rng& rng,
                   const std::vector<std::size_t>& orthogonal_to = {});

/// Draws random members of D(e,R) as (v_{i in S} e_{r_i}) v q with q inside
/// the orthocomplement of every e_{r_i}.
///
/// q is assembled blockwise from r_j ^ (v e_{r_i})^perp. In Framed mode the
/// blocks of dimension >= 3 only contribute spans of subsets of one fixed
/// random frame, so any number of draws stays inside a finite sublattice.
class MemberSampler {
 public:
  enum class Mode { Generic, Framed };

  MemberSampler(const StateProjections& sp, std::uint64_t seed, Mode mode);

  Subspace next();

 private:
  StateProjections sp_;
  Rng rng_;
  Mode mode_;
  Subspace residual_space_;
  std::vector<Subspace> blocks_;
  std::vector<ComplexMatrix> frames_;
};

}  // namespace detlat
