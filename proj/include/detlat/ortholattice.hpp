#pragma once

#include "detlat/determinate.hpp"
#include "detlat/subspace.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace detlat {

inline constexpr std::size_t kDefaultMaxElements = 4096;

/// Raised when a generated sublattice would exceed its element cap.
class ClosureOverflow : public std::runtime_error {
 public:
  explicit ClosureOverflow(std::size_t max_elements);
  std::size_t max_elements() const { return max_elements_; }

 private:
  std::size_t max_elements_;
};

/// A finite set of subspaces closed under meet, join and orthocomplement.
///
/// Element 0 is the null subspace and element 1 the full space. Only the join
/// table is stored; meets follow from De Morgan through the complement map and
/// the order from join(i, j) == j.
class FiniteOrtholattice {
 public:
  using Index = std::uint32_t;

  int ambient_dim() const { return ambient_dim_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<Subspace>& elements() const { return elements_; }
  const Subspace& element(Index i) const { return elements_.at(i); }

  static constexpr Index null_index() { return 0; }
  static constexpr Index full_index() { return 1; }

  Index complement(Index i) const { return complement_[i]; }
  const std::vector<Index>& complement_map() const { return complement_; }
  Index join(Index i, Index j) const {
    return i >= j ? join_[tri(i, j)] : join_[tri(j, i)];
  }
  Index meet(Index i, Index j) const {
    return complement_[join(complement_[i], complement_[j])];
  }
  bool leq(Index i, Index j) const { return join(i, j) == j; }

  /// Position of an element equal (by projector distance) to `s`.
  std::optional<Index> find(const Subspace& s,
                            Tolerance tol = Tolerance::session()) const;

  /// Element indices sorted by ascending dimension, ties by index.
  std::vector<Index> dimension_order() const;

 private:
  friend FiniteOrtholattice generate(int, std::span<const Subspace>,
                                     std::size_t, Tolerance);

  static std::size_t tri(std::size_t i, std::size_t j) {
    return i * (i + 1) / 2 + j;
  }
  static double key_of(const Subspace& s);

  int ambient_dim_ = 0;
  std::vector<Subspace> elements_;
  std::vector<Index> complement_;
  std::vector<Index> join_;  // lower-triangular, row i holds j <= i
  std::multimap<double, Index> by_key_;
};

/// Smallest ortholattice containing the generators, null and full, computed by
/// worklist saturation. Throws ClosureOverflow when the element count would
/// exceed `max_elements`, DimensionMismatch on mixed ambient dimensions.
FiniteOrtholattice generate(std::span<const Subspace> generators,
                            std::size_t max_elements = kDefaultMaxElements,
                            Tolerance tol = Tolerance::session());

/// Same, for generators in an explicit ambient dimension (needed when the
/// generator list is empty).
FiniteOrtholattice generate(int ambient_dim,
                            std::span<const Subspace> generators,
                            std::size_t max_elements = kDefaultMaxElements,
                            Tolerance tol = Tolerance::session());

/// A {0,1}-valued map on lattice elements, one byte per element index.
struct TwoValuedHom {
  std::vector<std::uint8_t> values;

  bool operator()(FiniteOrtholattice::Index i) const { return values[i] != 0; }
  /// '0'/'1' per element, element 0 first.
  std::string bits() const;
  static TwoValuedHom from_bits(const std::string& bits);

  friend auto operator<=>(const TwoValuedHom&, const TwoValuedHom&) = default;
};

/// All 2-valued homomorphisms, by backtracking in ascending dimension order
/// with complement, order, meet and join propagation. Returned in
/// lexicographic order of their bit strings.
std::vector<TwoValuedHom> enumerate_homs(const FiniteOrtholattice& lattice);

/// Full re-check of every homomorphism equation over all element pairs.
bool is_homomorphism(const FiniteOrtholattice& lattice, const TwoValuedHom& h);

/// True iff every element of the lattice is a member of D(e,R).
bool is_sublattice_of_D(const FiniteOrtholattice& lattice,
                        const StateProjections& sp,
                        Tolerance tol = Tolerance::session());

}  // namespace detlat
