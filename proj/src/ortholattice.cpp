#include "detlat/ortholattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>

namespace detlat {

namespace {

using Index = FiniteOrtholattice::Index;
constexpr Index kUnset = std::numeric_limits<Index>::max();

// Fixed pseudo-random weights for the lookup key. Normalized so that the key
// is 1-Lipschitz in the Frobenius distance of projectors.
struct KeyWeights {
  int n = 0;
  std::vector<double> re, im;
  double scale = 1.0;

  explicit KeyWeights(int dim) : n(dim) {
    double sum = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const double t = 1.0 + a * 7.31 + b * 3.17;
        re.push_back(std::sin(t * 1.618034));
        im.push_back(std::cos(t * 2.414214));
        sum += re.back() * re.back() + im.back() * im.back();
      }
    }
    scale = 1.0 / std::sqrt(sum);
  }
};

const KeyWeights& weights_for(int n) {
  thread_local std::deque<KeyWeights> cache;
  for (const auto& w : cache) {
    if (w.n == n) return w;
  }
  cache.emplace_back(n);
  return cache.back();
}

}  // namespace

ClosureOverflow::ClosureOverflow(std::size_t max_elements)
    : std::runtime_error("closure exceeds " + std::to_string(max_elements) +
                         " elements"),
      max_elements_(max_elements) {}

double FiniteOrtholattice::key_of(const Subspace& s) {
  const int n = s.ambient_dim();
  const KeyWeights& w = weights_for(n);
  const ComplexMatrix& p = s.projector();
  double key = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const std::size_t k = static_cast<std::size_t>(a * n + b);
      key += w.re[k] * p(a, b).real() + w.im[k] * p(a, b).imag();
    }
  }
  return key * w.scale;
}

std::optional<Index> FiniteOrtholattice::find(const Subspace& s,
                                              Tolerance tol) const {
  if (s.ambient_dim() != ambient_dim_) {
    throw DimensionMismatch(ambient_dim_, s.ambient_dim());
  }
  const double key = key_of(s);
  auto it = by_key_.lower_bound(key - tol.eps);
  const auto end = by_key_.upper_bound(key + tol.eps);
  for (; it != end; ++it) {
    if (equal(elements_[it->second], s, tol)) return it->second;
  }
  return std::nullopt;
}

std::vector<Index> FiniteOrtholattice::dimension_order() const {
  std::vector<Index> order(elements_.size());
  for (Index i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return elements_[a].dim() < elements_[b].dim();
  });
  return order;
}

FiniteOrtholattice generate(int ambient_dim,
                            std::span<const Subspace> generators,
                            std::size_t max_elements, Tolerance tol) {
  if (max_elements < 2) {
    throw std::invalid_argument("max_elements must be at least 2");
  }
  for (const auto& g : generators) {
    if (g.ambient_dim() != ambient_dim) {
      throw DimensionMismatch(ambient_dim, g.ambient_dim());
    }
  }
  FiniteOrtholattice lat;
  lat.ambient_dim_ = ambient_dim;

  auto add = [&](const Subspace& s) -> Index {
    if (auto found = lat.find(s, tol)) return *found;
    if (lat.elements_.size() >= max_elements) throw ClosureOverflow(max_elements);
    const auto idx = static_cast<Index>(lat.elements_.size());
    lat.elements_.push_back(s);
    lat.complement_.push_back(kUnset);
    lat.by_key_.emplace(FiniteOrtholattice::key_of(s), idx);
    return idx;
  };
  auto add_closed = [&](const Subspace& s) -> Index {
    const Index a = add(s);
    if (lat.complement_[a] == kUnset) {
      const Index b = add(ortho(s));
      lat.complement_[a] = b;
      lat.complement_[b] = a;
    }
    return a;
  };

  add_closed(Subspace::null(ambient_dim));
  if (lat.elements_.size() < 2) {
    throw std::logic_error("null and full space coincide");
  }
  for (const auto& g : generators) add_closed(g);

  for (Index i = 0; i < lat.elements_.size(); ++i) {
    lat.join_.resize(FiniteOrtholattice::tri(i, i) + 1);
    for (Index j = 0; j <= i; ++j) {
      Index z;
      if (i == j || j == FiniteOrtholattice::null_index()) {
        z = i;
      } else if (i == FiniteOrtholattice::full_index() ||
                 j == FiniteOrtholattice::full_index() ||
                 lat.complement_[i] == j) {
        z = FiniteOrtholattice::full_index();
      } else {
        const Subspace s = join(lat.elements_[i], lat.elements_[j], tol);
        z = add_closed(s);
      }
      lat.join_[FiniteOrtholattice::tri(i, j)] = z;
    }
  }
  return lat;
}

FiniteOrtholattice generate(std::span<const Subspace> generators,
                            std::size_t max_elements, Tolerance tol) {
  if (generators.empty()) {
    throw std::invalid_argument(
        "generate: empty generator list needs an explicit ambient dimension");
  }
  return generate(generators.front().ambient_dim(), generators, max_elements,
                  tol);
}

std::string TwoValuedHom::bits() const {
  std::string s(values.size(), '0');
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i]) s[i] = '1';
  }
  return s;
}

TwoValuedHom TwoValuedHom::from_bits(const std::string& bits) {
  TwoValuedHom h;
  h.values.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("homomorphism bit string must be 0/1");
    }
    h.values.push_back(c == '1' ? 1 : 0);
  }
  return h;
}

namespace {

class HomSearch {
 public:
  explicit HomSearch(const FiniteOrtholattice& lat)
      : lat_(lat),
        n_(static_cast<Index>(lat.size())),
        value_(lat.size(), -1),
        order_(lat.dimension_order()) {}

  std::vector<TwoValuedHom> run() {
    if (assign(FiniteOrtholattice::null_index(), 0) &&
        assign(FiniteOrtholattice::full_index(), 1)) {
      search(0);
    }
    std::sort(found_.begin(), found_.end());
    return std::move(found_);
  }

 private:
  void search(std::size_t pos) {
    while (pos < order_.size() && value_[order_[pos]] != -1) ++pos;
    if (pos == order_.size()) {
      TwoValuedHom h;
      h.values.assign(value_.begin(), value_.end());
      found_.push_back(std::move(h));
      return;
    }
    const Index x = order_[pos];
    for (std::int8_t v = 0; v <= 1; ++v) {
      const std::size_t mark = trail_.size();
      if (assign(x, v)) search(pos + 1);
      undo(mark);
    }
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      value_[trail_.back()] = -1;
      trail_.pop_back();
    }
  }

  bool assign(Index x, std::int8_t v) {
    queue_.clear();
    queue_.emplace_back(x, v);
    while (!queue_.empty()) {
      const auto [a, va] = queue_.front();
      queue_.pop_front();
      if (value_[a] == va) continue;
      if (value_[a] != -1) return false;
      value_[a] = va;
      trail_.push_back(a);
      queue_.emplace_back(lat_.complement(a), static_cast<std::int8_t>(1 - va));
      for (Index y = 0; y < n_; ++y) {
        const Index z = lat_.join(a, y);
        const Index m = lat_.meet(a, y);
        const std::int8_t vy = value_[y];
        if (vy != -1) {
          if (value_[z] != (va | vy)) queue_.emplace_back(z, va | vy);
          if (value_[m] != (va & vy)) queue_.emplace_back(m, va & vy);
          continue;
        }
        bool up = false;
        bool down = false;
        if (va == 1 && z == y) up = true;            // a <= y
        if (va == 0 && z == a) down = true;          // y <= a
        if (va == 0 && value_[z] == 1) up = true;    // h(a v y) = 1, h(a) = 0
        if (va == 1 && value_[m] == 0) down = true;  // h(a ^ y) = 0, h(a) = 1
        if (up && down) return false;
        if (up) queue_.emplace_back(y, std::int8_t{1});
        if (down) queue_.emplace_back(y, std::int8_t{0});
      }
    }
    return true;
  }

  const FiniteOrtholattice& lat_;
  Index n_;
  std::vector<std::int8_t> value_;
  std::vector<Index> order_;
  std::vector<Index> trail_;
  std::deque<std::pair<Index, std::int8_t>> queue_;
  std::vector<TwoValuedHom> found_;
};

}  // namespace

std::vector<TwoValuedHom> enumerate_homs(const FiniteOrtholattice& lattice) {
  return HomSearch(lattice).run();
}

bool is_homomorphism(const FiniteOrtholattice& lattice, const TwoValuedHom& h) {
  const auto n = static_cast<Index>(lattice.size());
  if (h.values.size() != n) return false;
  for (auto v : h.values) {
    if (v > 1) return false;
  }
  if (h(FiniteOrtholattice::null_index()) || !h(FiniteOrtholattice::full_index())) {
    return false;
  }
  for (Index i = 0; i < n; ++i) {
    if (h(lattice.complement(i)) == h(i)) return false;
    for (Index j = 0; j < n; ++j) {
      if (h(lattice.join(i, j)) != (h(i) || h(j))) return false;
      if (h(lattice.meet(i, j)) != (h(i) && h(j))) return false;
    }
  }
  return true;
}

bool is_sublattice_of_D(const FiniteOrtholattice& lattice,
                        const StateProjections& sp, Tolerance tol) {
  if (lattice.ambient_dim() != sp.ambient_dim()) {
    throw DimensionMismatch(lattice.ambient_dim(), sp.ambient_dim());
  }
  return std::all_of(lattice.elements().begin(), lattice.elements().end(),
                     [&](const Subspace& p) {
                       return membership_in_D(p, sp, tol);
                     });
}

}  // namespace detlat
