#include "detlat/sampling.hpp"

#include <algorithm>

namespace detlat {

namespace {

std::uint64_t draw_seed(Rng& rng) { return rng(); }

}  // namespace

Subspace random_subspace_of(const Subspace& within, Rng& rng) {
  const int d = within.dim();
  std::uniform_int_distribution<int> pick(0, d);
  const int k = pick(rng);
  const std::uint64_t seed = draw_seed(rng);
  if (k == 0) return Subspace::null(within.ambient_dim());
  const ComplexMatrix mix = random_unitary(d, seed);
  return Subspace::from_orthonormal(within.basis() * mix.leftCols(k));
}

Subspace random_subspace(int n, Rng& rng) {
  return random_subspace_of(Subspace::full(n), rng);
}

ComplexVector random_unit_vector(int n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v(i) = Complex(re, im);
  }
  return v.normalized();
}

std::vector<int> random_partition(int n, Rng& rng) {
  std::vector<int> parts;
  std::bernoulli_distribution cut(0.5);
  int current = 1;
  for (int i = 1; i < n; ++i) {
    if (cut(rng)) {
      parts.push_back(current);
      current = 1;
    } else {
      ++current;
    }
  }
  parts.push_back(current);
  return parts;
}

Observable random_observable(const std::vector<int>& dims, Rng& rng) {
  int n = 0;
  for (int d : dims) n += d;
  const ComplexMatrix u = random_unitary(n, draw_seed(rng));
  std::vector<Subspace> spaces;
  int start = 0;
  for (int d : dims) {
    spaces.push_back(Subspace::from_orthonormal(u.middleCols(start, d)));
    start += d;
  }
  return Observable(std::move(spaces));
}

State random_state(const Observable& r, Rng& rng,
                   const std::vector<std::size_t>& orthogonal_to) {
  ComplexVector v = random_unit_vector(r.ambient_dim(), rng);
  for (std::size_t i : orthogonal_to) {
    v -= r.eigenspace(i).projector() * v;
  }
  return State::from_vector(v);
}

MemberSampler::MemberSampler(const StateProjections& sp, std::uint64_t seed,
                             Mode mode)
    : sp_(sp),
      rng_(seed),
      mode_(mode),
      residual_space_(ortho(sp.projections_span())) {
  for (std::size_t j = 0; j < sp.observable().size(); ++j) {
    const Subspace block = meet(sp.observable().eigenspace(j), residual_space_);
    if (block.is_null()) continue;
    frames_.push_back(block.basis() *
                      random_unitary(block.dim(), draw_seed(rng_)));
    blocks_.push_back(block);
  }
}

Subspace MemberSampler::next() {
  const int n = sp_.ambient_dim();
  std::bernoulli_distribution coin(0.5);
  Subspace p = Subspace::null(n);
  for (const auto& entry : sp_.entries()) {
    if (coin(rng_)) p = join(p, entry.projection);
  }
  if (residual_space_.dim() <= 2) {
    return join(p, random_subspace_of(residual_space_, rng_));
  }
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (mode_ == Mode::Generic || blocks_[b].dim() <= 2) {
      p = join(p, random_subspace_of(blocks_[b], rng_));
      continue;
    }
    for (Eigen::Index c = 0; c < frames_[b].cols(); ++c) {
      if (coin(rng_)) {
        p = join(p, Subspace::from_orthonormal(frames_[b].col(c)));
      }
    }
  }
  return p;
}

}  // namespace detlat
