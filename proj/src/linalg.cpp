#include "detlat/linalg.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace detlat {

namespace {
std::atomic<double> g_session_eps{1e-9};
}

Tolerance::Tolerance(double value) : eps(value) {
  if (!(value > 0.0) || !(value < 1e-3)) {
    throw std::invalid_argument("tolerance must satisfy 0 < eps < 1e-3, got " +
                                std::to_string(value));
  }
}

Tolerance Tolerance::session() { return Tolerance(g_session_eps.load()); }

void Tolerance::set_session(Tolerance tol) { g_session_eps.store(tol.eps); }

ComplexMatrix orthonormalize(const ComplexMatrix& m, Tolerance tol) {
  if (m.rows() == 0) {
    throw std::invalid_argument("orthonormalize: matrix has no rows");
  }
  if (!all_finite(m)) {
    throw std::invalid_argument("orthonormalize: non-finite entry");
  }
  const Eigen::Index n = m.rows();
  double largest = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    largest = std::max(largest, m.col(j).norm());
  }
  const double cutoff = tol.eps * largest;

  ComplexMatrix q(n, std::min<Eigen::Index>(n, m.cols()));
  Eigen::Index rank = 0;
  for (Eigen::Index j = 0; j < m.cols() && rank < n; ++j) {
    ComplexVector v = m.col(j);
    // Two passes of MGS keep the accepted columns orthonormal to ~machine eps.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index k = 0; k < rank; ++k) {
        v -= q.col(k) * q.col(k).dot(v);
      }
    }
    const double r = v.norm();
    if (largest == 0.0 || r < cutoff) continue;
    q.col(rank++) = v / r;
  }
  return q.leftCols(rank);
}

ComplexMatrix projector(const ComplexMatrix& basis) {
  return basis * basis.adjoint();
}

ComplexMatrix random_unitary(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_unitary: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  // Redraw on the (measure-zero) event of a rank-deficient sample.
  for (;;) {
    ComplexMatrix g(n, n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        g(i, j) = Complex(re, im);
      }
    }
    ComplexMatrix q = orthonormalize(g, Tolerance(1e-9));
    if (q.cols() == n) return q;
  }
}

double unitarity_defect(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
}

bool is_unitary(const ComplexMatrix& u, Tolerance tol) {
  return u.rows() == u.cols() && u.rows() > 0 && all_finite(u) &&
         unitarity_defect(u) < tol.eps;
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace detlat
