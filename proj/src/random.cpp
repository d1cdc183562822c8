#include "fusion/random.hpp"

#include "fusion/numkernel.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace fusion {

template <FieldScalar S>
Matrix<S> random_matrix(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix<S> m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      if constexpr (is_complex_v<S>) {
        const double re = normal(rng);
        const double im = normal(rng);
        m(i, j) = S(re, im) / std::sqrt(2.0);
      } else {
        m(i, j) = normal(rng);
      }
    }
  }
  return m;
}

template <FieldScalar S>
Vector<S> random_vector(Index n, Rng& rng) {
  return random_matrix<S>(n, 1, rng).col(0);
}

template <FieldScalar S>
Vector<S> random_unit_vector(Index n, Rng& rng) {
  Vector<S> v = random_vector<S>(n, rng);
  while (v.norm() == 0.0) v = random_vector<S>(n, rng);
  return v / v.norm();
}

template <FieldScalar S>
Matrix<S> random_unitary(Index n, Rng& rng) {
  const Matrix<S> g = random_matrix<S>(n, n, rng);
  Eigen::HouseholderQR<Matrix<S>> qr(g);
  Matrix<S> q = qr.householderQ();
  // Fix the phases of R's diagonal so the distribution is Haar.
  const Matrix<S>& r = qr.matrixQR();
  for (Index k = 0; k < n; ++k) {
    const double a = std::abs(r(k, k));
    if (a > 0.0) {
      const S phase = r(k, k) / a;
      q.col(k) *= phase;
    }
  }
  return q;
}

template <FieldScalar S>
Subspace<S> random_subspace(Index n, Index k, Rng& rng) {
  if (k == 0) return Subspace<S>::zero(n);
  return Subspace<S>::from_spanning(random_matrix<S>(n, k, rng));
}

template <FieldScalar S>
WeightedFamily<S> random_family(Index n, std::size_t count, Index max_dim, Rng& rng) {
  std::uniform_int_distribution<Index> dim_dist(1, std::max<Index>(1, std::min(max_dim, n)));
  std::uniform_real_distribution<double> weight_dist(0.5, 2.0);
  WeightedFamily<S> fam(n);
  for (std::size_t i = 0; i < count; ++i) {
    const Index k = dim_dist(rng);
    fam.add(random_subspace<S>(n, k, rng), weight_dist(rng));
  }
  return fam;
}

template <FieldScalar S>
WeightedFamily<S> random_frame_family(Index n, std::size_t count, Index max_dim, Rng& rng) {
  WeightedFamily<S> fam = random_family<S>(n, count, max_dim, rng);
  std::uniform_real_distribution<double> weight_dist(0.5, 2.0);
  while (numerical_rank(fam.stacked_basis()) < n) {
    fam.add(random_subspace<S>(n, std::max<Index>(1, std::min(max_dim, n)), rng), weight_dist(rng));
  }
  return fam;
}

#define FUSION_INSTANTIATE_RANDOM(S)                                                             \
  template Matrix<S> random_matrix<S>(Index, Index, Rng&);                                       \
  template Vector<S> random_vector<S>(Index, Rng&);                                              \
  template Vector<S> random_unit_vector<S>(Index, Rng&);                                         \
  template Matrix<S> random_unitary<S>(Index, Rng&);                                             \
  template Subspace<S> random_subspace<S>(Index, Index, Rng&);                                   \
  template WeightedFamily<S> random_family<S>(Index, std::size_t, Index, Rng&);                  \
  template WeightedFamily<S> random_frame_family<S>(Index, std::size_t, Index, Rng&);

FUSION_INSTANTIATE_RANDOM(double)
FUSION_INSTANTIATE_RANDOM(cdouble)

}  // namespace fusion
