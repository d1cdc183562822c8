#include "fusion/vector_frame.hpp"

#include "fusion/numkernel.hpp"

#include <algorithm>
#include <limits>

namespace fusion {

template <FieldScalar S>
Matrix<S> vector_frame_operator(const Matrix<S>& vectors) {
  return vectors * vectors.adjoint();
}

template <FieldScalar S>
FrameBounds vector_frame_bounds(const Matrix<S>& vectors, const Tolerances& tol) {
  if (vectors.rows() == 0 || vectors.cols() == 0) return {};
  const auto [lo, hi] = herm_extremes(vector_frame_operator(vectors));
  FrameBounds b{std::max(0.0, lo), hi, false};
  b.is_frame = hi > 0.0 && b.lower > tol.frame * hi;
  return b;
}

template <FieldScalar S>
FrameBounds span_frame_bounds(const Matrix<S>& vectors, const Tolerances& tol) {
  if (!vectors.allFinite()) throw InvalidInput("span_frame_bounds: non-finite entries");
  const RealVector sv = singular_values(vectors);
  if (sv.size() == 0 || sv(0) == 0.0) return {};
  const double floor = static_cast<double>(std::max(vectors.rows(), vectors.cols())) *
                       std::numeric_limits<double>::epsilon();
  const double cut = std::max(tol.rank, floor) * sv(0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  return {sv(rank - 1) * sv(rank - 1), sv(0) * sv(0), true};
}

template <FieldScalar S>
Vector<S> vector_frame_reconstruct(const Matrix<S>& vectors, const Vector<S>& f, const Tolerances& tol) {
  if (f.size() != vectors.rows()) throw InvalidInput("vector_frame_reconstruct: length mismatch");
  const Matrix<S> s_inv = herm_inverse(vector_frame_operator(vectors), tol.frame);
  return s_inv * (vectors * (vectors.adjoint() * f));
}

#define FUSION_INSTANTIATE_VECTOR_FRAME(S)                                              \
  template Matrix<S> vector_frame_operator<S>(const Matrix<S>&);                        \
  template FrameBounds vector_frame_bounds<S>(const Matrix<S>&, const Tolerances&);     \
  template FrameBounds span_frame_bounds<S>(const Matrix<S>&, const Tolerances&);       \
  template Vector<S> vector_frame_reconstruct<S>(const Matrix<S>&, const Vector<S>&, const Tolerances&);

FUSION_INSTANTIATE_VECTOR_FRAME(double)
FUSION_INSTANTIATE_VECTOR_FRAME(cdouble)

}  // namespace fusion
