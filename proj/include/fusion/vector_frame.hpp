#pragma once

#include "fusion/core.hpp"

namespace fusion {

// Frames of vectors, stored as the columns of a matrix Phi.

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool is_frame = false;
};

/// Phi Phi^H
template <FieldScalar S>
Matrix<S> vector_frame_operator(const Matrix<S>& vectors);

/// Optimal bounds of the columns as a frame for the whole ambient space.
template <FieldScalar S>
FrameBounds vector_frame_bounds(const Matrix<S>& vectors, const Tolerances& tol = {});

/// Optimal bounds of the columns as a frame for their own span: the extreme
/// nonzero eigenvalues of Phi Phi^H (squared singular values above the rank
/// cutoff). is_frame is false only when the columns span {0}.
template <FieldScalar S>
FrameBounds span_frame_bounds(const Matrix<S>& vectors, const Tolerances& tol = {});

/// Canonical-dual reconstruction sum_k <f, phi_k> S^{-1} phi_k.
/// Throws SingularOperator when the columns are not a frame.
template <FieldScalar S>
Vector<S> vector_frame_reconstruct(const Matrix<S>& vectors, const Vector<S>& f, const Tolerances& tol = {});

}  // namespace fusion
