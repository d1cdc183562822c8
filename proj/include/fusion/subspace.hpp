#pragma once

#include "fusion/core.hpp"

#include <vector>

namespace fusion {

/// A subspace of the ambient space K^n, stored as an orthonormal basis
/// (n rows, dim columns). The zero subspace has an n x 0 basis.
template <FieldScalar S>
class Subspace {
 public:
  Subspace() = default;

  /// Column span of `vectors`; dim is the numerical rank at relative `tol`.
  static Subspace from_spanning(const Matrix<S>& vectors, double tol = 1e-10);
  /// Adopts `basis` as-is after checking orthonormality to `tol`.
  static Subspace from_orthonormal(Matrix<S> basis, double tol = 1e-10);
  static Subspace zero(Index ambient_dim);
  static Subspace full(Index ambient_dim);
  /// span{e_k : k in coords}
  static Subspace coordinate(Index ambient_dim, const std::vector<Index>& coords);

  Index ambient_dim() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  const Matrix<S>& basis() const { return basis_; }

  Matrix<S> projector() const { return basis_ * basis_.adjoint(); }
  Vector<S> project(const Vector<S>& f) const { return basis_ * (basis_.adjoint() * f); }

  /// ||f - P f|| <= tol * max(1, ||f||)
  bool contains(const Vector<S>& f, double tol = 1e-8) const;

 private:
  explicit Subspace(Matrix<S> basis) : basis_(std::move(basis)) {}
  Matrix<S> basis_;
};

template <FieldScalar S>
Matrix<S> projector(const Subspace<S>& w) {
  return w.projector();
}

/// Result of mapping a subspace through a square operator.
template <FieldScalar S>
struct OperatorImage {
  Subspace<S> subspace;
  bool dim_collapsed = false;  // dim T(W) < dim W, only possible for singular T
};

/// T(W) re-orthonormalized; flags a dimension drop.
template <FieldScalar S>
OperatorImage<S> apply_operator(const Matrix<S>& t, const Subspace<S>& w, double tol = 1e-10);

/// Convenience form of apply_operator returning only the subspace.
template <FieldScalar S>
Subspace<S> image(const Matrix<S>& t, const Subspace<S>& w, double tol = 1e-10);

/// W ∩ V: eigenvectors of B_W^H P_V B_W (the compression of P_W P_V P_W to W)
/// whose eigenvalue is at least 1 - tol.
template <FieldScalar S>
Subspace<S> intersect(const Subspace<S>& w, const Subspace<S>& v, double tol = 1e-8);

/// ||P_W - P_V||_2
template <FieldScalar S>
double distance(const Subspace<S>& w, const Subspace<S>& v);

template <FieldScalar S>
Subspace<S> orthogonal_complement(const Subspace<S>& w, double tol = 1e-10);

/// Closed linear span of a list of subspaces of a common ambient space.
template <FieldScalar S>
Subspace<S> span_of(const std::vector<Subspace<S>>& parts, Index ambient_dim, double tol = 1e-10);

}  // namespace fusion
