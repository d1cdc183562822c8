#include "fusion/subspace.hpp"

#include "fusion/numkernel.hpp"

#include <algorithm>
#include <cmath>

namespace fusion {

namespace {

void require_same_ambient(Index a, Index b, const char* what) {
  if (a != b) {
    throw InvalidInput(std::string(what) + ": ambient dimensions differ (" + std::to_string(a) +
                       " vs " + std::to_string(b) + ")");
  }
}

void require_ambient_limit(Index n) {
  if (n > kMaxAmbientDim) {
    throw InvalidInput("ambient dimension " + std::to_string(n) + " exceeds limit " +
                       std::to_string(kMaxAmbientDim));
  }
}

}  // namespace

template <FieldScalar S>
Subspace<S> Subspace<S>::from_spanning(const Matrix<S>& vectors, double tol) {
  require_ambient_limit(vectors.rows());
  return Subspace(orthonormalize(vectors, tol));
}

template <FieldScalar S>
Subspace<S> Subspace<S>::from_orthonormal(Matrix<S> basis, double tol) {
  require_ambient_limit(basis.rows());
  if (!basis.allFinite()) throw InvalidInput("Subspace: non-finite basis entries");
  if (basis.cols() > basis.rows()) throw InvalidInput("Subspace: more basis vectors than dimensions");
  const Matrix<S> gram = basis.adjoint() * basis;
  if ((gram - Matrix<S>::Identity(basis.cols(), basis.cols())).norm() > tol) {
    throw InvalidInput("Subspace: basis is not orthonormal");
  }
  return Subspace(std::move(basis));
}

template <FieldScalar S>
Subspace<S> Subspace<S>::zero(Index ambient_dim) {
  require_ambient_limit(ambient_dim);
  return Subspace(Matrix<S>(ambient_dim, 0));
}

template <FieldScalar S>
Subspace<S> Subspace<S>::full(Index ambient_dim) {
  require_ambient_limit(ambient_dim);
  return Subspace(Matrix<S>::Identity(ambient_dim, ambient_dim));
}

template <FieldScalar S>
Subspace<S> Subspace<S>::coordinate(Index ambient_dim, const std::vector<Index>& coords) {
  require_ambient_limit(ambient_dim);
  Matrix<S> b = Matrix<S>::Zero(ambient_dim, static_cast<Index>(coords.size()));
  for (std::size_t k = 0; k < coords.size(); ++k) {
    if (coords[k] < 0 || coords[k] >= ambient_dim) throw InvalidInput("Subspace::coordinate: index out of range");
    b(coords[k], static_cast<Index>(k)) = S(1);
  }
  return from_spanning(b);
}

template <FieldScalar S>
bool Subspace<S>::contains(const Vector<S>& f, double tol) const {
  require_same_ambient(f.size(), ambient_dim(), "Subspace::contains");
  return (f - project(f)).norm() <= tol * std::max(1.0, f.norm());
}

template <FieldScalar S>
OperatorImage<S> apply_operator(const Matrix<S>& t, const Subspace<S>& w, double tol) {
  if (t.rows() != t.cols()) throw InvalidInput("apply_operator: operator must be square");
  require_same_ambient(t.cols(), w.ambient_dim(), "apply_operator");
  OperatorImage<S> out{Subspace<S>::from_spanning(t * w.basis(), tol), false};
  out.dim_collapsed = out.subspace.dim() < w.dim();
  return out;
}

template <FieldScalar S>
Subspace<S> image(const Matrix<S>& t, const Subspace<S>& w, double tol) {
  return apply_operator(t, w, tol).subspace;
}

template <FieldScalar S>
Subspace<S> intersect(const Subspace<S>& w, const Subspace<S>& v, double tol) {
  require_same_ambient(w.ambient_dim(), v.ambient_dim(), "intersect");
  if (w.dim() == 0 || v.dim() == 0) return Subspace<S>::zero(w.ambient_dim());
  // Eigenvalues of the compression are cos^2 of the principal angles.
  const Matrix<S> cross = v.basis().adjoint() * w.basis();
  const Matrix<S> compression = cross.adjoint() * cross;
  const EigResult<S> eig = herm_eig(compression);
  std::vector<Index> keep;
  for (Index k = 0; k < eig.eigenvalues.size(); ++k) {
    if (eig.eigenvalues(k) >= 1.0 - tol) keep.push_back(k);
  }
  Matrix<S> coords(w.dim(), static_cast<Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) coords.col(static_cast<Index>(k)) = eig.eigenvectors.col(keep[k]);
  return Subspace<S>::from_spanning(w.basis() * coords);
}

template <FieldScalar S>
double distance(const Subspace<S>& w, const Subspace<S>& v) {
  require_same_ambient(w.ambient_dim(), v.ambient_dim(), "distance");
  if (w.ambient_dim() == 0) return 0.0;
  const auto [lo, hi] = herm_extremes<S>(w.projector() - v.projector());
  return std::max(std::abs(lo), std::abs(hi));
}

template <FieldScalar S>
Subspace<S> orthogonal_complement(const Subspace<S>& w, double tol) {
  const Index n = w.ambient_dim();
  const Matrix<S> residual = Matrix<S>::Identity(n, n) - w.projector();
  return Subspace<S>::from_spanning(residual, std::max(tol, 1e-8));
}

template <FieldScalar S>
Subspace<S> span_of(const std::vector<Subspace<S>>& parts, Index ambient_dim, double tol) {
  Index cols = 0;
  for (const auto& p : parts) {
    require_same_ambient(p.ambient_dim(), ambient_dim, "span_of");
    cols += p.dim();
  }
  Matrix<S> stacked(ambient_dim, cols);
  Index at = 0;
  for (const auto& p : parts) {
    stacked.middleCols(at, p.dim()) = p.basis();
    at += p.dim();
  }
  return Subspace<S>::from_spanning(stacked, tol);
}

#define FUSION_INSTANTIATE_SUBSPACE(S)                                                         \
  template class Subspace<S>;                                                                  \
  template OperatorImage<S> apply_operator<S>(const Matrix<S>&, const Subspace<S>&, double);   \
  template Subspace<S> image<S>(const Matrix<S>&, const Subspace<S>&, double);                 \
  template Subspace<S> intersect<S>(const Subspace<S>&, const Subspace<S>&, double);           \
  template double distance<S>(const Subspace<S>&, const Subspace<S>&);                         \
  template Subspace<S> orthogonal_complement<S>(const Subspace<S>&, double);                   \
  template Subspace<S> span_of<S>(const std::vector<Subspace<S>>&, Index, double);

FUSION_INSTANTIATE_SUBSPACE(double)
FUSION_INSTANTIATE_SUBSPACE(cdouble)

}  // namespace fusion
