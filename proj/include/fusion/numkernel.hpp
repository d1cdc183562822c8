#pragma once

#include "fusion/core.hpp"

#include <functional>

namespace fusion {

/// Spectrum of a Hermitian matrix: eigenvalues ascending, eigenvectors as
/// orthonormal columns in matching order. Each eigenvector is phase-normalized
/// so that its largest-magnitude component is real and positive.
template <FieldScalar S>
struct EigResult {
  RealVector eigenvalues;
  Matrix<S> eigenvectors;
};

template <FieldScalar S>
bool all_finite(const Matrix<S>& m);

/// Singular values, descending.
template <FieldScalar S>
RealVector singular_values(const Matrix<S>& m);

/// Spectral norm (largest singular value); 0 for empty matrices.
template <FieldScalar S>
double op_norm(const Matrix<S>& m);

/// Number of singular values above max(tol, max(rows, cols) * eps) * sigma_max.
template <FieldScalar S>
Index numerical_rank(const Matrix<S>& m, double tol = 1e-10);

/// Orthonormal basis of the column space of `m`.
///
/// Rank-revealing via the SVD: left singular vectors whose singular value
/// exceeds max(tol, max(rows, cols) * eps) * sigma_max are kept. `tol` is
/// relative to the largest singular value. The result has `m.rows()` rows
/// and as many columns as the numerical rank; columns are phase-normalized,
/// so the output is a deterministic function of the input.
///
/// Throws InvalidInput on non-finite entries.
template <FieldScalar S>
Matrix<S> orthonormalize(const Matrix<S>& m, double tol = 1e-10);

/// Relative Hermitian defect ||A - A^H||_F / ||A||_F (0 for the zero matrix).
template <FieldScalar S>
double hermitian_defect(const Matrix<S>& a);

/// Full Hermitian eigendecomposition. Throws InvalidInput when `a` is not
/// square, not finite, or not Hermitian to 1e-10 relative.
template <FieldScalar S>
EigResult<S> herm_eig(const Matrix<S>& a);

/// Extreme eigenvalues (min, max) of a Hermitian matrix.
template <FieldScalar S>
std::pair<double, double> herm_extremes(const Matrix<S>& a);

/// V f(Lambda) V^H. Throws SingularOperator if f is not finite at some eigenvalue.
template <FieldScalar S>
Matrix<S> herm_fn(const Matrix<S>& a, const std::function<double(double)>& f);

/// Inverse of a Hermitian positive definite matrix; throws SingularOperator
/// unless lambda_min > rel_tol * |lambda|_max.
template <FieldScalar S>
Matrix<S> herm_inverse(const Matrix<S>& a, double rel_tol = 1e-10);

/// A^{-1/2}, same guard as herm_inverse.
template <FieldScalar S>
Matrix<S> herm_inv_sqrt(const Matrix<S>& a, double rel_tol = 1e-10);

/// Moore-Penrose pseudo-inverse of a Hermitian PSD matrix; eigenvalues at or
/// below rel_tol * lambda_max are treated as zero.
template <FieldScalar S>
Matrix<S> herm_pinv(const Matrix<S>& a, double rel_tol = 1e-10);

/// Multiply each column by a unit scalar so its largest-magnitude entry is
/// real and positive (ties resolved by the lowest row index).
template <FieldScalar S>
void normalize_column_phases(Matrix<S>& m);

}  // namespace fusion
