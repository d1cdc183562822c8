#include "fusion/numkernel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace fusion {

namespace {

template <FieldScalar S>
void require_square(const Matrix<S>& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw InvalidInput(std::string(what) + ": matrix must be square, got " +
                       std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

template <FieldScalar S>
double rank_threshold(const Matrix<S>& m, double sigma_max, double tol) {
  const double floor = static_cast<double>(std::max(m.rows(), m.cols())) *
                       std::numeric_limits<double>::epsilon();
  return std::max(tol, floor) * sigma_max;
}

}  // namespace

template <FieldScalar S>
bool all_finite(const Matrix<S>& m) {
  return m.allFinite();
}

template <FieldScalar S>
RealVector singular_values(const Matrix<S>& m) {
  if (m.size() == 0) return RealVector(0);
  Eigen::BDCSVD<Matrix<S>> svd(m);
  return svd.singularValues();
}

template <FieldScalar S>
double op_norm(const Matrix<S>& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

template <FieldScalar S>
Index numerical_rank(const Matrix<S>& m, double tol) {
  if (!m.allFinite()) throw InvalidInput("numerical_rank: non-finite entries");
  const RealVector sv = singular_values(m);
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = rank_threshold(m, sv(0), tol);
  return static_cast<Index>((sv.array() > cut).count());
}

template <FieldScalar S>
void normalize_column_phases(Matrix<S>& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    Index best = 0;
    double best_abs = -1.0;
    for (Index i = 0; i < m.rows(); ++i) {
      const double a = std::abs(m(i, j));
      // strict comparison with a small margin keeps the lowest index on near-ties
      if (a > best_abs * (1.0 + 1e-12)) {
        best_abs = a;
        best = i;
      }
    }
    if (best_abs <= 0.0) continue;
    const S phase = m(best, j) / best_abs;
    if constexpr (is_complex_v<S>) {
      m.col(j) *= std::conj(phase);
    } else {
      m.col(j) *= phase;
    }
  }
}

template <FieldScalar S>
Matrix<S> orthonormalize(const Matrix<S>& m, double tol) {
  if (!m.allFinite()) throw InvalidInput("orthonormalize: non-finite entries");
  if (m.cols() == 0 || m.rows() == 0) return Matrix<S>(m.rows(), 0);
  Eigen::BDCSVD<Matrix<S>> svd(m, Eigen::ComputeThinU);
  const RealVector& sv = svd.singularValues();
  if (sv(0) == 0.0) return Matrix<S>(m.rows(), 0);
  const double cut = rank_threshold(m, sv(0), tol);
  const Index rank = static_cast<Index>((sv.array() > cut).count());
  Matrix<S> q = svd.matrixU().leftCols(rank);
  normalize_column_phases(q);
  return q;
}

template <FieldScalar S>
double hermitian_defect(const Matrix<S>& a) {
  const double scale = a.norm();
  if (scale == 0.0) return 0.0;
  return (a - a.adjoint()).norm() / scale;
}

template <FieldScalar S>
EigResult<S> herm_eig(const Matrix<S>& a) {
  require_square(a, "herm_eig");
  if (!a.allFinite()) throw InvalidInput("herm_eig: non-finite entries");
  if (hermitian_defect(a) > 1e-10) throw InvalidInput("herm_eig: matrix is not Hermitian");
  if (a.rows() == 0) return {RealVector(0), Matrix<S>(0, 0)};
  const Matrix<S> sym = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix<S>> es(sym);
  if (es.info() != Eigen::Success) throw SingularOperator("herm_eig: eigensolver did not converge");
  EigResult<S> out{es.eigenvalues(), es.eigenvectors()};
  normalize_column_phases(out.eigenvectors);
  return out;
}

template <FieldScalar S>
std::pair<double, double> herm_extremes(const Matrix<S>& a) {
  require_square(a, "herm_extremes");
  if (a.rows() == 0) return {0.0, 0.0};
  if (!a.allFinite()) throw InvalidInput("herm_extremes: non-finite entries");
  if (hermitian_defect(a) > 1e-10) throw InvalidInput("herm_extremes: matrix is not Hermitian");
  const Matrix<S> sym = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix<S>> es(sym, Eigen::EigenvaluesOnly);
  const RealVector& ev = es.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

template <FieldScalar S>
Matrix<S> herm_fn(const Matrix<S>& a, const std::function<double(double)>& f) {
  const EigResult<S> eig = herm_eig(a);
  RealVector mapped(eig.eigenvalues.size());
  for (Index k = 0; k < mapped.size(); ++k) {
    mapped(k) = f(eig.eigenvalues(k));
    if (!std::isfinite(mapped(k))) {
      throw SingularOperator("herm_fn: function undefined at eigenvalue " +
                             std::to_string(eig.eigenvalues(k)));
    }
  }
  const Matrix<S>& v = eig.eigenvectors;
  return v * mapped.template cast<S>().asDiagonal() * v.adjoint();
}

namespace {

template <FieldScalar S>
Matrix<S> guarded_power(const Matrix<S>& a, double rel_tol, double power, const char* what) {
  const EigResult<S> eig = herm_eig(a);
  const Index n = eig.eigenvalues.size();
  if (n == 0) return Matrix<S>(0, 0);
  const double scale = eig.eigenvalues.cwiseAbs().maxCoeff();
  const double lmin = eig.eigenvalues(0);
  if (!(scale > 0.0) || lmin <= rel_tol * scale) {
    throw SingularOperator(std::string(what) + ": operator is singular (lambda_min = " +
                           std::to_string(lmin) + ", lambda_max = " + std::to_string(scale) + ")");
  }
  const RealVector mapped = eig.eigenvalues.array().pow(power);
  const Matrix<S>& v = eig.eigenvectors;
  return v * mapped.template cast<S>().asDiagonal() * v.adjoint();
}

}  // namespace

template <FieldScalar S>
Matrix<S> herm_inverse(const Matrix<S>& a, double rel_tol) {
  return guarded_power(a, rel_tol, -1.0, "herm_inverse");
}

template <FieldScalar S>
Matrix<S> herm_inv_sqrt(const Matrix<S>& a, double rel_tol) {
  return guarded_power(a, rel_tol, -0.5, "herm_inv_sqrt");
}

template <FieldScalar S>
Matrix<S> herm_pinv(const Matrix<S>& a, double rel_tol) {
  const EigResult<S> eig = herm_eig(a);
  const Index n = eig.eigenvalues.size();
  if (n == 0) return Matrix<S>(0, 0);
  const double lmax = eig.eigenvalues(n - 1);
  RealVector mapped = RealVector::Zero(n);
  for (Index k = 0; k < n; ++k) {
    if (lmax > 0.0 && eig.eigenvalues(k) > rel_tol * lmax) mapped(k) = 1.0 / eig.eigenvalues(k);
  }
  const Matrix<S>& v = eig.eigenvectors;
  return v * mapped.template cast<S>().asDiagonal() * v.adjoint();
}

#define FUSION_INSTANTIATE_NUMKERNEL(S)                                                   \
  template bool all_finite<S>(const Matrix<S>&);                                          \
  template RealVector singular_values<S>(const Matrix<S>&);                               \
  template double op_norm<S>(const Matrix<S>&);                                           \
  template Index numerical_rank<S>(const Matrix<S>&, double);                             \
  template Matrix<S> orthonormalize<S>(const Matrix<S>&, double);                         \
  template double hermitian_defect<S>(const Matrix<S>&);                                  \
  template EigResult<S> herm_eig<S>(const Matrix<S>&);                                    \
  template std::pair<double, double> herm_extremes<S>(const Matrix<S>&);                  \
  template Matrix<S> herm_fn<S>(const Matrix<S>&, const std::function<double(double)>&);  \
  template Matrix<S> herm_inverse<S>(const Matrix<S>&, double);                           \
  template Matrix<S> herm_inv_sqrt<S>(const Matrix<S>&, double);                          \
  template Matrix<S> herm_pinv<S>(const Matrix<S>&, double);                              \
  template void normalize_column_phases<S>(Matrix<S>&);

FUSION_INSTANTIATE_NUMKERNEL(double)
FUSION_INSTANTIATE_NUMKERNEL(cdouble)

}  // namespace fusion
