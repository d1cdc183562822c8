#include "fusion/fusion_frame.hpp"

#include "fusion/numkernel.hpp"

#include <algorithm>
#include <cmath>

namespace fusion {

template <FieldScalar S>
WeightedFamily<S>::WeightedFamily(Index ambient_dim) : ambient_dim_(ambient_dim) {
  if (ambient_dim < 0 || ambient_dim > kMaxAmbientDim) {
    throw InvalidInput("WeightedFamily: ambient dimension out of range");
  }
}

template <FieldScalar S>
WeightedFamily<S>::WeightedFamily(Index ambient_dim, std::vector<WeightedSubspace<S>> items)
    : WeightedFamily(ambient_dim) {
  items_.reserve(items.size());
  for (auto& it : items) add(std::move(it.subspace), it.weight);
}

template <FieldScalar S>
void WeightedFamily<S>::add(Subspace<S> w, double weight) {
  if (w.ambient_dim() != ambient_dim_) {
    throw InvalidInput("WeightedFamily: subspace ambient dimension " + std::to_string(w.ambient_dim()) +
                       " does not match " + std::to_string(ambient_dim_));
  }
  if (!std::isfinite(weight) || weight <= 0.0) {
    throw InvalidInput("WeightedFamily: weights must be finite and positive");
  }
  items_.push_back({std::move(w), weight});
}

template <FieldScalar S>
std::vector<double> WeightedFamily<S>::weights() const {
  std::vector<double> out;
  out.reserve(items_.size());
  for (const auto& it : items_) out.push_back(it.weight);
  return out;
}

template <FieldScalar S>
Index WeightedFamily<S>::total_dim() const {
  Index d = 0;
  for (const auto& it : items_) d += it.subspace.dim();
  return d;
}

template <FieldScalar S>
WeightedFamily<S> WeightedFamily<S>::without(std::size_t i) const {
  WeightedFamily out(ambient_dim_);
  for (std::size_t k = 0; k < items_.size(); ++k) {
    if (k != i) out.items_.push_back(items_[k]);
  }
  return out;
}

template <FieldScalar S>
WeightedFamily<S> WeightedFamily<S>::subfamily(std::span<const std::size_t> indices) const {
  WeightedFamily out(ambient_dim_);
  for (std::size_t k : indices) {
    if (k >= items_.size()) throw InvalidInput("WeightedFamily::subfamily: index out of range");
    out.items_.push_back(items_[k]);
  }
  return out;
}

template <FieldScalar S>
Matrix<S> WeightedFamily<S>::stacked_basis(bool weighted) const {
  Matrix<S> out(ambient_dim_, total_dim());
  Index at = 0;
  for (const auto& it : items_) {
    const Index d = it.subspace.dim();
    out.middleCols(at, d) = it.subspace.basis();
    if (weighted) out.middleCols(at, d) *= S(it.weight);
    at += d;
  }
  return out;
}

template <FieldScalar S>
Matrix<S> frame_operator(const WeightedFamily<S>& f) {
  const Index n = f.ambient_dim();
  Matrix<S> s = Matrix<S>::Zero(n, n);
  for (const auto& it : f) {
    const Matrix<S>& b = it.subspace.basis();
    s.noalias() += S(it.weight * it.weight) * (b * b.adjoint());
  }
  return s;
}

template <FieldScalar S>
CoefficientBlocks<S> analysis(const WeightedFamily<S>& fam, const Vector<S>& f) {
  if (f.size() != fam.ambient_dim()) throw InvalidInput("analysis: vector length does not match ambient dimension");
  CoefficientBlocks<S> out;
  out.reserve(fam.size());
  for (const auto& it : fam) out.push_back(S(it.weight) * it.subspace.project(f));
  return out;
}

template <FieldScalar S>
Vector<S> synthesis(const WeightedFamily<S>& fam, const CoefficientBlocks<S>& c, double tol) {
  if (c.size() != fam.size()) throw InvalidInput("synthesis: block count does not match family size");
  Vector<S> out = Vector<S>::Zero(fam.ambient_dim());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& w = fam[i].subspace;
    if (c[i].size() != fam.ambient_dim()) throw InvalidInput("synthesis: block length does not match ambient dimension");
    if (!w.contains(c[i], tol)) {
      throw InvalidInput("synthesis: block " + std::to_string(i) + " does not lie in its subspace");
    }
    out += S(fam[i].weight) * c[i];
  }
  return out;
}

template <FieldScalar S>
double squared_norm(const CoefficientBlocks<S>& c) {
  double s = 0.0;
  for (const auto& b : c) s += b.squaredNorm();
  return s;
}

template <FieldScalar S>
S inner(const CoefficientBlocks<S>& a, const CoefficientBlocks<S>& b) {
  if (a.size() != b.size()) throw InvalidInput("inner: block counts differ");
  S s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += b[i].dot(a[i]);  // <a, b> linear in a
  return s;
}

template <FieldScalar S>
BoundsReport frame_bounds(const WeightedFamily<S>& fam, const Tolerances& tol) {
  BoundsReport r;
  const Index n = fam.ambient_dim();
  if (fam.empty() || n == 0) {
    r.eigenvalues = RealVector::Zero(n);
    return r;
  }
  r.eigenvalues = herm_eig(frame_operator(fam)).eigenvalues;
  r.lower = std::max(0.0, r.eigenvalues(0));
  r.upper = r.eigenvalues(n - 1);
  r.is_frame = r.upper > 0.0 && r.lower > tol.frame * r.upper;
  r.is_parseval = r.is_frame && std::max(std::abs(r.lower - 1.0), std::abs(r.upper - 1.0)) <= tol.check;
  r.is_tight = r.is_frame && (r.is_parseval || r.upper - r.lower <= tol.check * std::max(1.0, r.upper));

  const double v0 = fam[0].weight;
  r.is_uniform = std::all_of(fam.begin(), fam.end(), [&](const auto& it) {
    return std::abs(it.weight - v0) <= 1e-12 * v0;
  });
  r.is_onb = r.is_parseval && r.is_uniform && std::abs(v0 - 1.0) <= 1e-12 && fam.total_dim() == n;
  return r;
}

template <FieldScalar S>
BesselReport is_bessel(const WeightedFamily<S>& fam) {
  if (fam.empty() || fam.ambient_dim() == 0) return {true, 0.0};
  return {true, herm_extremes(frame_operator(fam)).second};
}

template <FieldScalar S>
Reconstruction<S> reconstruct(const WeightedFamily<S>& fam, const Vector<S>& f, const Tolerances& tol) {
  if (f.size() != fam.ambient_dim()) throw InvalidInput("reconstruct: vector length does not match ambient dimension");
  if (fam.empty()) throw SingularOperator("reconstruct: empty family is not a frame");
  const Matrix<S> s_inv = herm_inverse(frame_operator(fam), tol.frame);
  Vector<S> acc = Vector<S>::Zero(f.size());
  for (const auto& it : fam) acc += S(it.weight * it.weight) * it.subspace.project(f);
  Reconstruction<S> out{s_inv * acc, 0.0};
  out.residual = (out.value - f).norm() / std::max(f.norm(), 1.0);
  return out;
}

template <FieldScalar S>
WeightedFamily<S> dual(const WeightedFamily<S>& fam, const Tolerances& tol) {
  if (fam.empty()) throw SingularOperator("dual: empty family is not a frame");
  const Matrix<S> s_inv = herm_inverse(frame_operator(fam), tol.frame);
  WeightedFamily<S> out(fam.ambient_dim());
  for (const auto& it : fam) out.add(image(s_inv, it.subspace, tol.rank), it.weight);
  return out;
}

template <FieldScalar S>
Vector<S> project_onto_span(const WeightedFamily<S>& fam, const Vector<S>& f, const Tolerances& tol) {
  if (f.size() != fam.ambient_dim()) throw InvalidInput("project_onto_span: vector length does not match ambient dimension");
  if (fam.empty()) return Vector<S>::Zero(f.size());
  const Matrix<S> s_pinv = herm_pinv(frame_operator(fam), tol.frame);
  Vector<S> acc = Vector<S>::Zero(f.size());
  for (const auto& it : fam) acc += S(it.weight * it.weight) * it.subspace.project(f);
  return s_pinv * acc;
}

template <FieldScalar S>
bool verify_equivalence(const Matrix<S>& u, const WeightedFamily<S>& f, const WeightedFamily<S>& g,
                        bool unitary_required, const Tolerances& tol) {
  const Index n = f.ambient_dim();
  if (u.rows() != n || u.cols() != n || g.ambient_dim() != n) {
    throw InvalidInput("verify_equivalence: operator and families must share the ambient dimension");
  }
  if (f.size() != g.size()) throw InvalidInput("verify_equivalence: families differ in size");
  if (unitary_required && (u.adjoint() * u - Matrix<S>::Identity(n, n)).norm() > tol.subspace) return false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::abs(f[i].weight - g[i].weight) > 1e-12 * std::max(f[i].weight, g[i].weight)) return false;
    if (distance(image(u, g[i].subspace, tol.rank), f[i].subspace) > tol.subspace) return false;
  }
  return true;
}

#define FUSION_INSTANTIATE_FUSION(S)                                                                      \
  template class WeightedFamily<S>;                                                                       \
  template Matrix<S> frame_operator<S>(const WeightedFamily<S>&);                                         \
  template CoefficientBlocks<S> analysis<S>(const WeightedFamily<S>&, const Vector<S>&);                  \
  template Vector<S> synthesis<S>(const WeightedFamily<S>&, const CoefficientBlocks<S>&, double);         \
  template double squared_norm<S>(const CoefficientBlocks<S>&);                                           \
  template S inner<S>(const CoefficientBlocks<S>&, const CoefficientBlocks<S>&);                          \
  template BoundsReport frame_bounds<S>(const WeightedFamily<S>&, const Tolerances&);                     \
  template BesselReport is_bessel<S>(const WeightedFamily<S>&);                                           \
  template Reconstruction<S> reconstruct<S>(const WeightedFamily<S>&, const Vector<S>&, const Tolerances&); \
  template WeightedFamily<S> dual<S>(const WeightedFamily<S>&, const Tolerances&);                        \
  template Vector<S> project_onto_span<S>(const WeightedFamily<S>&, const Vector<S>&, const Tolerances&); \
  template bool verify_equivalence<S>(const Matrix<S>&, const WeightedFamily<S>&, const WeightedFamily<S>&, \
                                      bool, const Tolerances&);

FUSION_INSTANTIATE_FUSION(double)
FUSION_INSTANTIATE_FUSION(cdouble)

}  // namespace fusion
