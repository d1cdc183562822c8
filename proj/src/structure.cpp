#include "fusion/structure.hpp"

#include "fusion/numkernel.hpp"

#include <algorithm>
#include <cmath>

namespace fusion {

namespace {

template <FieldScalar S>
Index stacked_rank(const WeightedFamily<S>& fam, const Tolerances& tol) {
  if (fam.total_dim() == 0) return 0;
  return numerical_rank(fam.stacked_basis(), tol.rank);
}

template <FieldScalar S>
Subspace<S> span_of_others(const WeightedFamily<S>& fam, std::size_t i, const Tolerances& tol) {
  return Subspace<S>::from_spanning(fam.without(i).stacked_basis(), tol.rank);
}

}  // namespace

template <FieldScalar S>
bool is_complete(const WeightedFamily<S>& fam, const Tolerances& tol) {
  return stacked_rank(fam, tol) == fam.ambient_dim();
}

template <FieldScalar S>
bool is_minimal(const WeightedFamily<S>& fam, const Tolerances& tol) {
  return stacked_rank(fam, tol) == fam.total_dim();
}

template <FieldScalar S>
bool is_minimal_by_intersection(const WeightedFamily<S>& fam, const Tolerances& tol) {
  for (std::size_t i = 0; i < fam.size(); ++i) {
    if (intersect(fam[i].subspace, span_of_others(fam, i, tol), tol.subspace).dim() != 0) return false;
  }
  return true;
}

template <FieldScalar S>
bool synthesis_injective(const WeightedFamily<S>& fam, const Tolerances& tol) {
  const Index cols = fam.total_dim();
  if (cols == 0) return true;
  if (cols > fam.ambient_dim()) return false;
  const RealVector sv = singular_values<S>(fam.stacked_basis(true));
  return sv(cols - 1) > tol.rank * sv(0);
}

template <FieldScalar S>
std::vector<Subspace<S>> biorthogonal_family(const WeightedFamily<S>& fam, const Tolerances& tol) {
  std::vector<Subspace<S>> out;
  out.reserve(fam.size());
  for (std::size_t i = 0; i < fam.size(); ++i) out.push_back(orthogonal_complement(span_of_others(fam, i, tol), tol.rank));
  return out;
}

template <FieldScalar S>
BiorthogonalityCheck check_biorthogonality(const WeightedFamily<S>& fam, const std::vector<Subspace<S>>& v,
                                           const Tolerances& tol) {
  if (v.size() != fam.size()) throw InvalidInput("check_biorthogonality: one subspace per family index required");
  BiorthogonalityCheck out;
  out.orthogonal = true;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    for (std::size_t j = 0; j < fam.size(); ++j) {
      if (i == j || v[i].dim() == 0 || fam[j].subspace.dim() == 0) continue;
      if ((v[i].basis().adjoint() * fam[j].subspace.basis()).norm() > tol.subspace) out.orthogonal = false;
    }
    // P_{V_i} on W_i in coordinates: V_i^H B_i must have full column rank.
    const Index d = fam[i].subspace.dim();
    bool ok = true;
    if (d > 0) {
      if (v[i].dim() < d) {
        ok = false;
      } else {
        const RealVector sv = singular_values<S>(v[i].basis().adjoint() * fam[i].subspace.basis());
        ok = sv(d - 1) > std::sqrt(tol.subspace);
      }
    }
    out.nondegenerate.push_back(ok);
  }
  out.holds = out.orthogonal && std::all_of(out.nondegenerate.begin(), out.nondegenerate.end(), [](bool b) { return b; });
  return out;
}

template <FieldScalar S>
bool is_riesz_decomposition(const WeightedFamily<S>& fam, const Tolerances& tol) {
  const Index rank = stacked_rank(fam, tol);
  return rank == fam.ambient_dim() && rank == fam.total_dim();
}

template <FieldScalar S>
bool is_exact(const WeightedFamily<S>& fam, const Tolerances& tol) {
  if (!frame_bounds(fam, tol).is_frame) throw InvalidInput("is_exact: the family is not a frame of subspaces");
  for (std::size_t i = 0; i < fam.size(); ++i) {
    if (is_complete(fam.without(i), tol)) return false;
  }
  return true;
}

template <FieldScalar S>
bool pooled_basis_is_exact(const WeightedFamily<S>& fam, const Tolerances& tol) {
  return fam.total_dim() == fam.ambient_dim() && stacked_rank(fam, tol) == fam.ambient_dim();
}

template <FieldScalar S>
std::vector<RemovalOutcome> removal_dichotomy(const WeightedFamily<S>& fam, const Tolerances& tol) {
  std::vector<RemovalOutcome> out;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const WeightedFamily<S> rest = fam.without(i);
    out.push_back({frame_bounds(rest, tol).is_frame, is_complete(rest, tol)});
  }
  return out;
}

template <FieldScalar S>
std::vector<Subspace<S>> orthogonalize_minimal(const WeightedFamily<S>& fam, const Tolerances& tol) {
  if (!frame_bounds(fam, tol).is_frame) throw PreconditionError("orthogonalize_minimal: the family is not a frame");
  if (!is_minimal(fam, tol)) throw PreconditionError("orthogonalize_minimal: the family is not minimal");
  const Matrix<S> root = herm_inv_sqrt(frame_operator(fam), tol.frame);
  std::vector<Subspace<S>> out;
  out.reserve(fam.size());
  for (const auto& it : fam) out.push_back(image(root, it.subspace, tol.rank));
  return out;
}

template <FieldScalar S>
StructureReport analyze_structure(const WeightedFamily<S>& fam, const Tolerances& tol) {
  StructureReport r;
  r.ambient_dim = fam.ambient_dim();
  r.total_dim = fam.total_dim();
  for (const auto& it : fam) r.dims.push_back(it.subspace.dim());
  r.rank = stacked_rank(fam, tol);
  r.complete = r.rank == r.ambient_dim;
  r.minimal = r.rank == r.total_dim;
  r.riesz_decomposition = r.complete && r.minimal;
  r.exact = frame_bounds(fam, tol).is_frame && is_exact(fam, tol);
  r.pooled_basis_exact = pooled_basis_is_exact(fam, tol);
  if (r.total_dim == r.ambient_dim && r.total_dim > 0) {
    const Matrix<S> b = fam.stacked_basis();
    r.onb_of_subspaces = (b.adjoint() * b - Matrix<S>::Identity(r.total_dim, r.total_dim)).norm() <= tol.check;
  }
  return r;
}

#define FUSION_INSTANTIATE_STRUCTURE(S)                                                                          \
  template bool is_complete<S>(const WeightedFamily<S>&, const Tolerances&);                                     \
  template bool is_minimal<S>(const WeightedFamily<S>&, const Tolerances&);                                      \
  template bool is_minimal_by_intersection<S>(const WeightedFamily<S>&, const Tolerances&);                      \
  template bool synthesis_injective<S>(const WeightedFamily<S>&, const Tolerances&);                             \
  template std::vector<Subspace<S>> biorthogonal_family<S>(const WeightedFamily<S>&, const Tolerances&);         \
  template BiorthogonalityCheck check_biorthogonality<S>(const WeightedFamily<S>&, const std::vector<Subspace<S>>&, \
                                                         const Tolerances&);                                     \
  template bool is_riesz_decomposition<S>(const WeightedFamily<S>&, const Tolerances&);                          \
  template bool is_exact<S>(const WeightedFamily<S>&, const Tolerances&);                                        \
  template bool pooled_basis_is_exact<S>(const WeightedFamily<S>&, const Tolerances&);                           \
  template std::vector<RemovalOutcome> removal_dichotomy<S>(const WeightedFamily<S>&, const Tolerances&);        \
  template std::vector<Subspace<S>> orthogonalize_minimal<S>(const WeightedFamily<S>&, const Tolerances&);       \
  template StructureReport analyze_structure<S>(const WeightedFamily<S>&, const Tolerances&);

FUSION_INSTANTIATE_STRUCTURE(double)
FUSION_INSTANTIATE_STRUCTURE(cdouble)

}  // namespace fusion
