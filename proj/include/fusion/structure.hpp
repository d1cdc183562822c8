#pragma once

#include "fusion/fusion_frame.hpp"

#include <vector>

namespace fusion {

// Completeness, minimality, Riesz decompositions and exactness. The primary
// decisions are rank tests on the stacked bases; the per-index intersection
// formulation is kept as an independent cross-check.

struct StructureReport {
  bool complete = false;
  bool minimal = false;
  bool riesz_decomposition = false;
  bool exact = false;             // only ever true for frames
  bool onb_of_subspaces = false;  // K^n is the orthogonal direct sum of the W_i
  bool pooled_basis_exact = false;
  std::vector<Index> dims;
  Index total_dim = 0;
  Index rank = 0;
  Index ambient_dim = 0;
};

/// rank [B_1 | ... | B_m] == n
template <FieldScalar S>
bool is_complete(const WeightedFamily<S>& fam, const Tolerances& tol = {});

/// rank [B_1 | ... | B_m] == sum dim W_i
template <FieldScalar S>
bool is_minimal(const WeightedFamily<S>& fam, const Tolerances& tol = {});

/// W_i ∩ span{W_j : j != i} = {0} for every i, via `intersect`.
template <FieldScalar S>
bool is_minimal_by_intersection(const WeightedFamily<S>& fam, const Tolerances& tol = {});

/// The synthesis operator, as the matrix [v_1 B_1 | ...], has full column rank.
template <FieldScalar S>
bool synthesis_injective(const WeightedFamily<S>& fam, const Tolerances& tol = {});

/// V_i = orthogonal complement of span{W_j : j != i}.
template <FieldScalar S>
std::vector<Subspace<S>> biorthogonal_family(const WeightedFamily<S>& fam, const Tolerances& tol = {});

struct BiorthogonalityCheck {
  bool orthogonal = false;            // W_j ⟂ V_i for all j != i
  std::vector<bool> nondegenerate;    // P_{V_i} restricted to W_i is injective
  bool holds = false;
};

template <FieldScalar S>
BiorthogonalityCheck check_biorthogonality(const WeightedFamily<S>& fam, const std::vector<Subspace<S>>& v,
                                           const Tolerances& tol = {});

/// complete ∧ minimal (equivalently: synthesis_injective on a complete family).
template <FieldScalar S>
bool is_riesz_decomposition(const WeightedFamily<S>& fam, const Tolerances& tol = {});

/// Removing any single subspace destroys completeness. Throws InvalidInput
/// if the family is not a frame.
template <FieldScalar S>
bool is_exact(const WeightedFamily<S>& fam, const Tolerances& tol = {});

/// The pooled system {v_i e_ij} is an exact frame, i.e. a basis of K^n.
template <FieldScalar S>
bool pooled_basis_is_exact(const WeightedFamily<S>& fam, const Tolerances& tol = {});

/// Per-index outcome of deleting W_i from a frame.
struct RemovalOutcome {
  bool frame = false;
  bool complete = false;
};

template <FieldScalar S>
std::vector<RemovalOutcome> removal_dichotomy(const WeightedFamily<S>& fam, const Tolerances& tol = {});

/// {S^{-1/2} W_i}. Throws PreconditionError unless the family is a minimal frame.
template <FieldScalar S>
std::vector<Subspace<S>> orthogonalize_minimal(const WeightedFamily<S>& fam, const Tolerances& tol = {});

template <FieldScalar S>
StructureReport analyze_structure(const WeightedFamily<S>& fam, const Tolerances& tol = {});

}  // namespace fusion
