#pragma once

#include "fusion/certificate.hpp"
#include "fusion/fusion_frame.hpp"
#include "fusion/vector_frame.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace fusion {

/// A frame sequence {f_ij}_j (columns of `vectors`) for a subspace W_i.
/// Claimed bounds and span are optional and only ever validated, never trusted.
template <FieldScalar S>
struct LocalFrame {
  Matrix<S> vectors;
  std::optional<Subspace<S>> subspace_hint;
  std::optional<double> lower_claim;
  std::optional<double> upper_claim;
};

template <FieldScalar S>
struct WeightedLocal {
  LocalFrame<S> local;
  double weight = 1.0;
};

/// Span and recomputed bounds of a local frame.
template <FieldScalar S>
struct LocalSummary {
  Subspace<S> span;
  double lower = 0.0;
  double upper = 0.0;
};

/// Recomputes (A_i, B_i) as the extreme nonzero eigenvalues of the local
/// frame operator. Throws InvalidInput when the vectors span {0}, do not
/// span the hinted subspace, or disagree with claimed bounds by more than
/// 1e-6 relative.
template <FieldScalar S>
LocalSummary<S> summarize_local(const LocalFrame<S>& local, const Tolerances& tol = {});

/// Equivalence of the three frame conditions for locally assembled frames,
/// together with the two bound sandwiches
///   A C <= C_g,  D_g <= B D  and  C_g / B <= C,  D <= D_g / A.
struct TransferReport {
  double A = 0.0, B = 0.0;       // inf A_i, sup B_i
  double C = 0.0, D = 0.0;       // fusion bounds of {W_i, v_i}
  double C_g = 0.0, D_g = 0.0;   // bounds of the flat frame {v_i f_ij}
  double C_e = 0.0, D_e = 0.0;   // bounds of the pooled bases {v_i e_ij}
  bool flat_is_frame = false;
  bool pooled_onb_is_frame = false;
  bool family_is_frame = false;
  bool flat_is_parseval = false;
  bool pooled_onb_is_parseval = false;
  bool family_is_parseval = false;
  bool predicates_agree = false;
  std::vector<Inequality> inequalities;
};

template <FieldScalar S>
struct GlobalAssembly {
  Matrix<S> flat;               // columns v_i f_ij, grouped by i
  Matrix<S> pooled_onb;         // columns v_i e_ij
  WeightedFamily<S> family;     // {span f_ij, v_i}
  std::vector<LocalSummary<S>> locals;
  TransferReport report;
};

template <FieldScalar S>
GlobalAssembly<S> assemble_global(const std::vector<WeightedLocal<S>>& locals, const Tolerances& tol = {});

/// Validates that `partition` splits 0..count-1 into disjoint covering cells.
void validate_partition(const std::vector<std::vector<Index>>& partition, Index count);

/// Spans of the partition cells as a weighted family. The input columns
/// must form a frame for the ambient space (InvalidInput otherwise).
template <FieldScalar S>
WeightedFamily<S> from_partition(const Matrix<S>& vectors, const std::vector<std::vector<Index>>& partition,
                                 const std::vector<double>& weights, const Tolerances& tol = {});

/// (A/B) ||f||^2 <= sum ||P_i f||^2 <= |I| ||f||^2 for the cells of a
/// partitioned frame, unit weights.
struct PartitionCertificate {
  double A = 0.0, B = 0.0;
  double lambda_min = 0.0, lambda_max = 0.0;  // of sum P_i
  std::size_t cells = 0;
  std::vector<Inequality> inequalities;
  bool pass = false;
};

template <FieldScalar S>
PartitionCertificate partition_certificate(const Matrix<S>& vectors, const std::vector<std::vector<Index>>& partition,
                                     const Tolerances& tol = {});

/// Local frames {P_i S^{-1} f_j}_j for each W_i and their union.
template <FieldScalar S>
struct Enrichment {
  std::vector<Matrix<S>> local_frames;
  std::vector<FrameBounds> local_bounds;  // inside W_i; zero-dim W_i report is_frame = false
  double min_lower = 0.0, max_upper = 0.0;
  double predicted_lower = 0.0;  // A / D^2
  double predicted_upper = 0.0;  // B / C^2
  Matrix<S> flat;
  FrameBounds flat_bounds;
  std::vector<Inequality> inequalities;
};

/// Throws InvalidInput when `fam` or the vectors are not frames for K^n.
template <FieldScalar S>
Enrichment<S> enrich(const WeightedFamily<S>& fam, const Matrix<S>& vectors, const Tolerances& tol = {});

/// Bounds of the subfamily at `subset` as a fusion frame for its own span.
template <FieldScalar S>
FrameBounds subfamily_span_bounds(const WeightedFamily<S>& fam, const std::vector<std::size_t>& subset,
                                  const Tolerances& tol = {});

enum class SubsetMode { Exhaustive, Sampled };

struct RieszCertificate {
  SubsetMode mode = SubsetMode::Exhaustive;
  std::uint64_t seed = 0;
  std::size_t subsets_checked = 0;
  double min_lower = 0.0;
  double max_upper = 0.0;
  std::vector<std::size_t> worst_subset;  // attains min_lower
  double lower_required = 0.0;
  double upper_required = 0.0;
  bool pass = false;
};

/// Checks that every (or >= `samples` random) nonempty subfamily is a fusion
/// frame for its span with bounds in [lower_required, upper_required].
/// Exhaustive mode is limited to 16 subspaces (InvalidInput beyond).
template <FieldScalar S>
RieszCertificate riesz_family_certificate(const WeightedFamily<S>& fam, SubsetMode mode, double lower_required,
                                          double upper_required, std::uint64_t seed = 0,
                                          std::size_t samples = 200, const Tolerances& tol = {});

/// Pools Riesz frames of the W_i into a flat family and samples unions of
/// per-local subsets, checking their span bounds against [C A, B D], where
/// (C, D) are the Riesz bounds of the family of spans and (A, B) the Riesz
/// bounds of the locals.
struct RieszAssemblyReport {
  double A = 0.0, B = 0.0, C = 0.0, D = 0.0;
  std::size_t samples = 0;
  double min_lower = 0.0, max_upper = 0.0;
  std::uint64_t seed = 0;
  std::vector<Inequality> inequalities;
};

template <FieldScalar S>
RieszAssemblyReport riesz_assembly_certificate(const std::vector<WeightedLocal<S>>& locals, std::size_t samples,
                                               std::uint64_t seed, const Tolerances& tol = {});

}  // namespace fusion
