#pragma once

#include "fusion/assembly.hpp"
#include "fusion/certificate.hpp"
#include "fusion/fusion_frame.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fusion {

/// Square operators {T_i} with weights v_i, optionally with the subspace each
/// T_i is meant to map into.
template <FieldScalar S>
struct OperatorFamily {
  std::vector<Matrix<S>> ops;
  std::vector<double> weights;
  std::vector<std::optional<Subspace<S>>> range_hints;

  Index ambient_dim() const { return ops.empty() ? 0 : ops.front().rows(); }
  std::size_t size() const { return ops.size(); }
};

/// Throws InvalidInput on non-square or mismatched operators, non-positive
/// weights, or a range hint that the operator leaves by more than tol.subspace.
template <FieldScalar S>
void validate(const OperatorFamily<S>& of, const Tolerances& tol = {});

/// ||sum (v_i^2 if scaled) T_i - I||_2, summed in list order.
template <FieldScalar S>
double resolution_defect(const OperatorFamily<S>& of, bool scaled);

template <FieldScalar S>
bool is_resolution(const OperatorFamily<S>& of, bool scaled, double tol = 1e-9);

/// Hermitian matrix of f -> sum c_i ||T_i f||^2, i.e. sum c_i T_i^H T_i, with
/// c_i = v_i^{power}.
template <FieldScalar S>
Matrix<S> quadratic_form(const OperatorFamily<S>& of, double power);

template <FieldScalar S>
struct ResolutionResult {
  OperatorFamily<S> family;
  bool scaled = true;  // whether {v_i^2 T_i} (true) or {T_i} resolves the identity
  double lambda_min = 0.0, lambda_max = 0.0;  // of sum v_i^2 T_i^H T_i
  std::vector<Inequality> certificate;
};

/// T_i = P_i S^{-1}; {v_i^2 T_i} resolves the identity and
/// C/D^2 <= lambda(sum v_i^2 T_i^H T_i) <= D/C^2.
/// Throws SingularOperator for non-frames.
template <FieldScalar S>
ResolutionResult<S> resolution_from_frame_operator(const WeightedFamily<S>& fam, const Tolerances& tol = {});

/// T_i f = sum_j <f, S_vf^{-1} v_i f_ij> v_i f_ij, built from the canonical
/// dual of the pooled frame {v_i f_ij}; {T_i} resolves the identity.
///
/// Certificate: upper constant B^2 D^3 / (A^2 C^2); lower constant
/// min(v_i^4) A^2 C / (B^2 D^2); and A C / (B^2 D^2), marked unproven, which
/// fails for some local bounds or weights below 1. (A, B) bound the
/// unweighted local frames and (C, D) the family.
template <FieldScalar S>
ResolutionResult<S> resolution_from_dual_frame(const WeightedFamily<S>& fam, const std::vector<LocalFrame<S>>& locals,
                                               const Tolerances& tol = {});

struct SubsetLowerEntry {
  std::vector<std::size_t> subset;
  double probe_worst_slack = 0.0;  // min over probes, unit-norm f
  double eigen_slack = 0.0;        // lambda_min of the difference form
  bool pass = false;
};

/// (1/D) ||sum_J v_j^2 T_j f||^2 <= sum_J v_j^2 ||T_j f||^2, by random unit
/// probes and exactly via the smallest eigenvalue of the difference form.
struct SubsetLowerReport {
  double D = 0.0;
  std::uint64_t seed = 0;
  std::size_t probes = 0;
  double worst_slack = 0.0;
  std::vector<SubsetLowerEntry> entries;
  bool pass = false;
};

template <FieldScalar S>
SubsetLowerReport subset_lower_certificate(const WeightedFamily<S>& fam, const OperatorFamily<S>& of,
                                           const std::vector<std::vector<std::size_t>>& subsets,
                                           std::size_t probes = 100, std::uint64_t seed = 0,
                                           const Tolerances& tol = {});

/// All nonempty subsets of {0, ..., n-1} (n <= 20).
std::vector<std::vector<std::size_t>> all_nonempty_subsets(std::size_t n);

/// Quadratic-form sandwich for resolutions with T_i P_i = T_i:
/// 1/D <= lambda(sum v_i^2 T_i^H T_i) against both D E and D E^2,
/// E = max ||T_i||. The D E form only holds in general when E <= 1.
struct SandwichReport {
  bool applicable = false;
  std::string reason;
  double D = 0.0, E = 0.0;
  double lambda_min = 0.0, lambda_max = 0.0;
  bool lower_holds = false;
  bool upper_DE_holds = false;
  bool upper_DE2_holds = false;
  std::vector<Inequality> inequalities;
};

template <FieldScalar S>
SandwichReport quadratic_form_sandwich(const WeightedFamily<S>& fam, const OperatorFamily<S>& of, const Tolerances& tol = {});

/// lambda_max(sum v_i^{-2} T_i^H T_i) <= B_req for an (unscaled) resolution.
/// With a family, also certifies the implied lower bound 1/D.
struct L2Report {
  bool resolves = false;
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  double bound_required = 0.0;
  bool pass = false;
  std::vector<Inequality> inequalities;
};

template <FieldScalar S>
L2Report l2_resolution_certificate(const OperatorFamily<S>& of, double bound_required,
                                   const WeightedFamily<S>* fam = nullptr, const Tolerances& tol = {});

}  // namespace fusion
