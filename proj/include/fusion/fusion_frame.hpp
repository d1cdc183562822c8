#pragma once

#include "fusion/core.hpp"
#include "fusion/subspace.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace fusion {

template <FieldScalar S>
struct WeightedSubspace {
  Subspace<S> subspace;
  double weight = 1.0;
};

/// An ordered family {(W_i, v_i)} of subspaces of K^n with positive weights.
/// This is the candidate fusion frame; the empty family is allowed.
template <FieldScalar S>
class WeightedFamily {
 public:
  explicit WeightedFamily(Index ambient_dim = 0);
  WeightedFamily(Index ambient_dim, std::vector<WeightedSubspace<S>> items);

  /// Throws InvalidInput on ambient mismatch or a weight that is not finite and > 0.
  void add(Subspace<S> w, double weight = 1.0);

  Index ambient_dim() const { return ambient_dim_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const WeightedSubspace<S>& operator[](std::size_t i) const { return items_[i]; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  const std::vector<WeightedSubspace<S>>& items() const { return items_; }

  std::vector<double> weights() const;
  Index total_dim() const;

  /// The family with item `i` removed.
  WeightedFamily without(std::size_t i) const;
  /// Items at the given indices, in the given order.
  WeightedFamily subfamily(std::span<const std::size_t> indices) const;

  /// [B_1 | B_2 | ...], optionally scaled by the weights ([v_1 B_1 | ...]);
  /// the weighted form is the matrix of the synthesis operator in the
  /// coordinates of the bases.
  Matrix<S> stacked_basis(bool weighted = false) const;

 private:
  Index ambient_dim_ = 0;
  std::vector<WeightedSubspace<S>> items_;
};

/// One vector per family index, the i-th lying in W_i.
template <FieldScalar S>
using CoefficientBlocks = std::vector<Vector<S>>;

/// Optimal bounds and classification of a family. Bounds follow the
/// squared-weight convention: C ||f||^2 <= sum v_i^2 ||P_i f||^2 <= D ||f||^2.
struct BoundsReport {
  double lower = 0.0;  // C = lambda_min(S)
  double upper = 0.0;  // D = lambda_max(S)
  bool is_frame = false;
  bool is_tight = false;
  bool is_parseval = false;
  bool is_uniform = false;
  bool is_onb = false;
  RealVector eigenvalues;  // of S, ascending
};

struct BesselReport {
  bool is_bessel = true;
  double bound = 0.0;
};

template <FieldScalar S>
struct Reconstruction {
  Vector<S> value;
  double residual = 0.0;  // ||f_rec - f|| / max(||f||, 1)
};

/// S = sum v_i^2 P_i (zero matrix for the empty family).
template <FieldScalar S>
Matrix<S> frame_operator(const WeightedFamily<S>& f);

/// {v_i P_i f}
template <FieldScalar S>
CoefficientBlocks<S> analysis(const WeightedFamily<S>& fam, const Vector<S>& f);

/// sum v_i c_i; throws InvalidInput if a block leaves its subspace by more
/// than tol * max(1, ||c_i||) or the block count is wrong.
template <FieldScalar S>
Vector<S> synthesis(const WeightedFamily<S>& fam, const CoefficientBlocks<S>& c, double tol = 1e-9);

/// Squared l2 norm of a block sequence.
template <FieldScalar S>
double squared_norm(const CoefficientBlocks<S>& c);

/// Sum of <a_i, b_i>.
template <FieldScalar S>
S inner(const CoefficientBlocks<S>& a, const CoefficientBlocks<S>& b);

/// Extreme eigenvalues of S and the derived flags. A family is a frame iff
/// lambda_min > tol.frame * lambda_max.
template <FieldScalar S>
BoundsReport frame_bounds(const WeightedFamily<S>& fam, const Tolerances& tol = {});

/// Every finite family is Bessel; the optimal bound is lambda_max(S).
template <FieldScalar S>
BesselReport is_bessel(const WeightedFamily<S>& fam);

/// f_rec = sum v_i^2 S^{-1} P_i f. Throws SingularOperator for non-frames.
template <FieldScalar S>
Reconstruction<S> reconstruct(const WeightedFamily<S>& fam, const Vector<S>& f, const Tolerances& tol = {});

/// {S^{-1} W_i} with the same weights. Throws SingularOperator for non-frames.
template <FieldScalar S>
WeightedFamily<S> dual(const WeightedFamily<S>& fam, const Tolerances& tol = {});

/// Orthogonal projection onto the span V of the family, computed as
/// sum v_i^2 S^+ P_i f with S^+ the inverse of S restricted to V.
template <FieldScalar S>
Vector<S> project_onto_span(const WeightedFamily<S>& fam, const Vector<S>& f, const Tolerances& tol = {});

/// True iff W_i = U(G_i) for all i (to tol.subspace) and, when required,
/// U is unitary. Size or dimension mismatches throw InvalidInput; differing
/// weights make the answer false.
template <FieldScalar S>
bool verify_equivalence(const Matrix<S>& u, const WeightedFamily<S>& f, const WeightedFamily<S>& g,
                        bool unitary_required, const Tolerances& tol = {});

}  // namespace fusion
