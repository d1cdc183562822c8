#pragma once

#include "fusion/fusion_frame.hpp"
#include "fusion/random.hpp"

#include <vector>

namespace fusion {

/// Orbit {U^i W_0 : i = 0..N-1} of a seed subspace under a unitary.
/// `weights` may be empty (all 1), a single uniform weight, or one per step.
template <FieldScalar S>
struct HarmonicSpec {
  Matrix<S> unitary;
  Subspace<S> seed;
  Index steps = 1;
  std::vector<double> weights;
};

/// Throws InvalidInput if U is not unitary to 1e-10, the seed lives in the
/// wrong space, steps < 1, or the weights are malformed.
template <FieldScalar S>
WeightedFamily<S> orbit_family(const HarmonicSpec<S>& spec);

struct WraparoundReport {
  double distance = 0.0;          // d(U W_{N-1}, W_0)
  bool holds = false;             // distance <= 1e-8
  bool uniform_parseval = false;  // orbit family is uniform and Parseval
  bool guaranteed = false;        // uniform Parseval, so the wrap-around must hold
};

template <FieldScalar S>
WraparoundReport check_wraparound(const HarmonicSpec<S>& spec, const Tolerances& tol = {});

/// U permutes `blocks` coordinate blocks of size `block_dim` cyclically
/// (block k to block k+1 through random unitary blocks), optionally
/// conjugated by a random unitary. The seed is the image of block 0, the
/// orbit runs `repeats` times around and weights are 1/sqrt(repeats), so the
/// orbit family is uniform Parseval.
template <FieldScalar S>
HarmonicSpec<S> block_shift_spec(Index block_dim, Index blocks, Index repeats, Rng& rng, bool conjugate = true);

/// Finite Gabor system on Z_L with window g; modulations are split into q
/// residue classes.
struct GaborSpec {
  Index length = 0;
  Vector<cdouble> window;
  Index q = 1;
};

/// (M_m x)_t = exp(2 pi i m t / L) x_t
Matrix<cdouble> modulation_operator(Index length, Index m);
/// (T_n x)_t = x_{(t - n) mod L}
Matrix<cdouble> translation_operator(Index length, Index n);

struct GaborFamily {
  WeightedFamily<cdouble> family;     // W_j = span{M_{mq+j} T_n g}, unit weights
  Matrix<cdouble> flat;               // column m L + n is M_m T_n g
  std::vector<std::vector<Index>> partition;  // flat columns of W_j
};

/// Throws InvalidInput for a zero or mis-sized window or q not dividing L.
GaborFamily gabor_family(const GaborSpec& spec, const Tolerances& tol = {});

/// M_1 maps W_j onto W_{j+1 mod q}, and each W_j is the image of W_0 under
/// the unitary M_1^j.
struct GaborHarmonicReport {
  std::vector<double> step_distances;  // d(M_1 W_j, W_{j+1 mod q})
  double max_distance = 0.0;
  bool steps_hold = false;
  bool equivalences_hold = false;
  bool pass = false;
};

GaborHarmonicReport harmonic_gabor_check(const GaborSpec& spec, const Tolerances& tol = {});

}  // namespace fusion
