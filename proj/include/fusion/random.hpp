#pragma once

#include "fusion/fusion_frame.hpp"

#include <cstdint>
#include <random>

namespace fusion {

using Rng = std::mt19937_64;

/// Standard normal entries (complex: independent real and imaginary parts,
/// each with variance 1/2).
template <FieldScalar S>
Matrix<S> random_matrix(Index rows, Index cols, Rng& rng);

template <FieldScalar S>
Vector<S> random_vector(Index n, Rng& rng);

/// Uniform point on the unit sphere.
template <FieldScalar S>
Vector<S> random_unit_vector(Index n, Rng& rng);

/// Haar-distributed unitary (orthogonal in the real case).
template <FieldScalar S>
Matrix<S> random_unitary(Index n, Rng& rng);

/// Uniformly random k-dimensional subspace.
template <FieldScalar S>
Subspace<S> random_subspace(Index n, Index k, Rng& rng);

/// Random family of `count` subspaces with dimensions in [1, max_dim] and
/// weights in [0.5, 2]. Not guaranteed to be a frame.
template <FieldScalar S>
WeightedFamily<S> random_family(Index n, std::size_t count, Index max_dim, Rng& rng);

/// Random family that spans K^n: a random family plus extra random
/// subspaces until the stacked bases have full rank.
template <FieldScalar S>
WeightedFamily<S> random_frame_family(Index n, std::size_t count, Index max_dim, Rng& rng);

}  // namespace fusion
