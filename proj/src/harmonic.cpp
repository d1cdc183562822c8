#include "fusion/harmonic.hpp"

#include "fusion/numkernel.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fusion {

namespace {

constexpr double kUnitaryTol = 1e-10;
constexpr double kWrapTol = 1e-8;

template <FieldScalar S>
std::vector<double> expand_weights(const std::vector<double>& w, Index steps) {
  std::vector<double> out;
  if (w.empty()) {
    out.assign(steps, 1.0);
  } else if (w.size() == 1) {
    out.assign(steps, w.front());
  } else if (static_cast<Index>(w.size()) == steps) {
    out = w;
  } else {
    throw InvalidInput("harmonic spec: weights must be empty, a single value, or one per step");
  }
  return out;
}

template <FieldScalar S>
void validate_spec(const HarmonicSpec<S>& spec) {
  const Index n = spec.unitary.rows();
  if (n == 0 || spec.unitary.cols() != n) throw InvalidInput("harmonic spec: unitary must be square and nonempty");
  if (!all_finite(spec.unitary)) throw InvalidInput("harmonic spec: unitary is not finite");
  if (op_norm<S>(spec.unitary.adjoint() * spec.unitary - Matrix<S>::Identity(n, n)) > kUnitaryTol) {
    throw InvalidInput("harmonic spec: operator is not unitary");
  }
  if (spec.seed.ambient_dim() != n) throw InvalidInput("harmonic spec: seed subspace has the wrong ambient dimension");
  if (spec.steps < 1) throw InvalidInput("harmonic spec: at least one step required");
}

}  // namespace

template <FieldScalar S>
WeightedFamily<S> orbit_family(const HarmonicSpec<S>& spec) {
  validate_spec(spec);
  const std::vector<double> w = expand_weights<S>(spec.weights, spec.steps);
  WeightedFamily<S> fam(spec.unitary.rows());
  Subspace<S> cur = spec.seed;
  for (Index i = 0; i < spec.steps; ++i) {
    fam.add(cur, w[i]);
    if (i + 1 < spec.steps) cur = image(spec.unitary, cur);
  }
  return fam;
}

template <FieldScalar S>
WraparoundReport check_wraparound(const HarmonicSpec<S>& spec, const Tolerances& tol) {
  const WeightedFamily<S> fam = orbit_family(spec);
  WraparoundReport r;
  r.distance = distance(image(spec.unitary, fam[fam.size() - 1].subspace), spec.seed);
  r.holds = r.distance <= kWrapTol;
  const BoundsReport b = frame_bounds(fam, tol);
  r.uniform_parseval = b.is_uniform && b.is_parseval;
  r.guaranteed = r.uniform_parseval;
  return r;
}

template <FieldScalar S>
HarmonicSpec<S> block_shift_spec(Index block_dim, Index blocks, Index repeats, Rng& rng, bool conjugate) {
  if (block_dim < 1 || blocks < 1 || repeats < 1) throw InvalidInput("block_shift_spec: sizes must be positive");
  const Index n = block_dim * blocks;
  Matrix<S> u = Matrix<S>::Zero(n, n);
  for (Index k = 0; k < blocks; ++k) {
    const Index to = (k + 1) % blocks;
    u.block(to * block_dim, k * block_dim, block_dim, block_dim) = random_unitary<S>(block_dim, rng);
  }
  std::vector<Index> coords(block_dim);
  for (Index k = 0; k < block_dim; ++k) coords[k] = k;
  Subspace<S> seed = Subspace<S>::coordinate(n, coords);
  if (conjugate) {
    const Matrix<S> v = random_unitary<S>(n, rng);
    u = v * u * v.adjoint();
    seed = image(v, seed);
  }
  return {u, seed, blocks * repeats, {1.0 / std::sqrt(static_cast<double>(repeats))}};
}

Matrix<cdouble> modulation_operator(Index length, Index m) {
  Vector<cdouble> d(length);
  for (Index t = 0; t < length; ++t) {
    // Reduce m t mod L first so the phase stays exact for large indices.
    const Index r = ((m % length) * t % length + length) % length;
    d(t) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(length));
  }
  return d.asDiagonal();
}

Matrix<cdouble> translation_operator(Index length, Index n) {
  Matrix<cdouble> t = Matrix<cdouble>::Zero(length, length);
  for (Index row = 0; row < length; ++row) t(row, ((row - n) % length + length) % length) = 1.0;
  return t;
}

GaborFamily gabor_family(const GaborSpec& spec, const Tolerances& tol) {
  const Index len = spec.length;
  if (len < 1 || len > 64) throw InvalidInput("gabor spec: length must be in [1, 64]");
  if (spec.window.size() != len) throw InvalidInput("gabor spec: window must have length L");
  if (!all_finite<cdouble>(spec.window)) throw InvalidInput("gabor spec: window is not finite");
  if (spec.window.norm() == 0.0) throw InvalidInput("gabor spec: window is zero");
  if (spec.q < 1 || len % spec.q != 0) throw InvalidInput("gabor spec: q must divide L");

  GaborFamily g;
  g.flat.resize(len, len * len);
  for (Index m = 0; m < len; ++m) {
    const Matrix<cdouble> mod = modulation_operator(len, m);
    for (Index n = 0; n < len; ++n) g.flat.col(m * len + n) = mod * (translation_operator(len, n) * spec.window);
  }
  g.family = WeightedFamily<cdouble>(len);
  g.partition.resize(spec.q);
  for (Index j = 0; j < spec.q; ++j) {
    for (Index m = j; m < len; m += spec.q) {
      for (Index n = 0; n < len; ++n) g.partition[j].push_back(m * len + n);
    }
    Matrix<cdouble> cols(len, static_cast<Index>(g.partition[j].size()));
    for (Index k = 0; k < cols.cols(); ++k) cols.col(k) = g.flat.col(g.partition[j][k]);
    g.family.add(Subspace<cdouble>::from_spanning(cols, tol.rank), 1.0);
  }
  return g;
}

GaborHarmonicReport harmonic_gabor_check(const GaborSpec& spec, const Tolerances& tol) {
  const GaborFamily g = gabor_family(spec, tol);
  const Index q = spec.q;
  const Matrix<cdouble> m1 = modulation_operator(spec.length, 1);
  GaborHarmonicReport r;
  for (Index j = 0; j < q; ++j) {
    const double d = distance(image(m1, g.family[j].subspace), g.family[(j + 1) % q].subspace);
    r.step_distances.push_back(d);
    r.max_distance = std::max(r.max_distance, d);
  }
  r.steps_hold = r.max_distance <= kWrapTol;

  r.equivalences_hold = true;
  const std::vector<std::size_t> first{0};
  const WeightedFamily<cdouble> w0 = g.family.subfamily(first);
  Matrix<cdouble> power = Matrix<cdouble>::Identity(spec.length, spec.length);
  for (Index j = 0; j < q; ++j) {
    const std::vector<std::size_t> at{static_cast<std::size_t>(j)};
    if (!verify_equivalence(power, g.family.subfamily(at), w0, true, tol)) r.equivalences_hold = false;
    power = m1 * power;
  }
  r.pass = r.steps_hold && r.equivalences_hold;
  return r;
}

#define FUSION_INSTANTIATE_HARMONIC(S)                                                       \
  template WeightedFamily<S> orbit_family<S>(const HarmonicSpec<S>&);                        \
  template WraparoundReport check_wraparound<S>(const HarmonicSpec<S>&, const Tolerances&); \
  template HarmonicSpec<S> block_shift_spec<S>(Index, Index, Index, Rng&, bool);

FUSION_INSTANTIATE_HARMONIC(double)
FUSION_INSTANTIATE_HARMONIC(cdouble)

}  // namespace fusion
