#include "fusion/assembly.hpp"

#include "fusion/numkernel.hpp"
#include "fusion/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace fusion {

namespace {

bool claim_matches(double claimed, double computed) {
  return std::abs(claimed - computed) <= 1e-6 * std::max(std::abs(claimed), std::abs(computed));
}

/// Every nonempty subset of {0..n-1}, encoded as bit masks.
std::vector<std::vector<std::size_t>> subsets_from_masks(std::size_t n, const std::vector<std::uint64_t>& masks) {
  std::vector<std::vector<std::size_t>> out;
  out.reserve(masks.size());
  for (std::uint64_t m : masks) {
    std::vector<std::size_t> s;
    for (std::size_t k = 0; k < n; ++k) {
      if (m & (std::uint64_t{1} << k)) s.push_back(k);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::size_t> random_nonempty_subset(std::size_t n, Rng& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<std::size_t> s;
  while (s.empty()) {
    for (std::size_t k = 0; k < n; ++k) {
      if (coin(rng)) s.push_back(k);
    }
  }
  return s;
}

template <FieldScalar S>
Matrix<S> select_columns(const Matrix<S>& m, const std::vector<std::size_t>& cols) {
  Matrix<S> out(m.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = m.col(static_cast<Index>(cols[k]));
  return out;
}

/// Extreme span bounds over all (or sampled) nonempty subsets of columns.
template <FieldScalar S>
std::pair<double, double> riesz_vector_bounds(const Matrix<S>& vectors, Rng& rng, const Tolerances& tol) {
  const auto n = static_cast<std::size_t>(vectors.cols());
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  auto visit = [&](const std::vector<std::size_t>& cols) {
    const FrameBounds b = span_frame_bounds(select_columns(vectors, cols), tol);
    if (!b.is_frame) return;
    lo = std::min(lo, b.lower);
    hi = std::max(hi, b.upper);
  };
  if (n <= 12) {
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) visit(subsets_from_masks(n, {m}).front());
  } else {
    for (int k = 0; k < 400; ++k) visit(random_nonempty_subset(n, rng));
  }
  return {lo, hi};
}

}  // namespace

template <FieldScalar S>
LocalSummary<S> summarize_local(const LocalFrame<S>& local, const Tolerances& tol) {
  if (!local.vectors.allFinite()) throw InvalidInput("local frame: non-finite entries");
  LocalSummary<S> out;
  out.span = Subspace<S>::from_spanning(local.vectors, tol.rank);
  if (out.span.dim() == 0) throw InvalidInput("local frame: vectors span the zero subspace");
  if (local.subspace_hint) {
    if (local.subspace_hint->ambient_dim() != out.span.ambient_dim() ||
        distance(*local.subspace_hint, out.span) > tol.subspace) {
      throw InvalidInput("local frame: vectors do not span the claimed subspace (rank-deficient)");
    }
  }
  const FrameBounds b = span_frame_bounds(local.vectors, tol);
  out.lower = b.lower;
  out.upper = b.upper;
  if (local.lower_claim && !claim_matches(*local.lower_claim, out.lower)) {
    throw InvalidInput("local frame: claimed lower bound " + std::to_string(*local.lower_claim) +
                       " disagrees with computed " + std::to_string(out.lower));
  }
  if (local.upper_claim && !claim_matches(*local.upper_claim, out.upper)) {
    throw InvalidInput("local frame: claimed upper bound " + std::to_string(*local.upper_claim) +
                       " disagrees with computed " + std::to_string(out.upper));
  }
  return out;
}

template <FieldScalar S>
GlobalAssembly<S> assemble_global(const std::vector<WeightedLocal<S>>& locals, const Tolerances& tol) {
  if (locals.empty()) throw InvalidInput("assemble_global: no local frames");
  const Index n = locals.front().local.vectors.rows();
  Index flat_cols = 0;
  for (const auto& wl : locals) {
    if (wl.local.vectors.rows() != n) throw InvalidInput("assemble_global: local frames differ in ambient dimension");
    flat_cols += wl.local.vectors.cols();
  }

  GlobalAssembly<S> out{Matrix<S>(n, flat_cols), Matrix<S>(), WeightedFamily<S>(n), {}, {}};
  Index at = 0;
  for (const auto& wl : locals) {
    out.locals.push_back(summarize_local(wl.local, tol));
    out.family.add(out.locals.back().span, wl.weight);
    const Index k = wl.local.vectors.cols();
    out.flat.middleCols(at, k) = S(wl.weight) * wl.local.vectors;
    at += k;
  }
  out.pooled_onb = out.family.stacked_basis(true);

  TransferReport& r = out.report;
  r.A = std::numeric_limits<double>::infinity();
  for (const auto& s : out.locals) {
    r.A = std::min(r.A, s.lower);
    r.B = std::max(r.B, s.upper);
  }
  const BoundsReport fb = frame_bounds(out.family, tol);
  r.C = fb.lower;
  r.D = fb.upper;
  r.family_is_frame = fb.is_frame;
  r.family_is_parseval = fb.is_parseval;

  const FrameBounds g = vector_frame_bounds(out.flat, tol);
  r.C_g = g.lower;
  r.D_g = g.upper;
  r.flat_is_frame = g.is_frame;
  r.flat_is_parseval = g.is_frame && std::max(std::abs(g.lower - 1.0), std::abs(g.upper - 1.0)) <= tol.check;

  const FrameBounds e = vector_frame_bounds(out.pooled_onb, tol);
  r.C_e = e.lower;
  r.D_e = e.upper;
  r.pooled_onb_is_frame = e.is_frame;
  r.pooled_onb_is_parseval = e.is_frame && std::max(std::abs(e.lower - 1.0), std::abs(e.upper - 1.0)) <= tol.check;

  r.predicates_agree = r.flat_is_frame == r.pooled_onb_is_frame && r.pooled_onb_is_frame == r.family_is_frame;
  r.inequalities = {
      check_le("A*C <= C_g", r.A * r.C, r.C_g, tol.slack),
      check_le("D_g <= B*D", r.D_g, r.B * r.D, tol.slack),
      check_le("C_g/B <= C", r.C_g / r.B, r.C, tol.slack),
      check_le("D <= D_g/A", r.D, r.D_g / r.A, tol.slack),
  };
  return out;
}

void validate_partition(const std::vector<std::vector<Index>>& partition, Index count) {
  std::vector<int> seen(static_cast<std::size_t>(std::max<Index>(count, 0)), 0);
  for (std::size_t c = 0; c < partition.size(); ++c) {
    if (partition[c].empty()) throw InvalidInput("partition: cell " + std::to_string(c) + " is empty");
    for (Index j : partition[c]) {
      if (j < 0 || j >= count) throw InvalidInput("partition: index " + std::to_string(j) + " out of range");
      if (seen[static_cast<std::size_t>(j)]++) {
        throw InvalidInput("partition: index " + std::to_string(j) + " appears in more than one cell");
      }
    }
  }
  for (Index j = 0; j < count; ++j) {
    if (!seen[static_cast<std::size_t>(j)]) throw InvalidInput("partition: index " + std::to_string(j) + " is not covered");
  }
}

namespace {

template <FieldScalar S>
Matrix<S> cell_vectors(const Matrix<S>& vectors, const std::vector<Index>& cell) {
  Matrix<S> out(vectors.rows(), static_cast<Index>(cell.size()));
  for (std::size_t k = 0; k < cell.size(); ++k) out.col(static_cast<Index>(k)) = vectors.col(cell[k]);
  return out;
}

}  // namespace

template <FieldScalar S>
WeightedFamily<S> from_partition(const Matrix<S>& vectors, const std::vector<std::vector<Index>>& partition,
                                 const std::vector<double>& weights, const Tolerances& tol) {
  validate_partition(partition, vectors.cols());
  if (weights.size() != partition.size()) throw InvalidInput("from_partition: one weight per cell required");
  if (!vector_frame_bounds(vectors, tol).is_frame) {
    throw InvalidInput("from_partition: the input vectors are not a frame for the ambient space");
  }
  WeightedFamily<S> fam(vectors.rows());
  for (std::size_t c = 0; c < partition.size(); ++c) {
    fam.add(Subspace<S>::from_spanning(cell_vectors(vectors, partition[c]), tol.rank), weights[c]);
  }
  return fam;
}

template <FieldScalar S>
PartitionCertificate partition_certificate(const Matrix<S>& vectors, const std::vector<std::vector<Index>>& partition,
                                     const Tolerances& tol) {
  validate_partition(partition, vectors.cols());
  PartitionCertificate out;
  const FrameBounds fb = vector_frame_bounds(vectors, tol);
  out.A = fb.lower;
  out.B = fb.upper;
  out.cells = partition.size();
  WeightedFamily<S> fam(vectors.rows());
  for (const auto& cell : partition) fam.add(Subspace<S>::from_spanning(cell_vectors(vectors, cell), tol.rank), 1.0);
  const auto [lo, hi] = herm_extremes(frame_operator(fam));
  out.lambda_min = lo;
  out.lambda_max = hi;
  const double ratio = out.B > 0.0 ? out.A / out.B : 0.0;
  out.inequalities = {
      check_le("A/B <= lambda_min(sum P_i)", ratio, lo, tol.check),
      check_le("lambda_max(sum P_i) <= |I|", hi, static_cast<double>(out.cells), tol.check),
  };
  out.pass = all_pass(out.inequalities);
  return out;
}

template <FieldScalar S>
Enrichment<S> enrich(const WeightedFamily<S>& fam, const Matrix<S>& vectors, const Tolerances& tol) {
  if (vectors.rows() != fam.ambient_dim()) throw InvalidInput("enrich: vectors do not match the ambient dimension");
  const BoundsReport fb = frame_bounds(fam, tol);
  if (!fb.is_frame) throw InvalidInput("enrich: the family is not a frame of subspaces");
  const FrameBounds vb = vector_frame_bounds(vectors, tol);
  if (!vb.is_frame) throw InvalidInput("enrich: the vectors are not a frame");

  Enrichment<S> out;
  const Matrix<S> transformed = herm_inverse(frame_operator(fam), tol.frame) * vectors;
  out.predicted_lower = vb.lower / (fb.upper * fb.upper);
  out.predicted_upper = vb.upper / (fb.lower * fb.lower);
  out.min_lower = std::numeric_limits<double>::infinity();
  out.max_upper = 0.0;

  out.flat = Matrix<S>(fam.ambient_dim(), vectors.cols() * static_cast<Index>(fam.size()));
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const Subspace<S>& w = fam[i].subspace;
    Matrix<S> local = w.projector() * transformed;
    out.flat.middleCols(static_cast<Index>(i) * vectors.cols(), vectors.cols()) = local;
    FrameBounds lb;
    if (w.dim() > 0) {
      // Frame operator of the local family expressed in the coordinates of W_i.
      const Matrix<S> coords = w.basis().adjoint() * local;
      const auto [lo, hi] = herm_extremes<S>(coords * coords.adjoint());
      lb = {std::max(0.0, lo), hi, hi > 0.0 && lo > tol.frame * hi};
      out.min_lower = std::min(out.min_lower, lb.lower);
      out.max_upper = std::max(out.max_upper, lb.upper);
    }
    out.local_frames.push_back(std::move(local));
    out.local_bounds.push_back(lb);
  }
  out.flat_bounds = vector_frame_bounds(out.flat, tol);
  const double scale = std::max(1.0, out.predicted_upper);
  out.inequalities = {
      check_le("A/D^2 <= min local lower", out.predicted_lower, out.min_lower, tol.slack * scale),
      check_le("max local upper <= B/C^2", out.max_upper, out.predicted_upper, tol.slack * scale),
  };
  return out;
}

template <FieldScalar S>
FrameBounds subfamily_span_bounds(const WeightedFamily<S>& fam, const std::vector<std::size_t>& subset,
                                  const Tolerances& tol) {
  const WeightedFamily<S> sub = fam.subfamily(subset);
  const Subspace<S> span = Subspace<S>::from_spanning(sub.stacked_basis(), tol.rank);
  if (span.dim() == 0) return {};
  const Matrix<S>& q = span.basis();
  const Matrix<S> restricted = q.adjoint() * frame_operator(sub) * q;
  const auto [lo, hi] = herm_extremes(restricted);
  return {std::max(0.0, lo), hi, hi > 0.0 && lo > tol.frame * hi};
}

template <FieldScalar S>
RieszCertificate riesz_family_certificate(const WeightedFamily<S>& fam, SubsetMode mode, double lower_required,
                                          double upper_required, std::uint64_t seed, std::size_t samples,
                                          const Tolerances& tol) {
  const std::size_t m = fam.size();
  if (m == 0) throw InvalidInput("riesz_family_certificate: empty family");
  if (mode == SubsetMode::Exhaustive && m > 16) {
    throw InvalidInput("riesz_family_certificate: exhaustive mode supports at most 16 subspaces");
  }
  RieszCertificate out;
  out.mode = mode;
  out.seed = seed;
  out.lower_required = lower_required;
  out.upper_required = upper_required;
  out.min_lower = std::numeric_limits<double>::infinity();

  auto visit = [&](const std::vector<std::size_t>& subset) {
    const FrameBounds b = subfamily_span_bounds(fam, subset, tol);
    ++out.subsets_checked;
    if (b.upper == 0.0) return;  // spans {0}
    if (b.lower < out.min_lower) {
      out.min_lower = b.lower;
      out.worst_subset = subset;
    }
    out.max_upper = std::max(out.max_upper, b.upper);
  };

  if (mode == SubsetMode::Exhaustive) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) visit(subsets_from_masks(m, {mask}).front());
  } else {
    Rng rng(seed);
    const std::size_t count = std::max<std::size_t>(samples, 200);
    for (std::size_t k = 0; k < count; ++k) visit(random_nonempty_subset(m, rng));
  }
  if (!std::isfinite(out.min_lower)) out.min_lower = 0.0;
  out.pass = out.min_lower >= lower_required - tol.slack && out.max_upper <= upper_required + tol.slack &&
             out.min_lower > 0.0;
  return out;
}

template <FieldScalar S>
RieszAssemblyReport riesz_assembly_certificate(const std::vector<WeightedLocal<S>>& locals, std::size_t samples,
                                               std::uint64_t seed, const Tolerances& tol) {
  const GlobalAssembly<S> g = assemble_global(locals, tol);
  RieszAssemblyReport out;
  out.seed = seed;
  Rng rng(seed);

  const SubsetMode mode = g.family.size() <= 16 ? SubsetMode::Exhaustive : SubsetMode::Sampled;
  const RieszCertificate fam_cert = riesz_family_certificate(g.family, mode, 0.0, 0.0, seed, 200, tol);
  out.C = fam_cert.min_lower;
  out.D = fam_cert.max_upper;
  out.A = std::numeric_limits<double>::infinity();
  for (const auto& wl : locals) {
    const auto [lo, hi] = riesz_vector_bounds(wl.local.vectors, rng, tol);
    out.A = std::min(out.A, lo);
    out.B = std::max(out.B, hi);
  }

  out.min_lower = std::numeric_limits<double>::infinity();
  out.samples = std::max<std::size_t>(samples, 1);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t s = 0; s < out.samples; ++s) {
    std::vector<Index> cols;
    Index offset = 0;
    while (cols.empty()) {
      offset = 0;
      for (const auto& wl : locals) {
        for (Index j = 0; j < wl.local.vectors.cols(); ++j) {
          if (coin(rng)) cols.push_back(offset + j);
        }
        offset += wl.local.vectors.cols();
      }
    }
    const FrameBounds b = span_frame_bounds(cell_vectors(g.flat, cols), tol);
    if (!b.is_frame) continue;
    out.min_lower = std::min(out.min_lower, b.lower);
    out.max_upper = std::max(out.max_upper, b.upper);
  }
  if (!std::isfinite(out.min_lower)) out.min_lower = 0.0;
  const double scale = std::max(1.0, out.B * out.D);
  out.inequalities = {
      check_le("C*A <= min sampled lower", out.C * out.A, out.min_lower, tol.slack * scale),
      check_le("max sampled upper <= B*D", out.max_upper, out.B * out.D, tol.slack * scale),
  };
  return out;
}

#define FUSION_INSTANTIATE_ASSEMBLY(S)                                                                          \
  template LocalSummary<S> summarize_local<S>(const LocalFrame<S>&, const Tolerances&);                         \
  template GlobalAssembly<S> assemble_global<S>(const std::vector<WeightedLocal<S>>&, const Tolerances&);       \
  template WeightedFamily<S> from_partition<S>(const Matrix<S>&, const std::vector<std::vector<Index>>&,        \
                                               const std::vector<double>&, const Tolerances&);                  \
  template PartitionCertificate partition_certificate<S>(const Matrix<S>&, const std::vector<std::vector<Index>>&,    \
                                                   const Tolerances&);                                          \
  template Enrichment<S> enrich<S>(const WeightedFamily<S>&, const Matrix<S>&, const Tolerances&);              \
  template FrameBounds subfamily_span_bounds<S>(const WeightedFamily<S>&, const std::vector<std::size_t>&,      \
                                                const Tolerances&);                                             \
  template RieszCertificate riesz_family_certificate<S>(const WeightedFamily<S>&, SubsetMode, double, double,   \
                                                        std::uint64_t, std::size_t, const Tolerances&);         \
  template RieszAssemblyReport riesz_assembly_certificate<S>(const std::vector<WeightedLocal<S>>&, std::size_t, \
                                                             std::uint64_t, const Tolerances&);

FUSION_INSTANTIATE_ASSEMBLY(double)
FUSION_INSTANTIATE_ASSEMBLY(cdouble)

}  // namespace fusion
