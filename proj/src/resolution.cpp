#include "fusion/resolution.hpp"

#include "fusion/numkernel.hpp"
#include "fusion/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fusion {

namespace {

template <FieldScalar S>
Matrix<S> weighted_sum(const OperatorFamily<S>& of, double power) {
  const Index n = of.ambient_dim();
  Matrix<S> sum = Matrix<S>::Zero(n, n);
  for (std::size_t i = 0; i < of.size(); ++i) sum += std::pow(of.weights[i], power) * of.ops[i];
  return sum;
}

template <FieldScalar S>
Matrix<S> hermitian_part(const Matrix<S>& a) {
  return (a + a.adjoint()) / 2.0;
}

// Largest ||(I - P_i) T_i|| over the family members.
template <FieldScalar S>
double range_defect(const WeightedFamily<S>& fam, const OperatorFamily<S>& of) {
  double worst = 0.0;
  const Index n = fam.ambient_dim();
  for (std::size_t i = 0; i < of.size(); ++i) {
    const Matrix<S> rest = (Matrix<S>::Identity(n, n) - fam[i].subspace.projector()) * of.ops[i];
    worst = std::max(worst, op_norm(rest));
  }
  return worst;
}

template <FieldScalar S>
void require_matching(const WeightedFamily<S>& fam, const OperatorFamily<S>& of, const char* where) {
  if (of.size() != fam.size() || of.ambient_dim() != fam.ambient_dim()) {
    throw InvalidInput(std::string(where) + ": operator family does not match the family of subspaces");
  }
}

}  // namespace

template <FieldScalar S>
void validate(const OperatorFamily<S>& of, const Tolerances& tol) {
  if (of.weights.size() != of.ops.size()) throw InvalidInput("operator family: one weight per operator required");
  if (!of.range_hints.empty() && of.range_hints.size() != of.ops.size()) {
    throw InvalidInput("operator family: range_hints must be empty or one per operator");
  }
  const Index n = of.ambient_dim();
  for (std::size_t i = 0; i < of.size(); ++i) {
    const Matrix<S>& t = of.ops[i];
    if (t.rows() != n || t.cols() != n) throw InvalidInput("operator family: ops[" + std::to_string(i) + "] has the wrong shape");
    if (!all_finite(t)) throw InvalidInput("operator family: ops[" + std::to_string(i) + "] is not finite");
    const double v = of.weights[i];
    if (!std::isfinite(v) || v <= 0.0) throw InvalidInput("operator family: weights[" + std::to_string(i) + "] must be > 0");
    if (!of.range_hints.empty() && of.range_hints[i]) {
      const Subspace<S>& w = *of.range_hints[i];
      if (w.ambient_dim() != n) throw InvalidInput("operator family: range_hints[" + std::to_string(i) + "] has the wrong ambient dimension");
      const Matrix<S> rest = t - w.projector() * t;
      if (op_norm(rest) > tol.subspace * std::max(1.0, op_norm(t))) {
        throw InvalidInput("operator family: ops[" + std::to_string(i) + "] leaves its range hint");
      }
    }
  }
}

template <FieldScalar S>
double resolution_defect(const OperatorFamily<S>& of, bool scaled) {
  const Index n = of.ambient_dim();
  return op_norm<S>(weighted_sum(of, scaled ? 2.0 : 0.0) - Matrix<S>::Identity(n, n));
}

template <FieldScalar S>
bool is_resolution(const OperatorFamily<S>& of, bool scaled, double tol) {
  if (of.size() == 0) return false;
  return resolution_defect(of, scaled) <= tol;
}

template <FieldScalar S>
Matrix<S> quadratic_form(const OperatorFamily<S>& of, double power) {
  const Index n = of.ambient_dim();
  Matrix<S> q = Matrix<S>::Zero(n, n);
  for (std::size_t i = 0; i < of.size(); ++i) q += std::pow(of.weights[i], power) * (of.ops[i].adjoint() * of.ops[i]);
  return hermitian_part(q);
}

template <FieldScalar S>
ResolutionResult<S> resolution_from_frame_operator(const WeightedFamily<S>& fam, const Tolerances& tol) {
  const BoundsReport b = frame_bounds(fam, tol);
  if (!b.is_frame) throw SingularOperator("resolution_from_frame_operator: the family is not a frame");
  const Matrix<S> s_inv = herm_inverse(frame_operator(fam), tol.frame);

  ResolutionResult<S> r;
  r.scaled = true;
  for (const auto& it : fam) {
    r.family.ops.push_back(it.subspace.projector() * s_inv);
    r.family.weights.push_back(it.weight);
    r.family.range_hints.emplace_back(it.subspace);
  }
  std::tie(r.lambda_min, r.lambda_max) = herm_extremes<S>(quadratic_form(r.family, 2.0));
  const double c = b.lower, d = b.upper;
  r.certificate.push_back(check_le("C/D^2 <= lambda_min", c / (d * d), r.lambda_min, tol.slack));
  r.certificate.push_back(check_le("lambda_max <= D/C^2", r.lambda_max, d / (c * c), tol.slack));
  r.certificate.push_back(check_le("||sum v_i^2 T_i - I||", resolution_defect(r.family, true), 0.0, tol.check));
  return r;
}

template <FieldScalar S>
ResolutionResult<S> resolution_from_dual_frame(const WeightedFamily<S>& fam, const std::vector<LocalFrame<S>>& locals,
                                               const Tolerances& tol) {
  if (locals.size() != fam.size()) throw InvalidInput("resolution_from_dual_frame: one local frame per subspace required");
  const Index n = fam.ambient_dim();
  double a = std::numeric_limits<double>::infinity(), bb = 0.0, v4min = std::numeric_limits<double>::infinity();
  Index cols = 0;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    if (locals[i].vectors.rows() != n) throw InvalidInput("resolution_from_dual_frame: local frame " + std::to_string(i) + " has the wrong ambient dimension");
    const LocalSummary<S> s = summarize_local(locals[i], tol);
    if (distance(s.span, fam[i].subspace) > tol.subspace) {
      throw InvalidInput("resolution_from_dual_frame: local frame " + std::to_string(i) + " does not span its subspace");
    }
    a = std::min(a, s.lower);
    bb = std::max(bb, s.upper);
    v4min = std::min(v4min, std::pow(fam[i].weight, 4));
    cols += locals[i].vectors.cols();
  }

  Matrix<S> flat(n, cols);
  Index at = 0;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    flat.middleCols(at, locals[i].vectors.cols()) = fam[i].weight * locals[i].vectors;
    at += locals[i].vectors.cols();
  }
  const Matrix<S> s_vf = hermitian_part<S>(flat * flat.adjoint());
  const Matrix<S> s_inv = herm_inverse(s_vf, tol.frame);

  const BoundsReport b = frame_bounds(fam, tol);
  if (!b.is_frame) throw SingularOperator("resolution_from_dual_frame: the family is not a frame");

  ResolutionResult<S> r;
  r.scaled = false;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const double v2 = fam[i].weight * fam[i].weight;
    const Matrix<S>& f = locals[i].vectors;
    r.family.ops.push_back(v2 * (f * (f.adjoint() * s_inv)));
    r.family.weights.push_back(fam[i].weight);
    r.family.range_hints.emplace_back(fam[i].subspace);
  }
  std::tie(r.lambda_min, r.lambda_max) = herm_extremes<S>(quadratic_form(r.family, 2.0));
  const double c = b.lower, d = b.upper;
  r.certificate.push_back(check_le("A C/(B^2 D^2) <= lambda_min", a * c / (bb * bb * d * d), r.lambda_min, tol.slack, false));
  r.certificate.push_back(
      check_le("min v^4 A^2 C/(B^2 D^2) <= lambda_min", v4min * a * a * c / (bb * bb * d * d), r.lambda_min, tol.slack));
  r.certificate.push_back(
      check_le("lambda_max <= B^2 D^3/(A^2 C^2)", r.lambda_max, bb * bb * d * d * d / (a * a * c * c), tol.slack));
  r.certificate.push_back(check_le("||sum T_i - I||", resolution_defect(r.family, false), 0.0, tol.check));
  return r;
}

std::vector<std::vector<std::size_t>> all_nonempty_subsets(std::size_t n) {
  if (n > 20) throw InvalidInput("all_nonempty_subsets: at most 20 indices");
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) s.push_back(i);
    }
    out.push_back(std::move(s));
  }
  return out;
}

template <FieldScalar S>
SubsetLowerReport subset_lower_certificate(const WeightedFamily<S>& fam, const OperatorFamily<S>& of,
                                           const std::vector<std::vector<std::size_t>>& subsets, std::size_t probes,
                                           std::uint64_t seed, const Tolerances& tol) {
  require_matching(fam, of, "subset_lower_certificate");
  validate(of, tol);
  const Index n = fam.ambient_dim();
  SubsetLowerReport rep;
  rep.D = frame_bounds(fam, tol).upper;
  if (rep.D <= 0.0) throw SingularOperator("subset_lower_certificate: the family has no positive upper bound");
  rep.seed = seed;
  rep.probes = std::max<std::size_t>(probes, 100);
  rep.worst_slack = std::numeric_limits<double>::infinity();

  Rng rng(seed);
  std::vector<Vector<S>> fs;
  fs.reserve(rep.probes);
  for (std::size_t k = 0; k < rep.probes; ++k) fs.push_back(random_unit_vector<S>(n, rng));

  for (const auto& subset : subsets) {
    if (subset.empty()) throw InvalidInput("subset_lower_certificate: empty subset");
    Matrix<S> m = Matrix<S>::Zero(n, n);
    Matrix<S> q = Matrix<S>::Zero(n, n);
    for (std::size_t j : subset) {
      if (j >= of.size()) throw InvalidInput("subset_lower_certificate: index out of range");
      const double v2 = of.weights[j] * of.weights[j];
      m += v2 * of.ops[j];
      q += v2 * (of.ops[j].adjoint() * of.ops[j]);
    }
    SubsetLowerEntry e;
    e.subset = subset;
    e.eigen_slack = herm_extremes<S>(hermitian_part<S>(q - (m.adjoint() * m) / rep.D)).first;
    e.probe_worst_slack = std::numeric_limits<double>::infinity();
    for (const auto& f : fs) {
      double rhs = 0.0;
      for (std::size_t j : subset) rhs += of.weights[j] * of.weights[j] * (of.ops[j] * f).squaredNorm();
      e.probe_worst_slack = std::min(e.probe_worst_slack, rhs - (m * f).squaredNorm() / rep.D);
    }
    e.pass = e.probe_worst_slack >= -tol.slack && e.eigen_slack >= -tol.slack;
    rep.worst_slack = std::min({rep.worst_slack, e.probe_worst_slack, e.eigen_slack});
    rep.entries.push_back(std::move(e));
  }
  rep.pass = std::all_of(rep.entries.begin(), rep.entries.end(), [](const SubsetLowerEntry& e) { return e.pass; });
  return rep;
}

template <FieldScalar S>
SandwichReport quadratic_form_sandwich(const WeightedFamily<S>& fam, const OperatorFamily<S>& of, const Tolerances& tol) {
  require_matching(fam, of, "quadratic_form_sandwich");
  SandwichReport r;
  const BoundsReport b = frame_bounds(fam, tol);
  r.D = b.upper;
  for (const auto& t : of.ops) r.E = std::max(r.E, op_norm(t));
  std::tie(r.lambda_min, r.lambda_max) = herm_extremes<S>(quadratic_form(of, 2.0));

  double absorb = 0.0;
  for (std::size_t i = 0; i < of.size(); ++i) {
    absorb = std::max(absorb, op_norm<S>(of.ops[i] * fam[i].subspace.projector() - of.ops[i]));
  }
  if (!b.is_frame) {
    r.reason = "family is not a frame";
  } else if (absorb > tol.slack) {
    r.reason = "T_i P_i != T_i";
  } else if (range_defect(fam, of) > tol.slack) {
    r.reason = "range(T_i) not contained in W_i";
  } else if (!is_resolution(of, true, tol.check)) {
    r.reason = "sum v_i^2 T_i != I";
  } else {
    r.applicable = true;
  }
  if (!r.applicable) return r;

  const Inequality lo = check_le("1/D <= lambda_min", 1.0 / r.D, r.lambda_min, tol.slack);
  const Inequality de = check_le("lambda_max <= D E", r.lambda_max, r.D * r.E, tol.slack, r.E <= 1.0);
  const Inequality de2 = check_le("lambda_max <= D E^2", r.lambda_max, r.D * r.E * r.E, tol.slack);
  r.lower_holds = lo.pass;
  r.upper_DE_holds = de.pass;
  r.upper_DE2_holds = de2.pass;
  r.inequalities = {lo, de, de2};
  return r;
}

template <FieldScalar S>
L2Report l2_resolution_certificate(const OperatorFamily<S>& of, double bound_required, const WeightedFamily<S>* fam,
                                   const Tolerances& tol) {
  validate(of, tol);
  L2Report r;
  r.bound_required = bound_required;
  r.resolves = is_resolution(of, false, tol.check);
  std::tie(r.lambda_min, r.lambda_max) = herm_extremes<S>(quadratic_form(of, -2.0));
  r.inequalities.push_back(check_le("lambda_max(sum v^-2 T^H T) <= B", r.lambda_max, bound_required, tol.slack));
  r.pass = r.resolves && r.inequalities.front().pass;
  if (fam && r.pass) {
    require_matching(*fam, of, "l2_resolution_certificate");
    const BoundsReport b = frame_bounds(*fam, tol);
    if (b.is_frame) {
      // The lower bound needs every T_i to map into W_i.
      const bool ranges = range_defect(*fam, of) <= tol.slack;
      r.inequalities.push_back(check_le("1/D <= lambda_min(sum v^-2 T^H T)", 1.0 / b.upper, r.lambda_min, tol.slack, ranges));
    }
  }
  return r;
}

#define FUSION_INSTANTIATE_RESOLUTION(S)                                                                               \
  template void validate<S>(const OperatorFamily<S>&, const Tolerances&);                                              \
  template double resolution_defect<S>(const OperatorFamily<S>&, bool);                                                \
  template bool is_resolution<S>(const OperatorFamily<S>&, bool, double);                                              \
  template Matrix<S> quadratic_form<S>(const OperatorFamily<S>&, double);                                              \
  template ResolutionResult<S> resolution_from_frame_operator<S>(const WeightedFamily<S>&, const Tolerances&);         \
  template ResolutionResult<S> resolution_from_dual_frame<S>(const WeightedFamily<S>&,                                 \
                                                             const std::vector<LocalFrame<S>>&, const Tolerances&);    \
  template SubsetLowerReport subset_lower_certificate<S>(const WeightedFamily<S>&, const OperatorFamily<S>&,           \
                                                         const std::vector<std::vector<std::size_t>>&, std::size_t,    \
                                                         std::uint64_t, const Tolerances&);                            \
  template SandwichReport quadratic_form_sandwich<S>(const WeightedFamily<S>&, const OperatorFamily<S>&, const Tolerances&);           \
  template L2Report l2_resolution_certificate<S>(const OperatorFamily<S>&, double, const WeightedFamily<S>*,           \
                                                 const Tolerances&);

FUSION_INSTANTIATE_RESOLUTION(double)
FUSION_INSTANTIATE_RESOLUTION(cdouble)

}  // namespace fusion
