#include <doctest.h>

#include "fusion/numkernel.hpp"
#include "fusion/resolution.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace fusion;

namespace {

template <FieldScalar S>
OperatorFamily<S> projections(const WeightedFamily<S>& fam, double scale = 1.0) {
  OperatorFamily<S> of;
  for (const auto& it : fam) {
    of.ops.push_back(scale * it.subspace.projector());
    of.weights.push_back(it.weight);
    of.range_hints.emplace_back(it.subspace);
  }
  return of;
}

template <FieldScalar S>
std::vector<LocalFrame<S>> locals_of(const std::vector<WeightedLocal<S>>& wl) {
  std::vector<LocalFrame<S>> out;
  for (const auto& w : wl) out.push_back(w.local);
  return out;
}

}  // namespace

TEST_CASE("is_resolution on projections") {
  const WeightedFamily<double> onb = gen::coordinate_split<double>({2, 1, 2});
  CHECK(is_resolution(projections(onb), true));
  OperatorFamily<double> halves = projections(onb, 0.5);
  const OperatorFamily<double> copy = halves;
  halves.ops.insert(halves.ops.end(), copy.ops.begin(), copy.ops.end());
  halves.weights.insert(halves.weights.end(), copy.weights.begin(), copy.weights.end());
  halves.range_hints.clear();
  CHECK(is_resolution(halves, false));
  CHECK_FALSE(is_resolution(OperatorFamily<double>{}, false));
}

TEST_CASE_TEMPLATE("unscaled v^2 P_i S^{-1} resolves the identity", S, double, cdouble) {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const WeightedFamily<S> fam = gen::random_frame<S>(2 + trial % 6, rng);
    const Matrix<S> s_inv = herm_inverse(frame_operator(fam));
    OperatorFamily<S> of;
    for (const auto& it : fam) {
      of.ops.push_back(it.weight * it.weight * it.subspace.projector() * s_inv);
      of.weights.push_back(it.weight);
    }
    CHECK(resolution_defect(of, false) <= 1e-10);
  }
}

TEST_CASE("frame-operator construction on two weighted axes") {
  WeightedFamily<double> fam(2);
  fam.add(Subspace<double>::coordinate(2, {0}), 2.0);
  fam.add(Subspace<double>::coordinate(2, {1}), 1.0);
  const ResolutionResult<double> r = resolution_from_frame_operator(fam);
  CHECK(r.family.ops[0](0, 0) == doctest::Approx(0.25));
  CHECK(r.family.ops[0](1, 1) == doctest::Approx(0.0));
  CHECK(r.family.ops[1](1, 1) == doctest::Approx(1.0));
  CHECK(is_resolution(r.family, true));
  CHECK(all_pass(r.certificate));
}

TEST_CASE("frame-operator construction on the truncated example family") {
  const WeightedFamily<double> fam = gen::truncated_exact();
  const ResolutionResult<double> r = resolution_from_frame_operator(fam);
  CHECK(r.certificate[0].lhs == doctest::Approx(0.25));
  CHECK(r.certificate[1].rhs == doctest::Approx(2.0));
  CHECK(all_pass(r.certificate));
  // Oracle: the form is diag(1,1,1/2,1,1), since e_0 sees P_1 S^{-1} and P_2 S^{-1} at 1/2 each.
  const auto [lo, hi] = oracle::extremes<double>(quadratic_form(r.family, 2.0));
  CHECK(lo == doctest::Approx(0.5));
  CHECK(hi == doctest::Approx(1.0));
  CHECK(r.lambda_min == doctest::Approx(lo));

  const SubsetLowerReport s = subset_lower_certificate(fam, r.family, all_nonempty_subsets(2), 100, 5);
  CHECK(s.entries.size() == 3);
  CHECK(s.pass);
  CHECK(s.worst_slack >= -1e-8);
}

TEST_CASE_TEMPLATE("frame-operator construction on random frames", S, double, cdouble) {
  Rng rng(19);
  for (int trial = 0; trial < 25; ++trial) {
    const WeightedFamily<S> fam = gen::random_frame<S>(2 + trial % 6, rng);
    const BoundsReport b = frame_bounds(fam);
    const ResolutionResult<S> r = resolution_from_frame_operator(fam);
    CHECK(is_resolution(r.family, true, 1e-9));
    CHECK(r.lambda_min >= b.lower / (b.upper * b.upper) - 1e-8);
    CHECK(r.lambda_max <= b.upper / (b.lower * b.lower) + 1e-8);
    CHECK(all_pass(r.certificate));
  }
  WeightedFamily<S> line(2);
  line.add(Subspace<S>::coordinate(2, {0}), 1.0);
  CHECK_THROWS_AS(resolution_from_frame_operator(line), SingularOperator);
}

TEST_CASE("dual-frame construction: orthonormal locals") {
  const WeightedFamily<double> onb = gen::coordinate_split<double>({1, 2});
  std::vector<LocalFrame<double>> locals(2);
  locals[0].vectors = onb[0].subspace.basis();
  locals[1].vectors = onb[1].subspace.basis();
  const ResolutionResult<double> r = resolution_from_dual_frame(onb, locals);
  CHECK(is_resolution(r.family, false));
  for (std::size_t i = 0; i < 2; ++i) CHECK((r.family.ops[i] - onb[i].subspace.projector()).norm() < 1e-12);
  CHECK(all_pass(r.certificate));
}

TEST_CASE("dual-frame construction: doubled vector on one axis") {
  const WeightedFamily<double> fam = gen::coordinate_split<double>({1, 1});
  std::vector<LocalFrame<double>> locals(2);
  locals[0].vectors = Matrix<double>(2, 2);
  locals[0].vectors << 1, 1, 0, 0;
  locals[1].vectors = Matrix<double>(2, 1);
  locals[1].vectors << 0, 1;
  const ResolutionResult<double> r = resolution_from_dual_frame(fam, locals);
  // S_vf = diag(2, 1), so T_1 = 2 e1 e1^T / 2 = P_1.
  CHECK((r.family.ops[0] - fam[0].subspace.projector()).norm() < 1e-12);
  CHECK(resolution_defect(r.family, false) <= 1e-12);
}

TEST_CASE("dual-frame construction: the commonly stated lower constant can fail") {
  // W = K^2 with local frame (1/2) * identity: A = B = 1/4, C = D = 1. The
  // form equals the identity, while A C / (B^2 D^2) = 4.
  WeightedFamily<double> fam(2);
  fam.add(Subspace<double>::full(2), 1.0);
  std::vector<LocalFrame<double>> locals(1);
  locals[0].vectors = 0.5 * Matrix<double>::Identity(2, 2);
  const ResolutionResult<double> r = resolution_from_dual_frame(fam, locals);
  CHECK(r.lambda_min == doctest::Approx(1.0));
  CHECK(r.certificate[0].lhs == doctest::Approx(4.0));
  CHECK_FALSE(r.certificate[0].pass);
  CHECK_FALSE(r.certificate[0].proven);
  CHECK(r.certificate[1].pass);
  CHECK(all_pass(r.certificate));
}

TEST_CASE_TEMPLATE("dual-frame construction on random locals", S, double, cdouble) {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<WeightedLocal<S>> wl = gen::random_locals<S>(2 + trial % 5, rng);
    const GlobalAssembly<S> g = assemble_global(wl);
    const ResolutionResult<S> r = resolution_from_dual_frame(g.family, locals_of(wl));
    CHECK(is_resolution(r.family, false, 1e-9));
    CHECK(all_pass(r.certificate));
    OperatorFamily<S> scaled = r.family;
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled.ops[i] /= scaled.weights[i] * scaled.weights[i];
    const SubsetLowerReport s = subset_lower_certificate(g.family, scaled, all_nonempty_subsets(std::min<std::size_t>(g.family.size(), 6)), 100, 1);
    CHECK(s.pass);
  }
}

TEST_CASE("dual-frame construction rejects mismatched locals") {
  const WeightedFamily<double> fam = gen::coordinate_split<double>({1, 1});
  std::vector<LocalFrame<double>> locals(2);
  locals[0].vectors = Matrix<double>::Identity(2, 2).leftCols(1);
  locals[1].vectors = Matrix<double>::Identity(2, 2).leftCols(1);
  CHECK_THROWS_AS(resolution_from_dual_frame(fam, locals), InvalidInput);
  locals.pop_back();
  CHECK_THROWS_AS(resolution_from_dual_frame(fam, locals), InvalidInput);
}

TEST_CASE_TEMPLATE("subset lower bound: probes and eigen certificate", S, double, cdouble) {
  Rng rng(29);
  for (int trial = 0; trial < 15; ++trial) {
    const WeightedFamily<S> fam = gen::random_frame<S>(2 + trial % 5, rng);
    if (fam.size() > 6) continue;
    const ResolutionResult<S> r = resolution_from_frame_operator(fam);
    const SubsetLowerReport s = subset_lower_certificate(fam, r.family, all_nonempty_subsets(fam.size()), 100, trial);
    CHECK(s.pass);
    CHECK(s.probes == 100);
    for (const auto& e : s.entries) CHECK(e.probe_worst_slack >= e.eigen_slack - 1e-10);
  }
  const WeightedFamily<S> onb = gen::coordinate_split<S>({1, 2});
  const OperatorFamily<S> p = projections(onb);
  const SubsetLowerReport full = subset_lower_certificate(onb, p, {{0, 1}}, 100, 0);
  CHECK(full.entries[0].eigen_slack == doctest::Approx(0.0));
}

TEST_CASE("T P = T sandwich") {
  const WeightedFamily<double> onb = gen::coordinate_split<double>({1, 2});
  const SandwichReport t = quadratic_form_sandwich(onb, projections(onb));
  CHECK(t.applicable);
  CHECK(t.E == doctest::Approx(1.0));
  CHECK(t.lambda_min == doctest::Approx(1.0));
  CHECK(t.lambda_max == doctest::Approx(1.0));
  CHECK(t.upper_DE_holds);
  CHECK(t.upper_DE2_holds);

  const WeightedFamily<double> ex = gen::truncated_exact();
  const SandwichReport te = quadratic_form_sandwich(ex, resolution_from_frame_operator(ex).family);
  CHECK(te.applicable);
  CHECK(te.E == doctest::Approx(1.0));
  CHECK(te.lower_holds);
  CHECK(te.upper_DE2_holds);

  // W = K^2 with weight v < 1: S = v^2 I, T = I / v^2, E = 1/v^2 > 1 and the
  // D E form fails while D E^2 holds.
  WeightedFamily<double> small(2);
  small.add(Subspace<double>::full(2), 0.5);
  const SandwichReport ts = quadratic_form_sandwich(small, resolution_from_frame_operator(small).family);
  CHECK(ts.applicable);
  CHECK(ts.E == doctest::Approx(4.0));
  CHECK(ts.lambda_max == doctest::Approx(4.0));
  CHECK_FALSE(ts.upper_DE_holds);
  CHECK(ts.upper_DE2_holds);
  CHECK_FALSE(ts.inequalities[1].proven);

  // Off-axis operators violate T P = T and are reported, not thrown.
  OperatorFamily<double> bad = projections(onb);
  bad.ops[0] = Matrix<double>::Identity(3, 3);
  const SandwichReport tb = quadratic_form_sandwich(onb, bad);
  CHECK_FALSE(tb.applicable);
  CHECK_FALSE(tb.reason.empty());
}

TEST_CASE_TEMPLATE("T P = T holds for frame-operator resolutions when S commutes with each P_i", S, double, cdouble) {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const WeightedFamily<S> onb = gen::random_onb_of_subspaces<S>(5, rng);
    WeightedFamily<S> fam(5);
    for (const auto& it : onb) fam.add(it.subspace, gen::uniform_real(rng, 0.5, 2));
    const SandwichReport t = quadratic_form_sandwich(fam, resolution_from_frame_operator(fam).family);
    CHECK(t.applicable);
    CHECK(t.lower_holds);
    CHECK(t.upper_DE2_holds);
  }
}

TEST_CASE("l2 resolutions") {
  const WeightedFamily<double> onb = gen::coordinate_split<double>({2, 2});
  const OperatorFamily<double> p = projections(onb);
  CHECK(l2_resolution_certificate(p, 1.0).pass);
  CHECK_FALSE(l2_resolution_certificate(p, 0.5).pass);
  OperatorFamily<double> heavy = p;
  heavy.weights = {2.0, 2.0};
  const L2Report r = l2_resolution_certificate(heavy, 0.25);
  CHECK(r.pass);
  CHECK(r.lambda_max == doctest::Approx(0.25));
  const L2Report with_family = l2_resolution_certificate(p, 1.0, &onb);
  CHECK(with_family.inequalities.size() == 2);
  CHECK(all_pass(with_family.inequalities));
}

TEST_CASE_TEMPLATE("l2 eigen certificate agrees with probe maximization", S, double, cdouble) {
  Rng rng(37);
  for (int trial = 0; trial < 5; ++trial) {
    const WeightedFamily<S> fam = gen::random_frame<S>(3, rng);
    OperatorFamily<S> of = resolution_from_frame_operator(fam).family;
    for (std::size_t i = 0; i < of.size(); ++i) of.ops[i] *= of.weights[i] * of.weights[i];
    const L2Report r = l2_resolution_certificate(of, 1e6, &fam);
    CHECK(r.resolves);
    const Matrix<S> q = quadratic_form(of, -2.0);
    const auto [lo, hi] = oracle::probe_extremes<S>(q, 10000, rng);
    CHECK(hi <= r.lambda_max + 1e-12);
    CHECK(lo >= r.lambda_min - 1e-12);
    CHECK(std::abs(oracle::probe_max<S>(q, 10000, rng) - r.lambda_max) <= 1e-6);
    CHECK(all_pass(r.inequalities));
  }
}

TEST_CASE("operator family validation") {
  OperatorFamily<double> of;
  of.ops = {Matrix<double>::Identity(2, 2), Matrix<double>::Identity(3, 3)};
  of.weights = {1.0, 1.0};
  CHECK_THROWS_AS(validate(of), InvalidInput);
  of.ops[1] = Matrix<double>::Identity(2, 2);
  of.weights[1] = 0.0;
  CHECK_THROWS_AS(validate(of), InvalidInput);
  of.weights[1] = 1.0;
  of.range_hints = {Subspace<double>::coordinate(2, {0}), std::nullopt};
  CHECK_THROWS_AS(validate(of), InvalidInput);
}
