#include <doctest.h>

#include "fusion/numkernel.hpp"
#include "fusion/structure.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <numbers>

using namespace fusion;

namespace {

template <FieldScalar S>
Index oracle_rank(const WeightedFamily<S>& fam) {
  if (fam.total_dim() == 0) return 0;
  return oracle::rank<S>(fam.stacked_basis());
}

double max_pairwise_product(const std::vector<Subspace<double>>& w) {
  double worst = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j) worst = std::max(worst, op_norm<double>(w[i].projector() * w[j].projector()));
  return worst;
}

}  // namespace

TEST_CASE("truncated example family: complete, exact, neither minimal nor a Riesz decomposition") {
  const WeightedFamily<double> fam = gen::truncated_exact();
  const StructureReport r = analyze_structure(fam);
  CHECK(r.complete);
  CHECK(r.exact);
  CHECK_FALSE(r.minimal);
  CHECK_FALSE(r.riesz_decomposition);
  CHECK_FALSE(r.onb_of_subspaces);
  CHECK_FALSE(r.pooled_basis_exact);
  CHECK(r.total_dim == 6);
  CHECK(r.rank == 5);
  CHECK_FALSE(is_minimal_by_intersection(fam));
  CHECK_FALSE(synthesis_injective(fam));
  const std::vector<RemovalOutcome> rem = removal_dichotomy(fam);
  for (const auto& o : rem) {
    CHECK_FALSE(o.frame);
    CHECK_FALSE(o.complete);
  }
}

TEST_CASE("simple completeness and minimality cases") {
  WeightedFamily<double> two_lines(3);
  two_lines.add(Subspace<double>::coordinate(3, {0}), 1.0);
  two_lines.add(Subspace<double>::coordinate(3, {1}), 1.0);
  CHECK_FALSE(is_complete(two_lines));
  CHECK(is_minimal(two_lines));
  WeightedFamily<double> nested(2);
  nested.add(Subspace<double>::coordinate(2, {0}), 1.0);
  nested.add(Subspace<double>::full(2), 1.0);
  CHECK(is_complete(nested));
  CHECK_FALSE(is_minimal(nested));
  CHECK_FALSE(is_minimal_by_intersection(nested));
}

TEST_CASE("duplicated coordinate line is not exact") {
  WeightedFamily<double> fam = gen::coordinate_split<double>({1, 1, 1});
  fam.add(Subspace<double>::coordinate(3, {0}), 1.0);
  CHECK_FALSE(is_exact(fam));
  CHECK(is_exact(gen::coordinate_split<double>({1, 2})));
  WeightedFamily<double> line(2);
  line.add(Subspace<double>::coordinate(2, {0}), 1.0);
  CHECK_THROWS_AS(is_exact(line), InvalidInput);
}

TEST_CASE_TEMPLATE("minimality tests agree on random and degenerate families", S, double, cdouble) {
  Rng rng(606);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + trial % 7;
    const WeightedFamily<S> fam = trial % 4 == 3 ? gen::degenerate_family<S>(n, trial % 3, rng)
                                                 : random_family<S>(n, 1 + trial % 4, std::max<Index>(1, n / 2), rng);
    const bool rank_test = is_minimal(fam);
    CHECK(rank_test == is_minimal_by_intersection(fam));
    CHECK(rank_test == synthesis_injective(fam));
    CHECK(rank_test == (oracle_rank(fam) == fam.total_dim()));
    CHECK(is_complete(fam) == (oracle_rank(fam) == n));
  }
}

TEST_CASE_TEMPLATE("predicate lattice and removal dichotomy", S, double, cdouble) {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 2 + trial % 5;
    const WeightedFamily<S> fam = gen::random_frame<S>(n, rng);
    const StructureReport r = analyze_structure(fam);
    CHECK(r.riesz_decomposition == (r.complete && r.minimal));
    CHECK(r.riesz_decomposition == is_riesz_decomposition(fam));
    if (r.riesz_decomposition) CHECK(r.exact);
    if (r.onb_of_subspaces) CHECK(r.riesz_decomposition);
    for (const auto& o : removal_dichotomy(fam)) CHECK(o.frame == o.complete);
  }
}

TEST_CASE_TEMPLATE("oblique direct sums are Riesz decompositions", S, double, cdouble) {
  Rng rng(66);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix<S> t = random_matrix<S>(6, 6, rng);
    WeightedFamily<S> fam(6);
    fam.add(Subspace<S>::from_spanning(t.leftCols(2)), 1.0);
    fam.add(Subspace<S>::from_spanning(t.middleCols(2, 3)), 1.5);
    fam.add(Subspace<S>::from_spanning(t.rightCols(1)), 0.7);
    CHECK(is_riesz_decomposition(fam));
    CHECK(pooled_basis_is_exact(fam));
    CHECK(is_exact(fam));
  }
}

TEST_CASE("biorthogonal families") {
  const WeightedFamily<double> axes = gen::coordinate_split<double>({1, 1});
  const auto v = biorthogonal_family(axes);
  CHECK(distance(v[0], axes[0].subspace) < 1e-12);
  CHECK(check_biorthogonality(axes, v).holds);

  WeightedFamily<double> oblique(2);
  Vector<double> d(2);
  d << 1, 1;
  oblique.add(Subspace<double>::coordinate(2, {0}), 1.0);
  oblique.add(Subspace<double>::from_spanning(d), 1.0);
  const auto vo = biorthogonal_family(oblique);
  Vector<double> perp(2);
  perp << 1, -1;
  CHECK(distance(vo[0], Subspace<double>::from_spanning(perp)) < 1e-12);
  CHECK(check_biorthogonality(oblique, vo).holds);

  const WeightedFamily<double> ex = gen::truncated_exact();
  const BiorthogonalityCheck c = check_biorthogonality(ex, biorthogonal_family(ex));
  CHECK(c.orthogonal);
  CHECK_FALSE(c.holds);
  CHECK_FALSE(c.nondegenerate[0]);
}

TEST_CASE("minimal frames orthogonalize under S^{-1/2}") {
  WeightedFamily<double> lines(2);
  Vector<double> d(2);
  d << std::cos(std::numbers::pi / 3), std::sin(std::numbers::pi / 3);
  lines.add(Subspace<double>::coordinate(2, {0}), 1.0);
  lines.add(Subspace<double>::from_spanning(d), 1.0);
  CHECK(max_pairwise_product(orthogonalize_minimal(lines)) <= 1e-8);

  const WeightedFamily<double> orth = gen::coordinate_split<double>({2, 1, 3});
  const auto same = orthogonalize_minimal(orth);
  for (std::size_t i = 0; i < same.size(); ++i) CHECK(distance(same[i], orth[i].subspace) <= 1e-10);

  Rng rng(88);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix<double> t = random_matrix<double>(8, 8, rng);
    WeightedFamily<double> fam(8);
    fam.add(Subspace<double>::from_spanning(t.leftCols(3)), gen::uniform_real(rng, 0.5, 2));
    fam.add(Subspace<double>::from_spanning(t.middleCols(3, 3)), gen::uniform_real(rng, 0.5, 2));
    fam.add(Subspace<double>::from_spanning(t.rightCols(2)), gen::uniform_real(rng, 0.5, 2));
    CHECK(max_pairwise_product(orthogonalize_minimal(fam)) <= 1e-8);
  }
  CHECK_THROWS_AS(orthogonalize_minimal(gen::truncated_exact()), PreconditionError);
}
