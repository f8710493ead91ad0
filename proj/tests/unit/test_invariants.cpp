#include "qhp/invariants.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace qhp;

namespace {

/// Center vertex with chains attached at their last entries; arm chains
/// are given tip-first.
WeightedGraph fork(std::int64_t center_weight, const std::vector<Chain>& arms,
                   std::int64_t center_genus = 0) {
  WeightedGraph g;
  VertexId c = g.add_vertex(center_weight, center_genus);
  for (const Chain& arm : arms) {
    // tip first: attach the last vertex of the arm to the center
    VertexId prev = -1;
    std::vector<VertexId> ids;
    for (std::int64_t a : arm.entries) {
      VertexId v = g.add_vertex(-a, 0);
      if (prev != -1) g.add_edge(prev, v);
      prev = v;
      ids.push_back(v);
    }
    if (!ids.empty()) g.add_edge(ids.back(), c);
  }
  return g;
}

}  // namespace

TEST_CASE("intersection matrix unfolds definitions") {
  Chain c({2});
  IntMatrix q = intersection_matrix(c.to_graph());
  CHECK(q.size() == 1);
  CHECK(q.at(0, 0) == -2);

  Chain c2({2, 3});
  IntMatrix q2 = intersection_matrix(c2.to_graph());
  CHECK(q2.at(0, 0) == -2);
  CHECK(q2.at(1, 1) == -3);
  CHECK(q2.at(0, 1) == 1);
  CHECK(q2.at(1, 0) == 1);

  WeightedGraph iso;
  iso.add_vertex(-2);
  iso.add_vertex(-2);
  IntMatrix q3 = intersection_matrix(iso);
  CHECK(q3.at(0, 1) == 0);
  CHECK(q3.at(0, 0) == -2);
}

TEST_CASE("discriminant: definition cases and oracle") {
  CHECK(discriminant(WeightedGraph{}) == 1);  // d(0) = 1 by definition
  CHECK(discriminant(Chain({2})) == 2);
  CHECK(discriminant(Chain({2, 1, 2})) == oracle::discriminant_oracle(Chain({2, 1, 2})));
  CHECK(discriminant(Chain({2, 1, 2})) == 0);
  CHECK(discriminant(Chain({2, 2, 2})) == 4);
  CHECK(oracle::discriminant_oracle(Chain({2, 2, 2})) == 4);
}

TEST_CASE("discriminant equals the cofactor oracle on all short chains") {
  // every chain of length <= 12 over a small entry alphabet, sampled
  std::mt19937 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    std::size_t len = 1 + rng() % 12;
    Chain c;
    for (std::size_t i = 0; i < len; ++i)
      c.entries.push_back(static_cast<std::int64_t>(rng() % 7) - 1);
    CHECK(discriminant(c) == oracle::discriminant_oracle(c));
  }
}

TEST_CASE("discriminant is multiplicative over disjoint unions") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    Chain a, b;
    for (std::size_t i = 0; i < 1 + rng() % 4; ++i)
      a.entries.push_back(static_cast<std::int64_t>(rng() % 5));
    for (std::size_t i = 0; i < 1 + rng() % 4; ++i)
      b.entries.push_back(static_cast<std::int64_t>(rng() % 5));
    WeightedGraph ga = a.to_graph();
    WeightedGraph gb = b.to_graph();
    WeightedGraph gbs;  // reindexed copy to avoid id collisions
    std::vector<VertexId> prev;
    for (const auto& v : gb.vertices())
      gbs.add_vertex_with_id(v.id + 100, v.weight, v.genus);
    for (const auto& [x, y] : gb.edges()) gbs.add_edge(x + 100, y + 100);
    CHECK(discriminant(WeightedGraph::disjoint_union(ga, gbs)) ==
          discriminant(ga) * discriminant(gb));
  }
}

TEST_CASE("negative definiteness") {
  CHECK(is_negative_definite(WeightedGraph{}));
  CHECK(is_negative_definite(Chain({2, 2}).to_graph()));  // minors 2, 3
  CHECK(is_negative_definite(Chain({1}).to_graph()));
  CHECK_FALSE(is_negative_definite(Chain({0}).to_graph()));
  CHECK_FALSE(is_negative_definite(Chain({2, 1, 2}).to_graph()));  // d = 0

  // admissible chains are always negative definite; a 0-weight vertex breaks it
  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Chain c;
    for (std::size_t i = 0; i < 1 + rng() % 6; ++i)
      c.entries.push_back(2 + static_cast<std::int64_t>(rng() % 4));
    CHECK(is_negative_definite(c.to_graph()));
    Chain broken = c;
    broken.entries.push_back(0);
    CHECK_FALSE(is_negative_definite(broken.to_graph()));
  }
}

TEST_CASE("negative definiteness is order independent") {
  // same graph entered in different vertex orders
  WeightedGraph g1;
  VertexId a1 = g1.add_vertex(-2), b1 = g1.add_vertex(-3), c1 = g1.add_vertex(-2);
  g1.add_edge(a1, b1);
  g1.add_edge(b1, c1);
  WeightedGraph g2;
  VertexId b2 = g2.add_vertex(-3), c2 = g2.add_vertex(-2), a2 = g2.add_vertex(-2);
  g2.add_edge(a2, b2);
  g2.add_edge(b2, c2);
  CHECK(is_negative_definite(g1) == is_negative_definite(g2));
  CHECK(discriminant(g1) == discriminant(g2));
}

TEST_CASE("branching number") {
  WeightedGraph g = Chain({2, 1, 2}).to_graph();
  auto order = *g.linear_order();
  CHECK(branching_number(g, order[1]) == 2);
  CHECK(branching_number(g, order[0]) == 1);
  WeightedGraph f = fork(-2, {Chain({2}), Chain({2}), Chain({2})});
  CHECK(branching_number(f, f.vertices()[0].id) == 3);
  CHECK_THROWS_AS(branching_number(g, 99), domain_error);
}

TEST_CASE("e invariant") {
  CHECK(e_invariant(Chain({2})) == Rat(1, 2));
  CHECK(e_invariant(Chain({2, 2})) == Rat(2, 3));
  CHECK(e_invariant(Chain({3})) == Rat(1, 3));
  CHECK(tilde_e(Chain({2, 3})) == e_invariant(Chain({3, 2})));
  CHECK_THROWS_AS(e_invariant(Chain{}), domain_error);
  CHECK_THROWS_AS(e_invariant(Chain({1, 2})), domain_error);

  std::mt19937 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    Chain c;
    for (std::size_t i = 0; i < 1 + rng() % 6; ++i)
      c.entries.push_back(2 + static_cast<std::int64_t>(rng() % 4));
    Rat e = e_invariant(c);
    CHECK(e > 0);
    CHECK(e < 1);
  }
}

TEST_CASE("e fraction keeps the raw determinant ratio") {
  // [2,2]: raw 2/3 is already reduced; the columnar multiplicity is the
  // reduced denominator
  EFraction f = e_fraction(Chain({2, 2}));
  CHECK(f.raw_num == 2);
  CHECK(f.raw_den == 3);
  CHECK(f.reduced == Rat(2, 3));
  // a reducible ratio: [2,2,2,2] has d = 5, d(rest) = 4; [4,2] gives 2/7
  EFraction g = e_fraction(Chain({4, 2}));
  CHECK(g.raw_num == 2);
  CHECK(g.raw_den == 7);
  CHECK(den(g.reduced) == 7);
}

TEST_CASE("e sum over maximal admissible twigs") {
  WeightedGraph f = fork(-3, {Chain({2}), Chain({2}), Chain({2})});
  CHECK(e_sum_over_twigs(f) == Rat(3, 2));
  WeightedGraph f2 = fork(-2, {Chain({2}), Chain({2}), Chain({3})});
  CHECK(e_sum_over_twigs(f2) == Rat(4, 3));
  // no admissible twigs: a chain of zeros is not a twig source
  WeightedGraph z = Chain({0, 3, 0}).to_graph();
  CHECK(e_sum_over_twigs(z) == 0);
  // standalone admissible chain: convention undefined
  CHECK_THROWS_AS(e_sum_over_twigs(Chain({2, 2}).to_graph()), domain_error);
  // twig stops at the first non-admissible vertex
  WeightedGraph mid = Chain({2, 2, 1, 3}).to_graph();
  CHECK(e_sum_over_twigs(mid) == e_invariant(Chain({2, 2})) + e_invariant(Chain({3})));
}

TEST_CASE("arithmetic genus") {
  WeightedGraph g = Chain({2, 1, 2}).to_graph();
  auto order = *g.linear_order();
  MultiDivisor d;
  d.graph = &g;
  d.coeff[order[0]] = 1;
  d.coeff[order[1]] = 2;
  d.coeff[order[2]] = 1;
  CHECK(arithmetic_genus(d) == 0);

  WeightedGraph single;
  VertexId v = single.add_vertex(-1, 0);
  MultiDivisor d2;
  d2.graph = &single;
  d2.coeff[v] = 1;
  CHECK(arithmetic_genus(d2) == 0);

  // Z = E + 2 E_h on the star with E_h of weight -1 and three [4]-arms
  WeightedGraph s = fork(-1, {Chain({4}), Chain({4}), Chain({4})});
  MultiDivisor z;
  z.graph = &s;
  z.coeff[s.vertices()[0].id] = 3;  // center: 1 + 2
  for (std::size_t i = 1; i < 4; ++i) z.coeff[s.vertices()[i].id] = 1;
  CHECK(arithmetic_genus(z) == 1);
}

TEST_CASE("bark") {
  // whole-graph case [2]
  WeightedGraph g = Chain({2}).to_graph();
  MultiDivisor bk = bark(g, {g.vertices()[0].id});
  CHECK(bk.at(g.vertices()[0].id) == 1);

  // twig [2] attached once to the rest
  WeightedGraph f = fork(-3, {Chain({2}), Chain({2}), Chain({2})});
  VertexId tip = f.vertices()[1].id;
  MultiDivisor bk2 = bark(f, {tip});
  CHECK(bk2.at(tip) == Rat(1, 2));

  // twig [2,2] tip-first: coefficients (2/3, 1/3)
  WeightedGraph h = fork(-5, {Chain({2, 2}), Chain({3}), Chain({2})});
  auto twigs = maximal_admissible_twigs(h);
  const Twig* t22 = nullptr;
  for (const auto& t : twigs)
    if (t.chain == Chain({2, 2})) t22 = &t;
  REQUIRE(t22 != nullptr);
  MultiDivisor bk3 = bark(h, t22->vertices);
  CHECK(bk3.at(t22->vertices[0]) == Rat(2, 3));
  CHECK(bk3.at(t22->vertices[1]) == Rat(1, 3));

  // coefficients of twig barks lie strictly in (0,1)
  std::mt19937 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    Chain arm1, arm2, arm3;
    auto rand_arm = [&](Chain& c) {
      for (std::size_t i = 0; i < 1 + rng() % 3; ++i)
        c.entries.push_back(2 + static_cast<std::int64_t>(rng() % 3));
    };
    rand_arm(arm1);
    rand_arm(arm2);
    rand_arm(arm3);
    WeightedGraph fr = fork(-1 - static_cast<std::int64_t>(rng() % 3), {arm1, arm2, arm3});
    std::vector<VertexId> support;
    for (const auto& t : maximal_admissible_twigs(fr))
      support.insert(support.end(), t.vertices.begin(), t.vertices.end());
    MultiDivisor bk4 = bark(fr, support);
    for (VertexId v : support) {
      CHECK(bk4.at(v) > 0);
      CHECK(bk4.at(v) < 1);
    }
  }

  // non-admissible support: singular system
  WeightedGraph bad = Chain({2, 1, 2}).to_graph();
  std::vector<VertexId> all;
  for (const auto& v : bad.vertices()) all.push_back(v.id);
  CHECK_THROWS_AS(bark(bad, all), domain_error);
}

TEST_CASE("singularity classification") {
  auto a1 = classify_singularity(Chain({2}).to_graph());
  CHECK(a1.kind == SingularityKind::Cyclic);
  CHECK(a1.order == 2);
  CHECK(a1.topologically_rational);

  // fork of type (2,2,k+1): center -2 with arms [2],[2],[2,...,2] (k twos)
  for (int k = 1; k <= 4; ++k) {
    Chain long_arm(std::vector<std::int64_t>(static_cast<std::size_t>(k), 2));
    WeightedGraph f = fork(-2, {Chain({2}), Chain({2}), long_arm});
    auto d = classify_singularity(f);
    CHECK(d.kind == SingularityKind::Fork);
    REQUIRE(d.fork_type.size() == 3);
    CHECK(d.fork_type[0] == 2);
    CHECK(d.fork_type[1] == 2);
    CHECK(d.fork_type[2] == k + 1);
    CHECK(d.order == discriminant(f));
  }

  // a negative definite cycle is not a quotient singularity and not
  // topologically rational
  WeightedGraph cyc;
  VertexId a = cyc.add_vertex(-3), b = cyc.add_vertex(-3), c = cyc.add_vertex(-3);
  cyc.add_edge(a, b);
  cyc.add_edge(b, c);
  cyc.add_edge(c, a);
  REQUIRE(is_negative_definite(cyc));
  auto d = classify_singularity(cyc);
  CHECK(d.kind == SingularityKind::NonQuotient);
  CHECK_FALSE(d.topologically_rational);

  CHECK_THROWS_AS(classify_singularity(Chain({0}).to_graph()), domain_error);
}
