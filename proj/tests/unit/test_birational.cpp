#include "qhp/birational.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace qhp;

namespace {

Chain chain_of(const WeightedGraph& g) {
  auto order = g.linear_order();
  REQUIRE(order.has_value());
  return Chain::from_graph(g, *order);
}

/// Chains are unoriented; compare entries up to reversal.
bool chain_is(const WeightedGraph& g, const Chain& expected) {
  Chain c = chain_of(g);
  return c == expected || c == expected.reversed();
}

bool same_chain_up_to_reversal(const WeightedGraph& a, const WeightedGraph& b) {
  Chain ca = chain_of(a), cb = chain_of(b);
  return ca == cb || ca == cb.reversed();
}

/// Standard chains of the same surface agree up to reversion: compare
/// with zeros normalized to the front and the tail unoriented.
bool same_standard_chain(const WeightedGraph& a, const WeightedGraph& b) {
  auto keyed = [](const WeightedGraph& g) {
    Chain c = chain_of(g);
    auto zeros = [](const Chain& x) {
      std::size_t k = 0;
      while (k < x.entries.size() && x.entries[k] == 0) ++k;
      return k;
    };
    Chain fronted = zeros(c.reversed()) > zeros(c) ? c.reversed() : c;
    std::size_t k = zeros(fronted);
    std::vector<std::int64_t> tail(fronted.entries.begin() + static_cast<std::ptrdiff_t>(k),
                                   fronted.entries.end());
    auto rev = tail;
    std::reverse(rev.begin(), rev.end());
    auto canon = std::min(tail, rev);
    canon.insert(canon.begin(), static_cast<std::int64_t>(k));
    return canon;
  };
  return keyed(a) == keyed(b);
}

}  // namespace

TEST_CASE("blowup rules") {
  // subdivisional on the edge of [2,2] -> [3,1,3]
  WeightedGraph g = Chain({2, 2}).to_graph();
  auto [g2, c] = blowup(g, BlowupStep::subdivisional(0, 1));
  CHECK(chain_of(g2) == Chain({3, 1, 3}));
  CHECK(g2.vertex(c).weight == -1);

  // sprouting on the tip of [2] -> [1,3]
  WeightedGraph h = Chain({2}).to_graph();
  auto [h2, c2] = blowup(h, BlowupStep::sprouting(0));
  Chain hc = chain_of(h2);
  CHECK((hc == Chain({3, 1}) || hc == Chain({1, 3})));

  // [0] has no edge to subdivide; sprouting gives [1,1]
  WeightedGraph z = Chain({0}).to_graph();
  CHECK_THROWS_AS(blowup(z, BlowupStep::subdivisional(0, 0)), domain_error);
  auto [z2, c3] = blowup(z, BlowupStep::sprouting(0));
  CHECK(chain_of(z2) == Chain({1, 1}));
}

TEST_CASE("blowdown rules") {
  WeightedGraph g = Chain({2, 1, 2}).to_graph();
  WeightedGraph d = blowdown(g, 1);
  CHECK(chain_of(d) == Chain({1, 1}));

  WeightedGraph single = Chain({1}).to_graph();
  CHECK(blowdown(single, 0).empty());

  CHECK_THROWS_AS(blowdown(Chain({2}).to_graph(), 0), domain_error);
  // branching (-1)-vertices are not contractible
  WeightedGraph f;
  VertexId c = f.add_vertex(-1);
  for (int i = 0; i < 3; ++i) {
    VertexId t = f.add_vertex(-2);
    f.add_edge(c, t);
  }
  CHECK_THROWS_AS(blowdown(f, c), domain_error);
}

TEST_CASE("blowdown inverts blowup on random pairs") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    // random small forest
    WeightedGraph g;
    std::size_t n = 1 + rng() % 5;
    for (std::size_t i = 0; i < n; ++i) {
      VertexId v = g.add_vertex(static_cast<std::int64_t>(rng() % 7) - 4);
      if (i > 0 && rng() % 3 != 0) g.add_edge(static_cast<VertexId>(rng() % i), v);
    }
    std::vector<BlowupStep> options;
    for (const auto& v : g.vertices()) options.push_back(BlowupStep::sprouting(v.id));
    for (const auto& [a, b] : g.edges()) options.push_back(BlowupStep::subdivisional(a, b));
    BlowupStep s = options[rng() % options.size()];
    auto [up, created] = blowup(g, s);
    WeightedGraph down = blowdown(up, created);
    CHECK(down == g);
    // and d is invariant under the blowup
    CHECK(discriminant(up) == discriminant(g));
  }
}

TEST_CASE("elementary transformation: the chain rule") {
  // [w,x,0,y-1,z] with center toward the y side -> [w,x-1,0,y,z]
  Chain start({3, 4, 0, 6, 5});
  WeightedGraph g = start.to_graph();
  auto order = *g.linear_order();
  auto r = elementary_transform(g, ElementaryTransformation::inner(order[2], order[3]));
  CHECK(chain_of(r.graph) == Chain({3, 3, 0, 7, 5}));
  CHECK(r.graph.vertex(r.new_zero).weight == 0);

  // outer on the 0-tip of [0,b,a]: center off the boundary decrements b
  WeightedGraph h = Chain({0, 4, 3}).to_graph();
  auto r2 = elementary_transform(h, ElementaryTransformation::outer(0));
  CHECK(chain_is(r2.graph, Chain({0, 3, 3})));
  // center at the intersection with the neighbor increments b
  auto r3 = elementary_transform(h, ElementaryTransformation::inner(0, 1));
  CHECK(chain_is(r3.graph, Chain({0, 5, 3})));

  // identity flow changes nothing
  CHECK(apply_flow(g, {}) == g);

  // weight != 0 or branching are rejected
  CHECK_THROWS_AS(elementary_transform(g, ElementaryTransformation::outer(order[0])),
                  domain_error);
  WeightedGraph f;
  VertexId c = f.add_vertex(0);
  for (int i = 0; i < 3; ++i) {
    VertexId t = f.add_vertex(-2);
    f.add_edge(c, t);
  }
  CHECK_THROWS_AS(elementary_transform(f, ElementaryTransformation::outer(c)), domain_error);
}

TEST_CASE("elementary transformation equals blowup plus blowdown") {
  // re-derive the chain rule via the primitives
  Chain start({0, 4, 3});
  WeightedGraph g = start.to_graph();
  auto [up, created] = blowup(g, BlowupStep::sprouting(0));
  WeightedGraph down = blowdown(up, 0);
  CHECK(chain_is(down, Chain({0, 3, 3})));
}

TEST_CASE("inverse transformation restores weights") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    Chain c;
    std::size_t len = 2 + rng() % 4;
    std::size_t zero_at = rng() % len;
    for (std::size_t i = 0; i < len; ++i)
      c.entries.push_back(i == zero_at ? 0 : static_cast<std::int64_t>(rng() % 5) - 1);
    WeightedGraph g = c.to_graph();
    auto order = *g.linear_order();
    VertexId z = order[zero_at];
    if (g.degree(z) == 2) {
      VertexId left = order[zero_at - 1], right = order[zero_at + 1];
      auto r = elementary_transform(g, ElementaryTransformation::inner(z, right));
      auto back =
          elementary_transform(r.graph, ElementaryTransformation::inner(r.new_zero, left));
      CHECK(chain_is(back.graph, c));
    } else {
      auto r = elementary_transform(g, ElementaryTransformation::outer(z));
      VertexId nb = g.neighbors(z).empty() ? -1 : r.graph.neighbors(r.new_zero)[0];
      if (nb != -1) {
        auto back =
            elementary_transform(r.graph, ElementaryTransformation::inner(r.new_zero, nb));
        CHECK(chain_is(back.graph, c));
      }
    }
  }
}

TEST_CASE("flows preserve vertex count, shape, |d|") {
  // exhaustive flow enumeration on short chains within a weight window
  std::vector<Chain> seeds = {Chain({2, 0, 2}),    Chain({0, 3, 1}),
                              Chain({1, 0, 2, 2}), Chain({0, 0, 3}),
                              Chain({4, 0, 1, 0}), Chain({2, 0, 3, 0, 1}),
                              Chain({0, 1, 2, 0, 2})};
  for (const Chain& seed : seeds) {
    auto orbit = oracle::flow_orbit(seed, -4, 1);
    Int d0 = boost::multiprecision::abs(oracle::discriminant_oracle(seed));
    for (const auto& weights : orbit) {
      CHECK(weights.size() == seed.length());
      Chain c;
      for (auto w : weights) c.entries.push_back(-w);
      CHECK(boost::multiprecision::abs(oracle::discriminant_oracle(c)) == d0);
    }
  }
}

TEST_CASE("balanced / standard / strongly balanced predicates") {
  CHECK(is_balanced(Chain({1}).to_graph()));  // D = [1]
  CHECK(is_balanced(Chain({0, 2, 2}).to_graph()));
  // one leading zero is balanced but not standard: standard prefixes
  // pair their zeros
  CHECK_FALSE(is_standard(Chain({0, 2, 2}).to_graph()));
  CHECK_FALSE(is_balanced(Chain({3, 1, 3}).to_graph()));
  CHECK(is_balanced(Chain({0, 0, 3, 2}).to_graph()));
  CHECK(is_standard(Chain({0, 0, 3, 2}).to_graph()));
  CHECK(is_standard(Chain({2, 3, 0, 0}).to_graph()));  // reversed orientation
  CHECK(is_standard(Chain({0}).to_graph()));
  CHECK(is_standard(Chain({0, 0, 0}).to_graph()));
  CHECK(is_standard(Chain({0, 0}).to_graph()));
  CHECK_FALSE(is_standard(Chain({0, 2, 0}).to_graph()));
  CHECK_FALSE(is_standard(Chain({0, 0, 0, 0}).to_graph()));
  CHECK_FALSE(is_standard(Chain({2, 0, 2}).to_graph()));
  CHECK(is_balanced(Chain({2, 0, 2}).to_graph()));

  // fork with a [0]-segment: standard, strongly balanced only if a
  // neighbor has weight 0
  WeightedGraph f;
  VertexId center = f.add_vertex(-3);
  VertexId z = f.add_vertex(0);
  f.add_edge(center, z);
  for (int i = 0; i < 2; ++i) {
    VertexId t = f.add_vertex(-2);
    f.add_edge(center, t);
  }
  CHECK(is_standard(f));
  CHECK_FALSE(is_strongly_balanced(f));
  f.set_weight(center, 0);
  CHECK(is_strongly_balanced(f));

  // no zero segments at all: strongly balanced when standard
  CHECK(is_strongly_balanced(Chain({0, 0, 2}).to_graph()));
  CHECK_FALSE(is_strongly_balanced(Chain({0}).to_graph()));

  WeightedGraph cyc;
  VertexId a = cyc.add_vertex(-2), b = cyc.add_vertex(-2);
  cyc.add_edge(a, b);
  cyc.add_edge(a, b);
  CHECK_THROWS_AS(is_balanced(cyc), domain_error);
}

TEST_CASE("standardize: basic examples") {
  // [3,1,3]: contracts to [2,2], which is standard; |d| = 3 throughout
  auto r = standardize(Chain({3, 1, 3}).to_graph());
  CHECK(chain_of(r.graph) == Chain({2, 2}));
  CHECK(apply_trace(Chain({3, 1, 3}).to_graph(), r.trace) == r.graph);
  CHECK(discriminant(r.graph) == discriminant(Chain({3, 1, 3})));

  // already standard: identity
  auto r2 = standardize(Chain({0, 0, 2, 3}).to_graph());
  CHECK(r2.trace.empty());
  CHECK(chain_of(r2.graph) == Chain({0, 0, 2, 3}));

  // a single leading zero is not standard; the zero pair completes
  auto r2b = standardize(Chain({0, 2, 3}).to_graph());
  CHECK(chain_is(r2b.graph, Chain({0, 0, 3})));

  // [2,0,2]: flows to a standard chain with the same |d| = 4
  WeightedGraph g = Chain({2, 0, 2}).to_graph();
  auto r3 = standardize(g);
  CHECK(is_standard(r3.graph));
  CHECK(boost::multiprecision::abs(discriminant(r3.graph)) == 4);
  CHECK(apply_trace(g, r3.trace) == r3.graph);
  CHECK(chain_is(r3.graph, Chain({0, 0, 4})));
}

TEST_CASE("standardize: idempotence and class stability") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    // scramble a random standard chain by honest moves
    Chain c;
    int kind = static_cast<int>(rng() % 4);
    if (kind == 0) c = Chain({0});
    else if (kind == 1) c = Chain({0, 0, 0});
    else {
      if (kind == 3) c.entries = {0, 0};
      std::size_t len = rng() % 3;
      for (std::size_t i = 0; i < len; ++i)
        c.entries.push_back(2 + static_cast<std::int64_t>(rng() % 3));
      if (c.empty()) c = Chain({2});
    }
    WeightedGraph g = c.to_graph();
    for (int moves = static_cast<int>(rng() % 10); moves > 0; --moves) {
      auto t = oracle::random_move(rng, g);
      if (!t) break;
      g = elementary_transform(g, *t).graph;
    }
    if (rng() % 2 && g.size() < 6) {
      // one honest blowup keeps the class
      std::vector<BlowupStep> options;
      for (const auto& v : g.vertices()) options.push_back(BlowupStep::sprouting(v.id));
      for (const auto& [a, b] : g.edges())
        options.push_back(BlowupStep::subdivisional(a, b));
      g = blowup(g, options[rng() % options.size()]).graph;
    }
    auto r = standardize(g);
    CHECK(is_standard(r.graph));
    CHECK(apply_trace(g, r.trace) == r.graph);
    auto r2 = standardize(r.graph);
    CHECK(r2.trace.empty());
    CHECK(r2.graph == r.graph);
    // flow-equivalent scrambles land on the same normal form up to
    // reversion
    auto base = standardize(c.to_graph());
    CHECK(same_standard_chain(r.graph, base.graph));
  }
}

TEST_CASE("standardize rejects non-boundary classes") {
  CHECK_THROWS_AS(standardize(Chain({0, 0, 0, 0}).to_graph()), domain_error);
  CHECK_THROWS_AS(standardize(Chain({0, 3, -2}).to_graph()), domain_error);
  WeightedGraph cyc;
  VertexId a = cyc.add_vertex(-2), b = cyc.add_vertex(-2);
  cyc.add_edge(a, b);
  cyc.add_edge(a, b);
  CHECK_THROWS_AS(standardize(cyc), domain_error);
}

TEST_CASE("standardize handles positive weights through tip unwinding") {
  // a single +2 vertex is the boundary of a degree-2 cone neighborhood
  auto r = standardize(Chain({-2}).to_graph());
  CHECK(is_standard(r.graph));
  CHECK(chain_is(r.graph, Chain({0, 0, 2})));
  CHECK(apply_trace(Chain({-2}).to_graph(), r.trace) == r.graph);

  auto r2 = standardize(Chain({-1, 3}).to_graph());
  CHECK(is_standard(r2.graph));
  CHECK(apply_trace(Chain({-1, 3}).to_graph(), r2.trace) == r2.graph);
  CHECK(discriminant(r2.graph) == discriminant(Chain({-1, 3})));
}

TEST_CASE("standardize on scrambled branched forests") {
  std::mt19937 rng(4242);
  int standardized = 0;
  for (int trial = 0; trial < 500; ++trial) {
    WeightedGraph g;
    VertexId hub = g.add_vertex(-static_cast<std::int64_t>(1 + rng() % 4));
    int arms = 1 + rng() % 3;
    for (int a = 0; a < arms; ++a) {
      VertexId prev = hub;
      int len = 1 + rng() % 3;
      for (int i = 0; i < len; ++i) {
        VertexId v = g.add_vertex(-static_cast<std::int64_t>(2 + rng() % 3));
        g.add_edge(prev, v);
        prev = v;
      }
    }
    if (rng() % 2) {  // a zero-pair twig
      VertexId a = g.add_vertex(-static_cast<std::int64_t>(2 + rng() % 3));
      VertexId z1 = g.add_vertex(0), z0 = g.add_vertex(0);
      g.add_edge(hub, a);
      g.add_edge(a, z1);
      g.add_edge(z1, z0);
    }
    for (int m = static_cast<int>(rng() % 8); m > 0; --m) {
      auto t = oracle::random_move(rng, g);
      if (!t) break;
      g = elementary_transform(g, *t).graph;
    }
    for (int b = static_cast<int>(rng() % 3); b > 0; --b) {
      std::vector<BlowupStep> opt;
      for (const auto& v : g.vertices()) opt.push_back(BlowupStep::sprouting(v.id));
      for (const auto& [x, y] : g.edges()) opt.push_back(BlowupStep::subdivisional(x, y));
      g = blowup(g, opt[rng() % opt.size()]).graph;
    }
    try {
      auto r = standardize(g);
      CHECK(is_standard(r.graph));
      CHECK(apply_trace(g, r.trace) == r.graph);
      CHECK(discriminant(r.graph) == discriminant(g));
      CHECK(standardize(r.graph).trace.empty());
      ++standardized;
    } catch (const domain_error& e) {
      // random seeds may violate the signature constraint or pin zeros
      // against branching components; both are reported, never mangled
      bool known = e.code() == "NOT_A_BOUNDARY_CLASS" ||
                   e.code() == "NOT_SUPPORTED_SEGMENT" ||
                   e.code() == "NOT_STANDARDIZABLE";
      CHECK(known);
    }
  }
  CHECK(standardized > 300);
}

TEST_CASE("reversion") {
  // standalone [0,0,2,3] -> [2,3,0,0]
  WeightedGraph g = Chain({0, 0, 2, 3}).to_graph();
  auto order = *g.linear_order();
  auto r = reversion(g, order);
  CHECK(chain_of(r.graph) == Chain({2, 3, 0, 0}));
  CHECK_FALSE(r.flow.empty());
  CHECK(apply_flow(g, r.flow) == r.graph);
  // the returned segment lists the new vertex ids left to right
  Chain seg_chain;
  for (VertexId v : r.segment) seg_chain.entries.push_back(-r.graph.vertex(v).weight);
  CHECK(seg_chain == Chain({2, 3, 0, 0}));

  // [0,0]: nothing to move, but the flow is still nontrivial
  WeightedGraph p = Chain({0, 0}).to_graph();
  auto r2 = reversion(p, *p.linear_order());
  CHECK(chain_of(r2.graph) == Chain({0, 0}));
  CHECK(r2.flow.size() >= 2);

  // reversion twice restores the weighted shape
  std::vector<VertexId> back(r.segment.rbegin(), r.segment.rend());
  auto r3 = reversion(r.graph, back);
  CHECK(same_chain_up_to_reversal(r3.graph, g));

  CHECK_THROWS_AS(reversion(g, {order[0], order[2]}), domain_error);
  WeightedGraph bad = Chain({0, 2, 3}).to_graph();
  CHECK_THROWS_AS(reversion(bad, *bad.linear_order()), domain_error);
}

TEST_CASE("reversion inside a larger boundary") {
  // segment [0,0,3] hanging off a branching vertex
  WeightedGraph g;
  VertexId hub = g.add_vertex(-5);
  VertexId t1 = g.add_vertex(-2), t2 = g.add_vertex(-2);
  g.add_edge(hub, t1);
  g.add_edge(hub, t2);
  VertexId a = g.add_vertex(-3);
  VertexId z1 = g.add_vertex(0), z0 = g.add_vertex(0);
  g.add_edge(hub, a);
  g.add_edge(a, z1);
  g.add_edge(z1, z0);
  // the segment is [0,0,3] read from the free tip
  auto r = reversion(g, {z0, z1, a});
  // hub and tips untouched
  CHECK(r.graph.vertex(hub).weight == -5);
  CHECK(r.graph.degree(hub) == 3);
  Chain seg;
  for (VertexId v : r.segment) seg.entries.push_back(-r.graph.vertex(v).weight);
  CHECK(seg == Chain({3, 0, 0}));
}

TEST_CASE("signature by congruence diagonalization") {
  Signature s1 = signature(Chain({2, 2}).to_graph());
  CHECK(s1.plus == 0);
  CHECK(s1.minus == 2);
  CHECK(s1.zero == 0);
  Signature s2 = signature(Chain({0, 0}).to_graph());
  CHECK(s2.plus == 1);
  CHECK(s2.minus == 1);
  Signature s3 = signature(Chain({0}).to_graph());
  CHECK(s3.zero == 1);
  Signature s4 = signature(Chain({0, 0, 0, 0}).to_graph());
  CHECK(s4.plus == 2);
  Signature s5 = signature(Chain({0, 0, 3, 4}).to_graph());
  CHECK(s5.plus == 1);
  CHECK(s5.minus == 3);
}
