#include "qhp/graph.hpp"

#include <doctest.h>

using namespace qhp;

TEST_CASE("graph construction and queries") {
  WeightedGraph g;
  VertexId a = g.add_vertex(-2);
  VertexId b = g.add_vertex(-3, 1);
  g.add_edge(a, b);
  CHECK(g.size() == 2);
  CHECK(g.vertex(b).genus == 1);
  CHECK(g.degree(a) == 1);
  CHECK(g.edge_multiplicity(a, b) == 1);
  g.add_edge(a, b);  // second intersection point
  CHECK(g.edge_multiplicity(a, b) == 2);
  CHECK(g.degree(a) == 2);
  CHECK_FALSE(g.is_forest());  // double edge is a cycle
  CHECK_THROWS_AS(g.add_edge(a, a), domain_error);
  CHECK_THROWS_AS(g.add_edge(a, 77), domain_error);
  CHECK_THROWS_AS(g.add_vertex_with_id(a, 0), domain_error);
}

TEST_CASE("components, forests, chains") {
  WeightedGraph g;
  VertexId a = g.add_vertex(-2), b = g.add_vertex(-2), c = g.add_vertex(-2);
  g.add_edge(a, b);
  CHECK(g.connected_components().size() == 2);
  CHECK(g.is_forest());
  CHECK_FALSE(g.is_connected());
  g.add_edge(b, c);
  CHECK(g.is_tree());
  auto order = g.linear_order();
  REQUIRE(order.has_value());
  CHECK(*order == std::vector<VertexId>{a, b, c});

  WeightedGraph empty;
  CHECK(empty.is_forest());
  CHECK(empty.linear_order()->empty());
}

TEST_CASE("chain bracket conversions") {
  Chain c({3, 1, 3});
  WeightedGraph g = c.to_graph();
  CHECK(g.vertices()[0].weight == -3);
  CHECK(g.vertices()[1].weight == -1);
  auto order = *g.linear_order();
  CHECK(Chain::from_graph(g, order) == c);
  CHECK(c.reversed() == c);
  CHECK(Chain({2, 3}).admissible());
  CHECK_FALSE(Chain({0, 2}).admissible());
  CHECK(parse_chain("[3,1,3]") == c);
  CHECK(parse_chain(" [ 3 , 1 , 3 ] ") == c);
  CHECK(parse_chain("[]").empty());
  CHECK(to_string(c) == "[3,1,3]");
  CHECK_THROWS_AS(parse_chain("3,1,3"), domain_error);
  CHECK_THROWS_AS(parse_chain("[3,x]"), domain_error);
}

TEST_CASE("rational parsing round trip") {
  CHECK(parse_rational("2/3") == Rat(2, 3));
  CHECK(parse_rational("-5") == Rat(-5));
  CHECK(rational_to_string(Rat(7, 2)) == "7/2");
  CHECK(rational_to_string(Rat(4, 2)) == "2");
  CHECK_THROWS_AS(parse_rational("1/0"), domain_error);
  CHECK_THROWS_AS(parse_rational("a/b"), domain_error);
}

TEST_CASE("induced subgraph keeps stable order") {
  WeightedGraph g;
  VertexId a = g.add_vertex(-1), b = g.add_vertex(-2), c = g.add_vertex(-3);
  g.add_edge(a, b);
  g.add_edge(b, c);
  std::vector<VertexId> keep{c, b};
  WeightedGraph sub = g.induced_subgraph(keep);
  CHECK(sub.size() == 2);
  CHECK(sub.vertices()[0].id == b);  // insertion order of g is preserved
  CHECK(sub.edge_multiplicity(b, c) == 1);
}
