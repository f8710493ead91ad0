#pragma once

#include "qhp/arith.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qhp {

using VertexId = std::int32_t;

/// One irreducible component of an snc-divisor: self-intersection and
/// geometric genus.
struct Vertex {
  VertexId id = -1;
  std::int64_t weight = 0;
  std::int64_t genus = 0;
};

/// Weighted dual graph of an snc-divisor: one vertex per component, one
/// edge per intersection point. Simple normal crossings allow distinct
/// components to meet several times, so edges form a multiset; self-loops
/// are excluded.
///
/// Vertices keep insertion order; that order indexes intersection
/// matrices. Operations on graphs are pure functions: they copy, mutate
/// the copy and return it.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  VertexId add_vertex(std::int64_t weight, std::int64_t genus = 0);
  void add_vertex_with_id(VertexId id, std::int64_t weight, std::int64_t genus = 0);
  void add_edge(VertexId a, VertexId b);

  bool has_vertex(VertexId id) const { return index_.count(id) != 0; }
  const Vertex& vertex(VertexId id) const;
  Vertex& vertex_mut(VertexId id);
  std::size_t size() const { return verts_.size(); }
  bool empty() const { return verts_.empty(); }

  std::span<const Vertex> vertices() const { return verts_; }
  const std::vector<std::pair<VertexId, VertexId>>& edges() const { return edges_; }

  /// Vertex position in the stable (insertion) order.
  std::size_t position(VertexId id) const;

  /// beta(v): number of edges at v, counted with multiplicity.
  std::size_t degree(VertexId id) const;
  /// Neighbors with multiplicity, in edge insertion order.
  std::vector<VertexId> neighbors(VertexId id) const;
  std::size_t edge_multiplicity(VertexId a, VertexId b) const;

  void set_weight(VertexId id, std::int64_t w);
  void remove_vertex(VertexId id);
  void remove_one_edge(VertexId a, VertexId b);

  std::vector<std::vector<VertexId>> connected_components() const;
  bool is_connected() const;
  /// Forest: no cycles, i.e. every component has #edges = #vertices - 1.
  bool is_forest() const;
  bool is_tree() const { return is_forest() && is_connected(); }

  /// Vertex order of a connected linear graph (all degrees <= 2, no
  /// multiple edges); empty when the graph is not a chain. A single
  /// vertex is a chain; the empty graph is a chain with no vertices.
  std::optional<std::vector<VertexId>> linear_order() const;

  WeightedGraph induced_subgraph(std::span<const VertexId> keep) const;

  /// Disjoint union; vertex ids must not collide.
  static WeightedGraph disjoint_union(const WeightedGraph& a, const WeightedGraph& b);

  bool operator==(const WeightedGraph& other) const;

 private:
  std::vector<Vertex> verts_;
  std::vector<std::pair<VertexId, VertexId>> edges_;  // stored as (min,max)
  std::unordered_map<VertexId, std::size_t> index_;
  VertexId next_id_ = 0;
};

/// Rational linear chain in bracket notation [a1,...,an], ai = -weight of
/// the i-th vertex. The bracket/weight conversion is always explicit.
struct Chain {
  std::vector<std::int64_t> entries;

  Chain() = default;
  explicit Chain(std::vector<std::int64_t> e) : entries(std::move(e)) {}

  std::size_t length() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  /// Admissible: every entry >= 2.
  bool admissible() const;
  Chain reversed() const;

  WeightedGraph to_graph() const;
  /// Reads a connected linear graph back into bracket entries following
  /// the given vertex order.
  static Chain from_graph(const WeightedGraph& g, const std::vector<VertexId>& order);

  bool operator==(const Chain&) const = default;
};

std::string to_string(const Chain& c);
Chain parse_chain(const std::string& text);

/// Q-divisor supported on a graph: rational coefficient per vertex.
struct MultiDivisor {
  const WeightedGraph* graph = nullptr;
  std::map<VertexId, Rat> coeff;

  Rat at(VertexId v) const {
    auto it = coeff.find(v);
    return it == coeff.end() ? Rat(0) : it->second;
  }
};

}  // namespace qhp
