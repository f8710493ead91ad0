#pragma once

#include "qhp/graph.hpp"
#include "qhp/invariants.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace qhp {

/// One blowup on a weighted graph. Sprouting: center on a single
/// component; subdivisional: center on an intersection point of two.
struct BlowupStep {
  enum class Kind { Sprouting, Subdivisional };
  Kind kind = Kind::Sprouting;
  VertexId a = -1;
  VertexId b = -1;  // second endpoint, subdivisional only

  static BlowupStep sprouting(VertexId v) { return {Kind::Sprouting, v, -1}; }
  static BlowupStep subdivisional(VertexId u, VertexId v) {
    return {Kind::Subdivisional, u, v};
  }
  bool operator==(const BlowupStep&) const = default;
};

struct BlowupResult {
  WeightedGraph graph;
  VertexId created = -1;
};

/// New vertex of weight -1 and genus 0. Sprouting decrements the host
/// and attaches the new vertex; subdivisional decrements both endpoints
/// and replaces one copy of the edge by the length-2 path through the
/// new vertex.
BlowupResult blowup(const WeightedGraph& g, const BlowupStep& step);

/// Inverse of blowup: v must have weight -1, genus 0 and at most two
/// distinct neighbors. Neighbors gain +1 and, when there are two, an
/// edge between them.
WeightedGraph blowdown(const WeightedGraph& g, VertexId v);

/// Elementary transformation at a 0-weight non-branching vertex: one
/// blowup (at the chosen neighbor's intersection point, or at a free
/// point for the outer form) followed by the blowdown of the original
/// vertex. The transformed position holds a fresh 0-weight vertex.
struct ElementaryTransformation {
  VertexId zero_vertex = -1;
  std::optional<VertexId> center_side;  // nullopt = outer (free center)

  static ElementaryTransformation inner(VertexId z, VertexId toward) {
    return {z, toward};
  }
  static ElementaryTransformation outer(VertexId z) { return {z, std::nullopt}; }
  bool operator==(const ElementaryTransformation&) const = default;
};

struct ElementaryResult {
  WeightedGraph graph;
  VertexId new_zero = -1;
};

ElementaryResult elementary_transform(const WeightedGraph& g,
                                      const ElementaryTransformation& t);

/// A flow: composition of elementary transformations, each applicable to
/// the predecessor's output.
using Flow = std::vector<ElementaryTransformation>;

WeightedGraph apply_flow(const WeightedGraph& g, const Flow& f);

struct BlowdownStep {
  VertexId vertex = -1;
  bool operator==(const BlowdownStep&) const = default;
};

/// One primitive move of a boundary rewrite. Elementary transformations
/// alone cannot reach the normal form in general (they preserve the
/// vertex count), so normalization witnesses also carry blowups and
/// blowdowns.
using RewriteStep = std::variant<BlowupStep, BlowdownStep, ElementaryTransformation>;
using RewriteTrace = std::vector<RewriteStep>;

/// Replays a trace; used to check that normalization witnesses are
/// honest.
WeightedGraph apply_trace(const WeightedGraph& g, const RewriteTrace& trace);

/// Segment: connected component left after deleting branching and
/// non-rational vertices. Ends touching a deleted vertex are "attached".
struct Segment {
  std::vector<VertexId> order;
  bool attached_front = false;
  bool attached_back = false;
  Chain chain;  // entries along `order`
};

std::vector<Segment> segments(const WeightedGraph& g);

/// Balanced: every segment has entries in {0,2,3,...}, except that a
/// whole component equal to [1] is balanced.
bool is_balanced(const WeightedGraph& g);
/// Standard: every component is [1] or has all segments of shapes [0],
/// [0,0,0] or [0^{2k},a_1..a_n] with k <= 1 and a_i >= 2 (either
/// orientation).
bool is_standard(const WeightedGraph& g);
/// Strongly balanced: standard, and [0]/[0,0,0] segments are anchored by
/// an adjacent 0-weight component when any exist.
bool is_strongly_balanced(const WeightedGraph& g);

struct StandardizeResult {
  WeightedGraph graph;
  RewriteTrace trace;
};

/// Rewrites a forest to a flow-plus-contraction normal form whose
/// segments are standard. Deterministic; already-standard inputs return
/// unchanged with an empty trace. Inputs whose intersection form has
/// more than one non-negative eigenvalue per component cannot bound a
/// surface and are rejected (NOT_A_BOUNDARY_CLASS).
StandardizeResult standardize(const WeightedGraph& g);

struct ReversionResult {
  WeightedGraph graph;
  Flow flow;
  std::vector<VertexId> segment;  // the reversed segment, new ids
};

/// Moves the leading zero pair of a segment [0,0,a_1..a_n] to the other
/// end, producing [a_1..a_n,0,0] as an inner flow. The recorded flow is
/// nontrivial even when the weight sequence is symmetric.
ReversionResult reversion(const WeightedGraph& g, const std::vector<VertexId>& segment);

/// (n_plus, n_minus, n_zero) of the intersection form, computed exactly
/// by rational congruence diagonalization.
struct Signature {
  int plus = 0, minus = 0, zero = 0;
};
Signature signature(const WeightedGraph& g);

}  // namespace qhp
