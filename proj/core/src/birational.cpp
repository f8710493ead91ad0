#include "qhp/birational.hpp"

#include <algorithm>

namespace qhp {

BlowupResult blowup(const WeightedGraph& g, const BlowupStep& step) {
  WeightedGraph out = g;
  if (step.kind == BlowupStep::Kind::Sprouting) {
    const Vertex& v = out.vertex(step.a);
    out.set_weight(step.a, v.weight - 1);
    VertexId c = out.add_vertex(-1, 0);
    out.add_edge(step.a, c);
    return {std::move(out), c};
  }
  if (out.edge_multiplicity(step.a, step.b) == 0)
    throw domain_error("UNKNOWN_EDGE", "subdivisional blowup needs an existing edge");
  out.remove_one_edge(step.a, step.b);
  out.set_weight(step.a, out.vertex(step.a).weight - 1);
  out.set_weight(step.b, out.vertex(step.b).weight - 1);
  VertexId c = out.add_vertex(-1, 0);
  out.add_edge(step.a, c);
  out.add_edge(c, step.b);
  return {std::move(out), c};
}

WeightedGraph blowdown(const WeightedGraph& g, VertexId v) {
  const Vertex& vx = g.vertex(v);
  if (vx.weight != -1 || vx.genus != 0)
    throw domain_error("NOT_CONTRACTIBLE", "blowdown needs a genus-0 vertex of weight -1");
  auto nbrs = g.neighbors(v);
  if (nbrs.size() > 2)
    throw domain_error("NOT_CONTRACTIBLE", "blowdown vertex must be non-branching");
  if (nbrs.size() == 2 && nbrs[0] == nbrs[1])
    throw domain_error("NOT_CONTRACTIBLE", "blowdown neighbors must be distinct");
  WeightedGraph out = g;
  out.remove_vertex(v);
  for (VertexId n : nbrs) out.set_weight(n, out.vertex(n).weight + 1);
  if (nbrs.size() == 2) out.add_edge(nbrs[0], nbrs[1]);
  return out;
}

ElementaryResult elementary_transform(const WeightedGraph& g,
                                      const ElementaryTransformation& t) {
  const Vertex& z = g.vertex(t.zero_vertex);
  if (z.weight != 0 || z.genus != 0)
    throw domain_error("NOT_A_ZERO_VERTEX", "elementary transformation needs weight 0");
  std::size_t beta = g.degree(t.zero_vertex);
  if (beta > 2)
    throw domain_error("BRANCHING_ZERO_VERTEX", "zero vertex must be non-branching");
  BlowupResult up;
  if (t.center_side) {
    if (g.edge_multiplicity(t.zero_vertex, *t.center_side) == 0)
      throw domain_error("UNKNOWN_EDGE", "center side must be a neighbor of the zero vertex");
    up = blowup(g, BlowupStep::subdivisional(t.zero_vertex, *t.center_side));
  } else {
    if (beta > 1)
      throw domain_error("OUTER_NEEDS_TIP",
                         "outer transformation needs branching number <= 1");
    up = blowup(g, BlowupStep::sprouting(t.zero_vertex));
  }
  WeightedGraph down = blowdown(up.graph, t.zero_vertex);
  return {std::move(down), up.created};
}

WeightedGraph apply_flow(const WeightedGraph& g, const Flow& f) {
  WeightedGraph cur = g;
  for (const auto& t : f) cur = elementary_transform(cur, t).graph;
  return cur;
}

WeightedGraph apply_trace(const WeightedGraph& g, const RewriteTrace& trace) {
  WeightedGraph cur = g;
  for (const auto& step : trace) {
    if (const auto* b = std::get_if<BlowupStep>(&step)) {
      cur = blowup(cur, *b).graph;
    } else if (const auto* d = std::get_if<BlowdownStep>(&step)) {
      cur = blowdown(cur, d->vertex);
    } else {
      cur = elementary_transform(cur, std::get<ElementaryTransformation>(step)).graph;
    }
  }
  return cur;
}

std::vector<Segment> segments(const WeightedGraph& g) {
  if (!g.is_forest()) throw domain_error("NOT_FOREST", "segments require a forest");
  std::vector<VertexId> keep;
  for (const auto& v : g.vertices())
    if (v.genus == 0 && g.degree(v.id) <= 2) keep.push_back(v.id);
  WeightedGraph sub = g.induced_subgraph(keep);
  std::vector<Segment> out;
  for (const auto& comp : sub.connected_components()) {
    WeightedGraph piece = sub.induced_subgraph(comp);
    auto order = piece.linear_order();
    if (!order) throw domain_error("INTERNAL", "segment is not linear");
    Segment s;
    s.order = *order;
    for (VertexId id : s.order) s.chain.entries.push_back(-g.vertex(id).weight);
    auto outside_nbr = [&](VertexId id) {
      for (VertexId n : g.neighbors(id))
        if (!piece.has_vertex(n)) return true;
      return false;
    };
    s.attached_front = outside_nbr(s.order.front());
    s.attached_back = outside_nbr(s.order.back());
    // single vertex: one flag per outside neighbor
    if (s.order.size() == 1) {
      std::size_t outside = 0;
      for (VertexId n : g.neighbors(s.order[0]))
        if (!piece.has_vertex(n)) ++outside;
      s.attached_front = outside >= 1;
      s.attached_back = outside >= 2;
    }
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

bool component_is_bracket_one(const WeightedGraph& g, const std::vector<VertexId>& comp) {
  return comp.size() == 1 && g.degree(comp[0]) == 0 && g.vertex(comp[0]).weight == -1 &&
         g.vertex(comp[0]).genus == 0;
}

bool segment_entries_balanced(const std::vector<std::int64_t>& e) {
  return std::all_of(e.begin(), e.end(),
                     [](std::int64_t a) { return a == 0 || a >= 2; });
}

bool standard_shape_oriented(const std::vector<std::int64_t>& e) {
  // [0], [0,0,0], or [0^{2k}, a1..an] with k in {0,1}, ai >= 2.
  if (e.size() == 1 && e[0] == 0) return true;
  if (e.size() == 3 && e[0] == 0 && e[1] == 0 && e[2] == 0) return true;
  std::size_t zeros = 0;
  while (zeros < e.size() && e[zeros] == 0) ++zeros;
  if (zeros != 0 && zeros != 2) return false;
  for (std::size_t i = zeros; i < e.size(); ++i)
    if (e[i] < 2) return false;
  return e.size() > zeros || zeros == 2;  // [0,0] allowed, bare [] is not a segment
}

bool segment_is_standard(const Segment& s) {
  auto rev = s.chain.entries;
  std::reverse(rev.begin(), rev.end());
  return standard_shape_oriented(s.chain.entries) || standard_shape_oriented(rev);
}

bool segment_is_special_zero(const Segment& s) {
  const auto& e = s.chain.entries;
  return (e.size() == 1 && e[0] == 0) ||
         (e.size() == 3 && e[0] == 0 && e[1] == 0 && e[2] == 0);
}

}  // namespace

bool is_balanced(const WeightedGraph& g) {
  if (!g.is_forest()) throw domain_error("NOT_FOREST", "balanced requires a forest");
  auto comps = g.connected_components();
  for (const Segment& s : segments(g)) {
    if (segment_entries_balanced(s.chain.entries)) continue;
    // a whole component equal to [1] is balanced
    if (s.chain.entries == std::vector<std::int64_t>{1} && !s.attached_front &&
        !s.attached_back)
      continue;
    return false;
  }
  return true;
}

bool is_standard(const WeightedGraph& g) {
  if (!g.is_forest()) throw domain_error("NOT_FOREST", "standard requires a forest");
  auto comps = g.connected_components();
  std::vector<std::vector<VertexId>> nontrivial;
  for (const auto& c : comps)
    if (!component_is_bracket_one(g, c)) nontrivial.push_back(c);
  if (nontrivial.empty()) return true;
  std::vector<VertexId> keep;
  for (const auto& c : nontrivial) keep.insert(keep.end(), c.begin(), c.end());
  WeightedGraph rest = g.induced_subgraph(keep);
  for (const Segment& s : segments(rest))
    if (!segment_is_standard(s)) return false;
  return true;
}

bool is_strongly_balanced(const WeightedGraph& g) {
  if (!is_standard(g)) return false;
  std::vector<Segment> zero_segments;
  for (const Segment& s : segments(g))
    if (segment_is_special_zero(s)) zero_segments.push_back(s);
  if (zero_segments.empty()) return true;
  for (const Segment& s : zero_segments) {
    for (VertexId v : s.order) {
      for (VertexId n : g.neighbors(v)) {
        bool inside = std::find(s.order.begin(), s.order.end(), n) != s.order.end();
        if (!inside && g.vertex(n).weight == 0) return true;
      }
    }
  }
  return false;
}

Signature signature(const WeightedGraph& g) {
  IntMatrix q = intersection_matrix(g);
  std::size_t n = q.size();
  std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = Rat(q.at(i, j));
  Signature sig;
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t j = k + 1;
      while (j < n && a[j][j] == 0) ++j;
      if (j < n) {
        std::swap(a[k], a[j]);
        for (std::size_t i = 0; i < n; ++i) std::swap(a[i][k], a[i][j]);
      } else {
        j = k + 1;
        while (j < n && a[k][j] == 0) ++j;
        if (j == n) {
          ++sig.zero;
          continue;
        }
        // congruence: row_k += row_j, col_k += col_j makes the pivot 2*a[k][j]
        for (std::size_t i = 0; i < n; ++i) a[k][i] += a[j][i];
        for (std::size_t i = 0; i < n; ++i) a[i][k] += a[i][j];
      }
    }
    Rat pivot = a[k][k];
    if (pivot > 0) ++sig.plus;
    else ++sig.minus;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      Rat f = a[i][k] / pivot;
      for (std::size_t j2 = 0; j2 < n; ++j2) a[i][j2] -= f * a[k][j2];
      for (std::size_t j2 = 0; j2 < n; ++j2) a[j2][i] -= f * a[j2][k];
    }
  }
  return sig;
}

// ---------------------------------------------------------------------------
// Normalization to standard form.
// ---------------------------------------------------------------------------

namespace {

class Normalizer {
 public:
  explicit Normalizer(WeightedGraph g) : g_(std::move(g)) {}

  StandardizeResult run() {
    int budget = 50000;
    while (!is_standard(g_)) {
      if (--budget < 0)
        throw domain_error("NOT_STANDARDIZABLE", "normalization did not terminate");
      if (minimalize_once()) continue;
      if (clear_one_negative()) continue;
      if (march_once()) continue;
      throw domain_error("NOT_SUPPORTED_SEGMENT",
                         "no applicable move; segment requires rewriting through a "
                         "branching or non-rational component");
    }
    return {std::move(g_), std::move(trace_)};
  }

 private:
  WeightedGraph g_;
  RewriteTrace trace_;

  void do_blowdown(VertexId v) {
    g_ = blowdown(g_, v);
    trace_.push_back(BlowdownStep{v});
  }
  VertexId do_blowup(const BlowupStep& s) {
    auto r = blowup(g_, s);
    g_ = std::move(r.graph);
    trace_.push_back(s);
    return r.created;
  }
  VertexId do_elem(const ElementaryTransformation& t) {
    auto r = elementary_transform(g_, t);
    g_ = std::move(r.graph);
    trace_.push_back(t);
    return r.new_zero;
  }

  bool minimalize_once() {
    auto comps = g_.connected_components();
    std::unordered_map<VertexId, std::size_t> comp_size;
    for (const auto& c : comps)
      for (VertexId v : c) comp_size[v] = c.size();
    for (const auto& v : g_.vertices()) {
      if (v.weight != -1 || v.genus != 0) continue;
      if (g_.degree(v.id) > 2) continue;
      if (comp_size[v.id] <= 1) continue;  // [1] components stay
      do_blowdown(v.id);
      return true;
    }
    return false;
  }

  struct Side {
    enum Kind { Vertex, Free, Wall } kind = Free;
    VertexId id = -1;
  };

  static Side side_of(const Segment& s, std::size_t i, int dir) {
    // dir = -1 left, +1 right along the segment order
    if (dir < 0) {
      if (i > 0) return {Side::Vertex, s.order[i - 1]};
      return {s.attached_front ? Side::Wall : Side::Free, -1};
    }
    if (i + 1 < s.order.size()) return {Side::Vertex, s.order[i + 1]};
    return {s.attached_back ? Side::Wall : Side::Free, -1};
  }

  /// True when every neighbor of v is a non-branching genus-0 vertex, so
  /// transformations at v cannot touch a wall.
  bool ends_clear(VertexId v) const {
    for (VertexId nb : g_.neighbors(v)) {
      const Vertex& vx = g_.vertex(nb);
      if (vx.genus != 0 || g_.degree(nb) > 2) return false;
    }
    return true;
  }

  /// Entry <= -1 (weight >= 1) at segment position i. If an adjacent
  /// segment vertex is a zero, pull units through it by inner
  /// transformations; otherwise grow a chain of blowups on one side until
  /// the vertex reaches weight 0 and drain the leftover (-1)-curve to the
  /// other side.
  bool clear_one_negative() {
    for (const Segment& s : segments(g_)) {
      for (std::size_t i = 0; i < s.order.size(); ++i) {
        if (s.chain.entries[i] >= 0) continue;
        VertexId u = s.order[i];
        std::int64_t need = -s.chain.entries[i];
        for (int dir : {-1, +1}) {
          std::size_t j = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + dir);
          if (dir < 0 && i == 0) continue;
          if (dir > 0 && i + 1 >= s.order.size()) continue;
          if (s.chain.entries[j] != 0) continue;
          VertexId z = s.order[j];
          if (!ends_clear(z)) continue;  // its far side is a wall
          for (std::int64_t t = 0; t < need; ++t)
            z = do_elem(ElementaryTransformation::inner(z, u));
          return true;
        }
        Side left = side_of(s, i, -1), right = side_of(s, i, +1);
        // two-sided attachment of a single vertex
        if (s.order.size() == 1 && s.attached_back) left = right = {Side::Wall, -1};
        auto growable = [&](const Side& sd) { return sd.kind != Side::Wall; };
        auto drainable = [&](const Side& sd) {
          // draining bumps the receiving vertex by one; a 0-weight
          // receiver would turn into a (-1)-curve and undo the unwind
          if (sd.kind == Side::Wall) return false;
          return sd.kind != Side::Vertex || g_.vertex(sd.id).weight != 0;
        };
        Side grow, drain;
        if (growable(right) && drainable(left)) {
          grow = right;
          drain = left;
        } else if (growable(left) && drainable(right)) {
          grow = left;
          drain = right;
        } else {
          throw domain_error("NOT_SUPPORTED_SEGMENT",
                             "positive-weight vertex wedged against branching components");
        }
        VertexId last = -1;
        for (std::int64_t t = 0; t < need; ++t) {
          if (t == 0) {
            last = grow.kind == Side::Vertex ? do_blowup(BlowupStep::subdivisional(u, grow.id))
                                             : do_blowup(BlowupStep::sprouting(u));
          } else {
            last = do_blowup(BlowupStep::subdivisional(u, last));
          }
        }
        // u now has weight 0; `last` is a (-1)-curve next to it
        if (drain.kind == Side::Vertex)
          do_elem(ElementaryTransformation::inner(u, drain.id));
        else
          do_elem(ElementaryTransformation::outer(u));
        return true;
      }
    }
    return false;
  }

  /// One zero-marching batch inside the first non-standard segment.
  bool march_once() {
    for (const Segment& s0 : segments(g_)) {
      if (segment_is_standard(s0)) continue;
      // local orientation: zeros head toward a free end when one exists
      Segment s = s0;
      if (s.attached_front && !s.attached_back) {
        std::reverse(s.order.begin(), s.order.end());
        std::reverse(s.chain.entries.begin(), s.chain.entries.end());
        std::swap(s.attached_front, s.attached_back);
      }
      const auto& e = s.chain.entries;
      std::size_t m = e.size();
      std::size_t i = 0;
      while (i < m && e[i] != 0) ++i;
      if (i == m) continue;  // no zero: all >= 2 handled by the standard check
      if (i == 0) {
        if (m == 1) continue;  // [0]
        if (e[1] == 0)
          throw domain_error("NOT_STANDARDIZABLE",
                             "zero pair with further zeros in one segment");
        if (s.attached_front)
          throw domain_error("NOT_SUPPORTED_SEGMENT",
                             "single zero pinned to a branching component");
        // [0, c, ...] with a free tip: kill c by outer transformations
        VertexId z = s.order[0];
        std::int64_t c = e[1];
        for (std::int64_t t = 0; t < c; ++t) z = do_elem(ElementaryTransformation::outer(z));
        return true;
      }
      std::int64_t x = e[i - 1];
      VertexId z = s.order[i];
      if (i + 1 < m) {
        // [..., x, 0, y, ...]: pour x across the zero
        for (std::int64_t t = 0; t < x; ++t)
          z = do_elem(ElementaryTransformation::inner(z, s.order[i + 1]));
        return true;
      }
      // zero at the far end
      if (s.attached_back)
        throw domain_error("NOT_SUPPORTED_SEGMENT",
                           "single zero pinned to a branching component");
      for (std::int64_t t = 0; t < x; ++t) z = do_elem(ElementaryTransformation::outer(z));
      return true;
    }
    return false;
  }
};

}  // namespace

StandardizeResult standardize(const WeightedGraph& g) {
  if (!g.is_forest()) throw domain_error("NOT_FOREST", "standardize requires a forest");
  for (const auto& comp : g.connected_components()) {
    Signature sig = signature(g.induced_subgraph(comp));
    if (sig.plus > 1 || sig.zero > 1)
      throw domain_error("NOT_A_BOUNDARY_CLASS",
                         "component intersection form has more than one non-negative "
                         "eigenvalue; no standard completion exists");
  }
  if (is_standard(g)) return {g, {}};
  return Normalizer(g).run();
}

ReversionResult reversion(const WeightedGraph& g, const std::vector<VertexId>& segment) {
  if (segment.size() < 2)
    throw domain_error("BAD_SEGMENT", "reversion needs a segment [0,0,a_1..a_n]");
  for (std::size_t idx = 0; idx + 1 < segment.size(); ++idx)
    if (g.edge_multiplicity(segment[idx], segment[idx + 1]) == 0)
      throw domain_error("BAD_SEGMENT", "segment vertices must form a path");
  for (std::size_t idx = 0; idx < segment.size(); ++idx) {
    const Vertex& v = g.vertex(segment[idx]);
    if (v.genus != 0 || g.degree(v.id) > 2)
      throw domain_error("BAD_SEGMENT", "segment must avoid branching and genus");
    if (idx < 2 && v.weight != 0)
      throw domain_error("BAD_SEGMENT", "segment must start with two zeros");
    if (idx >= 2 && v.weight == 0)
      throw domain_error("BAD_SEGMENT", "segment tail entries must be nonzero");
  }

  ReversionResult out;
  out.graph = g;
  auto run_elem = [&out](const ElementaryTransformation& t) {
    auto r = elementary_transform(out.graph, t);
    out.flow.push_back(t);
    out.graph = std::move(r.graph);
    return r.new_zero;
  };

  std::vector<VertexId> cur = segment;
  if (cur.size() == 2) {
    // Nothing to move, but a reversion must still be a nontrivial flow
    // even for symmetric segments: slosh one unit out and back.
    VertexId z = -1, anchor = -1;
    if (g.degree(cur[1]) <= 1) {
      z = cur[1];
      anchor = cur[0];
    } else if (g.degree(cur[0]) <= 1) {
      z = cur[0];
      anchor = cur[1];
    } else {
      throw domain_error("BAD_SEGMENT", "zero pair attached on both ends");
    }
    VertexId nz = run_elem(ElementaryTransformation::outer(z));
    VertexId nz2 = run_elem(ElementaryTransformation::inner(nz, anchor));
    out.segment = {anchor, nz2};
    if (anchor == cur[1]) std::reverse(out.segment.begin(), out.segment.end());
    return out;
  }
  // Walk the zero pair rightward. At each stage the window is
  // [p(0), q(0), a(value), ...]; |value| inner transformations at q pour
  // the value onto p, leaving [p(value), q'(0), a(0), ...], so the pair
  // has advanced one position.
  for (std::size_t w = 0; w + 2 < cur.size(); ++w) {
    VertexId p = cur[w], av = cur[w + 2];
    std::int64_t val = -out.graph.vertex(av).weight;
    VertexId zq = cur[w + 1];
    std::int64_t steps = val > 0 ? val : -val;
    for (std::int64_t t = 0; t < steps; ++t)
      zq = run_elem(ElementaryTransformation::inner(zq, val > 0 ? p : av));
    cur[w + 1] = zq;
  }
  out.segment = cur;
  return out;
}

}  // namespace qhp
