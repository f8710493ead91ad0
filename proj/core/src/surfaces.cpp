#include "qhp/surfaces.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace qhp {

std::string to_string(ConstructionKind k) {
  switch (k) {
    case ConstructionKind::AffineRuled: return "affine-ruled";
    case ConstructionKind::Nonextendable: return "nonextendable";
    case ConstructionKind::Twisted: return "twisted";
    case ConstructionKind::UntwistedC1: return "untwisted-c1";
    case ConstructionKind::UntwistedP1: return "untwisted-p1";
  }
  return "?";
}

std::string to_string(F0Type t) {
  switch (t) {
    case F0Type::None: return "none";
    case F0Type::Ai: return "A.i";
    case F0Type::Aii: return "A.ii";
    case F0Type::Aiii: return "A.iii";
    case F0Type::Aiv: return "A.iv";
    case F0Type::Av: return "A.v";
    case F0Type::Bi: return "B.i";
    case F0Type::Bii: return "B.ii";
    case F0Type::Biii: return "B.iii";
    case F0Type::C: return "C";
  }
  return "?";
}

std::string to_string(KodairaDim k) {
  switch (k) {
    case KodairaDim::MinusInfinity: return "-inf";
    case KodairaDim::Zero: return "0";
    case KodairaDim::One: return "1";
    case KodairaDim::TwoExcluded: return "2";
    case KodairaDim::Undecided: return "undecided";
  }
  return "?";
}

KodairaDim sign_to_dim(const Rat& x) {
  if (x < 0) return KodairaDim::MinusInfinity;
  if (x == 0) return KodairaDim::Zero;
  return KodairaDim::One;
}

namespace {

/// Copies a locally-built fiber into the model's id space.
FiberTree offset_fiber(const FiberTree& f, VertexId base) {
  FiberTree out;
  for (const auto& v : f.graph.vertices())
    out.graph.add_vertex_with_id(v.id + base, v.weight, v.genus);
  for (const auto& [a, b] : f.graph.edges()) out.graph.add_edge(a + base, b + base);
  for (const auto& [v, m] : f.mult) out.mult[v + base] = m;
  for (const BlowupStep& s : f.history) {
    BlowupStep t = s;
    t.a += base;
    if (t.kind == BlowupStep::Kind::Subdivisional) t.b += base;
    out.history.push_back(t);
  }
  out.root = f.root + base;
  return out;
}

void add_subgraph(WeightedGraph& target, const WeightedGraph& src,
                  const std::vector<VertexId>& verts) {
  for (VertexId v : verts) {
    const Vertex& vx = src.vertex(v);
    target.add_vertex_with_id(vx.id, vx.weight, vx.genus);
  }
  for (const auto& [a, b] : src.edges()) {
    bool ina = std::find(verts.begin(), verts.end(), a) != verts.end();
    bool inb = std::find(verts.begin(), verts.end(), b) != verts.end();
    if (ina && inb) target.add_edge(a, b);
  }
}

Int b1_total(const WeightedGraph& g) {
  Int loops = Int(g.edges().size()) + Int(g.connected_components().size()) - Int(g.size());
  Int genus = 0;
  for (const auto& v : g.vertices()) genus += v.genus;
  return loops + 2 * genus;
}

}  // namespace

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

SurfaceModel construct_affine_ruled(const std::vector<AffineFiberSpec>& specs) {
  if (specs.empty())
    throw domain_error("NO_SINGULAR_FIBER", "affine-ruled construction needs m >= 1");
  SurfaceModel m;
  m.kind = ConstructionKind::AffineRuled;
  int n = static_cast<int>(specs.size());
  m.boundary.add_vertex_with_id(0, 0);       // fiber at infinity
  m.boundary.add_vertex_with_id(1, -1 - n);  // horizontal section
  m.boundary.add_edge(0, 1);
  m.d_horizontal = {1};
  m.ruling.h = 1;
  m.ruling.nu = 1;

  VertexId base = 2;
  std::vector<Int> d_boundary_parts;
  bool any_exceptional = false;
  for (const AffineFiberSpec& spec : specs) {
    if (spec.history.empty())
      throw domain_error("SMOOTH_FIBER_SPEC", "each fiber needs at least one blowup");
    if (spec.history[0].kind != BlowupStep::Kind::Sprouting || spec.history[0].a != 0)
      throw domain_error("FIRST_STEP_NOT_SECTION",
                         "fiber histories start by sprouting the root at the section");
    FiberTree local = fiber_from_history(spec.history);
    auto ones = local.minus_one_vertices();
    if (ones.size() != 1)
      throw domain_error("NOT_UNIQUE_EXCEPTIONAL",
                         "affine-ruled fibers need a unique (-1)-curve");
    VertexId c_local = ones[0];
    if (c_local == 1)
      throw domain_error("NOT_UNIQUE_EXCEPTIONAL", "the (-1)-curve meets the section");

    FiberTree fiber = offset_fiber(local, base);
    VertexId c = c_local + base;
    VertexId section_tip = 1 + base;

    std::vector<VertexId> others;
    for (const auto& v : fiber.graph.vertices())
      if (v.id != c) others.push_back(v.id);
    WeightedGraph rest = fiber.graph.induced_subgraph(others);
    std::vector<VertexId> d_part, e_part;
    for (const auto& comp : rest.connected_components()) {
      bool has_section = std::find(comp.begin(), comp.end(), section_tip) != comp.end();
      (has_section ? d_part : e_part).insert((has_section ? d_part : e_part).end(),
                                             comp.begin(), comp.end());
    }
    if (!e_part.empty()) {
      WeightedGraph e_piece = rest.induced_subgraph(e_part);
      if (!e_piece.linear_order())
        throw domain_error("E_NOT_CHAIN", "exceptional part of a fiber must be a chain");
      any_exceptional = true;
      add_subgraph(m.exceptional, rest, e_part);
      m.d_e_i.push_back(discriminant(e_piece));
    } else {
      m.d_e_i.push_back(1);
    }
    add_subgraph(m.boundary, rest, d_part);
    m.boundary.add_edge(1, section_tip);
    d_boundary_parts.push_back(discriminant(rest.induced_subgraph(d_part)));

    TaggedFiber tf;
    tf.fiber = fiber;
    for (VertexId v : d_part) tf.tags[v] = Ownership::Boundary;
    for (VertexId v : e_part) tf.tags[v] = Ownership::Exceptional;
    tf.tags[c] = Ownership::Open;
    m.mu.push_back(fiber.mu(c));
    m.ruling.fibers.push_back(std::move(tf));
    base += static_cast<VertexId>(fiber.graph.size());
  }
  if (!any_exceptional)
    throw domain_error("NO_SINGULAR_FIBER",
                       "at least one fiber must have nonempty exceptional part (m >= 1)");

  Int dd = discriminant(m.boundary);
  Int prod = -1;
  for (const Int& di : d_boundary_parts) prod *= di;
  if (dd != prod)
    throw domain_error("INTERNAL", "d(D) != -prod d(D_i): " + dd.str() + " vs " + prod.str());
  m.n_columnar = n;
  m.b2_total = Int(m.boundary.size()) + Int(m.exceptional.size());
  return m;
}

SurfaceModel construct_nonextendable(const Int& N, std::int64_t genus,
                                     const std::vector<Rat>& tilde_e_list) {
  if (N < 1) throw domain_error("BAD_N", "N must be a positive integer");
  Rat sum(0);
  for (const Rat& q : tilde_e_list) {
    if (!(q > 0 && q < 1))
      throw domain_error("BAD_FRACTION", "tilde-e values lie strictly between 0 and 1");
    sum += q;
  }
  if (!(sum < Rat(N)))
    throw domain_error("E_SUM_TOO_LARGE", "sum of tilde-e must be smaller than N");
  int n = static_cast<int>(tilde_e_list.size());
  if (n < 3 && genus <= 0)
    throw domain_error("G_POSITIVE_REQUIRED", "g(B) > 0 is required when n < 3");

  SurfaceModel m;
  m.kind = ConstructionKind::Nonextendable;
  m.ruling.h = 2;
  m.ruling.nu = 0;
  m.ruling.base_genus = genus;
  std::int64_t big_n = static_cast<std::int64_t>(N);
  m.boundary.add_vertex_with_id(0, big_n - n, genus);
  m.exceptional.add_vertex_with_id(1, -big_n, genus);
  m.d_horizontal = {0};
  m.e_horizontal = {1};

  VertexId base = 2;
  Rat d_e_product(1);
  for (const Rat& q : tilde_e_list) {
    ColumnarFiber col = columnar_from_tilde_e(q);
    FiberTree fiber = offset_fiber(col.fiber, base);
    auto shift = [base](std::vector<VertexId> v) {
      for (auto& x : v) x += base;
      return v;
    };
    std::vector<VertexId> a_side = shift(col.a_side), b_side = shift(col.b_side);
    VertexId c = col.c + base;

    add_subgraph(m.boundary, fiber.graph, a_side);
    m.boundary.add_edge(0, a_side.back());
    add_subgraph(m.exceptional, fiber.graph, b_side);
    m.exceptional.add_edge(1, b_side.back());

    TaggedFiber tf;
    tf.fiber = fiber;
    for (VertexId v : a_side) tf.tags[v] = Ownership::Boundary;
    for (VertexId v : b_side) tf.tags[v] = Ownership::Exceptional;
    tf.tags[c] = Ownership::Open;
    m.ruling.fibers.push_back(std::move(tf));

    Int dei = discriminant(col.b_chain());
    if (dei != col.mu) throw domain_error("INTERNAL", "columnar d(E_i) != mu");
    m.mu.push_back(col.mu);
    m.d_e_i.push_back(dei);
    d_e_product *= Rat(dei);
    base += static_cast<VertexId>(fiber.graph.size());
  }
  m.n_columnar = n;

  // d(E) = d(E_1)...d(E_n) (N - sum tilde_e) > 0, and d(D) = -d(E)
  Rat de_formula = d_e_product * (Rat(N) - sum);
  if (!is_integer(de_formula) || de_formula <= 0)
    throw domain_error("INTERNAL", "d(E) formula is not a positive integer");
  Int de = discriminant(m.exceptional);
  if (Rat(de) != de_formula)
    throw domain_error("INTERNAL", "d(E) mismatch: " + de.str());
  Int dd = discriminant(m.boundary);
  if (dd != -de) throw domain_error("INTERNAL", "d(D) != -d(E)");
  m.b2_total = Int(m.boundary.size()) + Int(m.exceptional.size());
  return m;
}

// ---------------------------------------------------------------------------
// C*-ruled constructions
// ---------------------------------------------------------------------------

namespace {

struct F0Builder {
  FiberTree fiber;  // local ids
  std::array<VertexId, 2> slot{-1, -1};
  std::array<int, 2> slot_sprouts{0, 0};
  int slot_count = 1;
  bool eta_trivial = true;
  VertexId last = -1;
  VertexId ctilde = -1;  // base (-1)-curve (or root), untwisted kinds

  void apply(const CstarF0Step& s) {
    if (s.kind == CstarF0Step::Kind::Sprout) {
      if (!fiber.graph.has_vertex(s.a))
        throw domain_error("UNKNOWN_VERTEX", "F0 step references a missing vertex");
      if (last != -1 && s.a != last)
        throw domain_error("NOT_CONNECTED_SEQUENCE",
                           "each F0 center must lie on the previous exceptional curve");
      if (s.at_slot >= 0) {
        if (s.at_slot >= slot_count || slot[s.at_slot] != s.a)
          throw domain_error("SLOT_NOT_HERE", "section does not meet that component");
      } else {
        eta_trivial = false;
      }
      auto r = blowup(fiber.graph, BlowupStep::sprouting(s.a));
      fiber.mult[r.created] = fiber.mult.at(s.a);
      fiber.history.push_back(BlowupStep::sprouting(s.a));
      fiber.graph = std::move(r.graph);
      if (s.at_slot >= 0) {
        slot[s.at_slot] = r.created;
        ++slot_sprouts[s.at_slot];
      }
      last = r.created;
    } else {
      if (fiber.graph.edge_multiplicity(s.a, s.b) == 0)
        throw domain_error("UNKNOWN_EDGE", "F0 step references a missing edge");
      if (last != -1 && s.a != last && s.b != last)
        throw domain_error("NOT_CONNECTED_SEQUENCE",
                           "each F0 center must lie on the previous exceptional curve");
      auto r = blowup(fiber.graph, BlowupStep::subdivisional(s.a, s.b));
      fiber.mult[r.created] = fiber.mult.at(s.a) + fiber.mult.at(s.b);
      fiber.history.push_back(BlowupStep::subdivisional(s.a, s.b));
      fiber.graph = std::move(r.graph);
      last = r.created;
    }
  }
};

}  // namespace

SurfaceModel construct_cstar(const CstarParams& p) {
  if (p.kind != ConstructionKind::Twisted && p.kind != ConstructionKind::UntwistedC1 &&
      p.kind != ConstructionKind::UntwistedP1)
    throw domain_error("BAD_KIND", "construct_cstar needs a C*-ruled kind");

  // F0 local build
  F0Builder f0;
  std::optional<ColumnarFiber> f0_base_col;
  if (p.kind == ConstructionKind::Twisted) {
    f0.fiber = fiber_from_history({BlowupStep::sprouting(0), BlowupStep::subdivisional(0, 1)});
    f0.slot_count = 1;
    f0.slot[0] = 2;  // the 2-section meets the middle (-1)-curve
  } else {
    f0.slot_count = 2;
    if (p.f0_base) {
      f0_base_col = columnar_from_tilde_e(*p.f0_base);
      f0.fiber = f0_base_col->fiber;
      f0.slot[0] = f0_base_col->a_side.back();
      f0.slot[1] = f0_base_col->b_side.back();
      f0.ctilde = f0_base_col->c;
    } else {
      f0.fiber = fiber_from_history({});
      f0.slot[0] = f0.slot[1] = f0.fiber.root;
      f0.ctilde = f0.fiber.root;
    }
  }

  // first-step constraints per case
  if (p.kind == ConstructionKind::UntwistedC1) {
    if (p.f0_steps.empty())
      throw domain_error("EMPTY_F0_SEQUENCE", "base-C1 case needs a nonempty F0 sequence");
    const CstarF0Step& s0 = p.f0_steps.front();
    bool on_ctilde_interior =
        s0.kind == CstarF0Step::Kind::Sprout && s0.a == f0.ctilde && s0.at_slot < 0;
    if (on_ctilde_interior)
      throw domain_error("BAD_FIRST_CENTER",
                         "the first center must lie on D_1 + F0~ - C~");
  }
  if (p.kind == ConstructionKind::UntwistedP1) {
    if (p.f0_steps.empty())
      throw domain_error("EMPTY_F0_SEQUENCE", "base-P1 case needs a nonempty F0 sequence");
    const CstarF0Step& s0 = p.f0_steps.front();
    if (s0.kind != CstarF0Step::Kind::Sprout || s0.a != f0.ctilde || s0.at_slot >= 0)
      throw domain_error("BAD_FIRST_CENTER",
                         "the base-P1 sequence starts with a sprouting blowup on B");
  }
  for (const CstarF0Step& s : p.f0_steps) f0.apply(s);

  VertexId c_local;
  if (p.kind == ConstructionKind::Twisted)
    c_local = p.f0_steps.empty() ? 2 : f0.last;
  else
    c_local = f0.last;
  if (f0.fiber.graph.vertex(c_local).weight != -1)
    throw domain_error("INTERNAL", "F0's new curve is not a (-1)-curve");

  std::vector<VertexId> s0_set{c_local};
  if (p.kind == ConstructionKind::UntwistedC1) s0_set.push_back(f0.ctilde);

  // ownership inside F0: boundary components are those reachable from a
  // section attachment without passing through S0-components
  std::vector<VertexId> d_part, e_part;
  {
    std::vector<VertexId> keep;
    for (const auto& v : f0.fiber.graph.vertices())
      if (std::find(s0_set.begin(), s0_set.end(), v.id) == s0_set.end())
        keep.push_back(v.id);
    WeightedGraph rest = f0.fiber.graph.induced_subgraph(keep);
    for (const auto& comp : rest.connected_components()) {
      bool touches_section = false;
      for (int si = 0; si < f0.slot_count; ++si)
        if (std::find(comp.begin(), comp.end(), f0.slot[si]) != comp.end())
          touches_section = true;
      (touches_section ? d_part : e_part)
          .insert((touches_section ? d_part : e_part).end(), comp.begin(), comp.end());
    }
  }

  // both S0-components must meet the boundary in the (2,1) case
  bool s0_meet_d = true;
  for (VertexId s0v : s0_set) {
    bool meets = false;
    for (int si = 0; si < f0.slot_count; ++si)
      if (f0.slot[si] == s0v) meets = true;
    for (VertexId nb : f0.fiber.graph.neighbors(s0v))
      if (std::find(d_part.begin(), d_part.end(), nb) != d_part.end()) meets = true;
    if (!meets) s0_meet_d = false;
  }
  if (p.kind == ConstructionKind::UntwistedC1 && !s0_meet_d)
    throw domain_error("CLAUSE_II_VIOLATED",
                       "both S0-components of F0 must intersect the boundary");

  // columnar fibers
  std::vector<ColumnarFiber> cols;
  for (const Rat& q : p.columnar) cols.push_back(columnar_from_tilde_e(q));
  int n = static_cast<int>(cols.size());

  SurfaceModel m;
  m.kind = p.kind;
  m.eta_trivial = f0.eta_trivial;
  m.n_columnar = n;
  m.ruling.base_genus = 0;

  // section weights and global layout
  VertexId fiber_base = 0;
  int total_slot_sprouts = f0.slot_sprouts[0] + f0.slot_sprouts[1];
  if (p.kind == ConstructionKind::Twisted) {
    m.ruling.h = 1;
    m.ruling.nu = 1;
    m.boundary.add_vertex_with_id(0, -n - total_slot_sprouts);
    // fiber at infinity [2,1,2], the 2-section through the middle
    m.boundary.add_vertex_with_id(1, -2);
    m.boundary.add_vertex_with_id(2, -1);
    m.boundary.add_vertex_with_id(3, -2);
    m.boundary.add_edge(1, 2);
    m.boundary.add_edge(2, 3);
    m.boundary.add_edge(0, 2);
    m.d_horizontal = {0};
    fiber_base = 4;
  } else if (p.kind == ConstructionKind::UntwistedC1) {
    m.ruling.h = 2;
    m.ruling.nu = 1;
    std::int64_t touched = n + (p.f0_base ? 1 : 0);
    m.boundary.add_vertex_with_id(0, 1 - touched - f0.slot_sprouts[0]);
    m.boundary.add_vertex_with_id(1, -1 - f0.slot_sprouts[1]);
    m.boundary.add_vertex_with_id(2, 0);  // smooth fiber at infinity
    m.boundary.add_edge(0, 2);
    m.boundary.add_edge(1, 2);
    m.d_horizontal = {0, 1};
    fiber_base = 3;
  } else {
    m.ruling.h = 2;
    m.ruling.nu = 0;
    std::int64_t N = static_cast<std::int64_t>(p.p1_degree);
    if (N < 1) throw domain_error("BAD_N", "the Hirzebruch degree must be positive");
    std::int64_t touched = n + (p.f0_base ? 1 : 0);
    m.boundary.add_vertex_with_id(0, N - touched - f0.slot_sprouts[0]);
    m.boundary.add_vertex_with_id(1, -N - f0.slot_sprouts[1]);
    m.d_horizontal = {0, 1};
    fiber_base = 2;
  }

  // columnar fibers attach: slot 0 section takes the A side, slot 1 (or
  // the 2-section again, twisted) takes the B side
  for (ColumnarFiber& col : cols) {
    FiberTree fiber = offset_fiber(col.fiber, fiber_base);
    auto shift = [fiber_base](std::vector<VertexId> v) {
      for (auto& x : v) x += fiber_base;
      return v;
    };
    std::vector<VertexId> a_side = shift(col.a_side), b_side = shift(col.b_side);
    VertexId c = col.c + fiber_base;
    add_subgraph(m.boundary, fiber.graph, a_side);
    add_subgraph(m.boundary, fiber.graph, b_side);
    VertexId a_section = 0;
    VertexId b_section = p.kind == ConstructionKind::Twisted ? 0 : 1;
    m.boundary.add_edge(a_section, a_side.back());
    m.boundary.add_edge(b_section, b_side.back());
    TaggedFiber tf;
    tf.fiber = fiber;
    for (VertexId v : a_side) tf.tags[v] = Ownership::Boundary;
    for (VertexId v : b_side) tf.tags[v] = Ownership::Boundary;
    tf.tags[c] = Ownership::Open;
    m.mu.push_back(fiber.mu(c));
    m.d_e_i.push_back(1);
    m.ruling.fibers.push_back(std::move(tf));
    fiber_base += static_cast<VertexId>(fiber.graph.size());
  }

  // F0
  {
    FiberTree fiber = offset_fiber(f0.fiber, fiber_base);
    auto g = [fiber_base](VertexId v) { return v == -1 ? -1 : v + fiber_base; };
    std::vector<VertexId> d_glob, e_glob;
    for (VertexId v : d_part) d_glob.push_back(g(v));
    for (VertexId v : e_part) e_glob.push_back(g(v));
    add_subgraph(m.boundary, fiber.graph, d_glob);
    add_subgraph(m.exceptional, fiber.graph, e_glob);
    for (int si = 0; si < f0.slot_count; ++si) {
      VertexId sv = g(f0.slot[si]);
      if (std::find(d_glob.begin(), d_glob.end(), sv) != d_glob.end()) {
        VertexId section = p.kind == ConstructionKind::Twisted ? 0 : (si == 0 ? 0 : 1);
        m.boundary.add_edge(section, sv);
      }
    }
    TaggedFiber tf;
    tf.fiber = fiber;
    for (VertexId v : d_glob) tf.tags[v] = Ownership::Boundary;
    for (VertexId v : e_glob) tf.tags[v] = Ownership::Exceptional;
    for (VertexId v : s0_set) tf.tags[g(v)] = Ownership::Open;
    m.f0_index = m.ruling.fibers.size();
    m.f0_c = g(c_local);
    m.f0_ctilde = p.kind == ConstructionKind::Twisted ? -1 : g(f0.ctilde);
    m.mu_c = fiber.mu(m.f0_c);
    m.mu_ctilde = m.f0_ctilde == -1 ? Int(0) : fiber.mu(m.f0_ctilde);
    m.s0_components_meet_d = s0_meet_d;
    m.ruling.fibers.push_back(std::move(tf));

    // F0 type
    const WeightedGraph& fg = m.ruling.fibers[m.f0_index].fiber.graph;
    if (p.kind == ConstructionKind::Twisted) {
      VertexId b_vertex = g(f0.slot[0]);
      if (!m.eta_trivial) {
        m.f0_type = F0Type::Av;
      } else if (fg.size() == 3) {
        m.f0_type = F0Type::Ai;
      } else if (fg.degree(b_vertex) <= 1) {
        m.f0_type = F0Type::Aiv;
      } else if (fg.edge_multiplicity(m.f0_c, b_vertex) > 0) {
        m.f0_type = F0Type::Aii;
      } else if (fg.linear_order()) {
        m.f0_type = F0Type::Aiii;
      } else {
        throw domain_error("INTERNAL", "unclassified twisted F0");
      }
    } else if (p.kind == ConstructionKind::UntwistedC1) {
      if (!m.eta_trivial)
        m.f0_type = F0Type::Biii;
      else if (fg.vertex(m.f0_ctilde).weight == -1)
        m.f0_type = F0Type::Bi;
      else
        m.f0_type = F0Type::Bii;
    } else {
      m.f0_type = F0Type::C;
    }
  }

  if (!m.boundary.is_connected())
    throw domain_error("BOUNDARY_DISCONNECTED", "the boundary divisor must be connected");

  // base-P1 nondegeneracy: removing the rivet must leave at least one
  // component with nonzero discriminant
  if (p.kind == ConstructionKind::UntwistedP1) {
    WeightedGraph cut = m.boundary;
    if (std::find(d_part.begin(), d_part.end(), f0.ctilde) == d_part.end())
      throw domain_error("INTERNAL", "base-P1 rivet is not a boundary component");
    cut.remove_vertex(m.f0_ctilde);
    bool some_nondegenerate = false;
    for (const auto& comp : cut.connected_components())
      if (discriminant(cut.induced_subgraph(comp)) != 0) some_nondegenerate = true;
    if (!some_nondegenerate)
      throw domain_error("D0_COMPONENT_DEGENERATE",
                         "both components next to the rivet are degenerate");
  }

  Int dd = discriminant(m.boundary);
  if (dd == 0)
    throw domain_error("D_DEGENERATE", "d(D) = 0; the model is not Q-acyclic");
  m.b2_total = Int(m.boundary.size()) + Int(m.exceptional.size());
  return m;
}

// ---------------------------------------------------------------------------
// Validators and invariants
// ---------------------------------------------------------------------------

bool ValidatorReport::all_hard_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.pass || !c.hard; });
}

namespace {

/// d(T - attached end) / d(T) for a twig read tip-first; the identity
/// d(star) = prod d(T_i) (-w - sum of these ratios) drives the d(D) = 0
/// criteria. Works for any chain with d != 0.
std::optional<Rat> twig_ratio(const Chain& tip_first) {
  Int d = discriminant(tip_first);
  if (d == 0) return std::nullopt;
  Chain head(std::vector<std::int64_t>(tip_first.entries.begin(),
                                       tip_first.entries.end() - 1));
  return Rat(discriminant(head), d);
}

}  // namespace

ValidatorReport verify_qacyclicity(const SurfaceModel& m) {
  ValidatorReport out;
  auto add = [&out](std::string clause, bool pass, std::string detail = "",
                    bool hard = true) {
    out.checks.push_back({std::move(clause), pass, hard, std::move(detail)});
  };

  // shared support would make D and E intersect
  bool disjoint = true;
  for (const auto& v : m.exceptional.vertices())
    if (m.boundary.has_vertex(v.id)) disjoint = false;
  add("D and E disjoint", disjoint);

  add("unique horizontal boundary component", m.boundary.is_connected() &&
      std::all_of(m.d_horizontal.begin(), m.d_horizontal.end(),
                  [&](VertexId v) { return m.boundary.has_vertex(v); }));
  add("D is a tree", m.boundary.is_tree());
  add("b1(D) = b1(E)", b1_total(m.boundary) == b1_total(m.exceptional));
  add("nu <= 1", m.ruling.nu <= 1);

  bool sigma_ok = true;
  std::string sigma_detail;
  try {
    fujita_count(m.ruling, m.b2_total, Int(m.boundary.size()) + Int(m.exceptional.size()));
  } catch (const domain_error& e) {
    sigma_ok = false;
    sigma_detail = e.what();
  }
  add("Sigma = h + nu - 2", sigma_ok, sigma_detail);

  Int dd = discriminant(m.boundary);
  Int de = discriminant(m.exceptional);
  add("d(D) != 0", dd != 0, "d(D) = " + dd.str());
  add("d(D) < 0", dd < 0, "d(D) = " + dd.str());
  add("E negative definite", is_negative_definite(m.exceptional), "d(E) = " + de.str());
  add("d(D) d(E) < 0", dd * de < 0 || (m.exceptional.empty() && dd < 0));

  // the explicit d(D) = 0 criteria
  if (m.ruling.h == 2 && m.ruling.nu == 1)
    add("(2,1): S0-components of F0 meet D", m.s0_components_meet_d);
  if (m.ruling.h == 2 && m.ruling.nu == 0 && m.f0_ctilde != -1 &&
      m.boundary.has_vertex(m.f0_ctilde)) {
    WeightedGraph cut = m.boundary;
    cut.remove_vertex(m.f0_ctilde);
    auto comps = cut.connected_components();
    bool clause_iii = true;
    std::string detail;
    for (VertexId d0 : m.d_horizontal) {
      for (const auto& comp : comps) {
        if (std::find(comp.begin(), comp.end(), d0) == comp.end()) continue;
        WeightedGraph part = cut.induced_subgraph(comp);
        Int dpart = discriminant(part);
        detail += "d=" + dpart.str();
        // twig-sum route for the same condition
        WeightedGraph hung = part;
        hung.remove_vertex(d0);
        Rat sum(0);
        bool computable = true;
        for (const auto& tcomp : hung.connected_components()) {
          WeightedGraph tg = hung.induced_subgraph(tcomp);
          auto order = tg.linear_order();
          if (!order) {
            computable = false;
            break;
          }
          // tip-first: the attached end (meeting D0) goes last
          std::vector<VertexId> o = *order;
          if (part.edge_multiplicity(o.front(), d0) > 0) std::reverse(o.begin(), o.end());
          auto ratio = twig_ratio(Chain::from_graph(tg, o));
          if (!ratio) {
            computable = false;
            break;
          }
          sum += *ratio;
        }
        if (computable) {
          Rat rhs(-m.boundary.vertex(d0).weight);
          bool sum_route = sum != rhs;
          bool det_route = dpart != 0;
          detail += " sum=" + rational_to_string(sum) +
                    " -D0^2=" + rational_to_string(rhs);
          if (sum_route != det_route) detail += " (routes disagree)";
          clause_iii = clause_iii && sum_route && det_route;
        } else {
          clause_iii = clause_iii && dpart != 0;
        }
        detail += "; ";
      }
    }
    add("(2,0): twig sum differs from -D0^2", clause_iii, detail);
  }
  return out;
}

Int h1_order(const SurfaceModel& m) {
  if (b1_total(m.exceptional) != 0)
    throw domain_error("B1_NONZERO", "|H1| needs b1(E) = 0");
  Int dd = discriminant(m.boundary);
  Int de = discriminant(m.exceptional);
  if (de == 0) throw domain_error("E_DEGENERATE", "d(E) = 0");
  Int add = boost::multiprecision::abs(dd), ade = boost::multiprecision::abs(de);
  if (add % ade != 0)
    throw domain_error("NOT_INTEGRAL", "|d(D)| is not divisible by |d(E)|");
  auto root = perfect_sqrt(add / ade);
  if (!root)
    throw domain_error("NOT_PERFECT_SQUARE",
                       "|d(D)|/|d(E)| = " + Int(add / ade).str() + " is not a square");
  return *root;
}

std::vector<Int> h1_group_affine_ruled(const SurfaceModel& m) {
  if (m.kind != ConstructionKind::AffineRuled)
    throw domain_error("WRONG_KIND", "H1 group decomposition is for affine-ruled models");
  std::vector<Int> out;
  for (std::size_t i = 0; i < m.mu.size(); ++i) {
    if (m.mu[i] % m.d_e_i[i] != 0)
      throw domain_error("NOT_INTEGRAL", "mu(C_i) is not divisible by d(E_i)");
    out.push_back(m.mu[i] / m.d_e_i[i]);
  }
  return out;
}

KodairaSigns kodaira_table(F0Type type, int n, const std::vector<Int>& mu_list,
                           const Int& mu, const Int& mu_tilde) {
  int nu = type == F0Type::C ? 0 : 1;
  Rat lambda = Rat(n + nu - 1);
  for (const Int& mi : mu_list) lambda -= Rat(1, mi);
  Rat half(1, 2);
  KodairaSigns s;
  s.lambda = lambda;
  auto inv = [](const Int& x) { return Rat(1, x); };
  switch (type) {
    case F0Type::Ai: s.kappa = s.kappa0 = lambda - half; break;
    case F0Type::Aii: s.kappa = lambda - half; s.kappa0 = lambda - Rat(1, 2 * mu); break;
    case F0Type::Aiii: s.kappa = lambda - half; s.kappa0 = lambda; break;
    case F0Type::Aiv: s.kappa = lambda - half; s.kappa0 = lambda - inv(mu); break;
    case F0Type::Av: s.kappa = s.kappa0 = lambda; break;
    case F0Type::Bi:
      s.kappa = lambda - 1;
      s.kappa0 = lambda - inv(std::min(mu, mu_tilde));
      break;
    case F0Type::Bii: s.kappa = s.kappa0 = lambda - inv(std::min(mu, mu_tilde)); break;
    case F0Type::Biii: s.kappa = s.kappa0 = lambda - inv(mu); break;
    case F0Type::C: s.kappa = s.kappa0 = lambda; break;
    case F0Type::None:
      throw domain_error("F0_TYPE_UNRESOLVED", "no F0 case label");
  }
  s.dim_s = sign_to_dim(s.kappa);
  s.dim_s0 = sign_to_dim(s.kappa0);
  return s;
}

KodairaSigns kodaira_signs(const SurfaceModel& m) {
  if (m.kind != ConstructionKind::Twisted && m.kind != ConstructionKind::UntwistedC1 &&
      m.kind != ConstructionKind::UntwistedP1)
    throw domain_error("WRONG_KIND", "kodaira_signs applies to C*-ruled models");
  Int mu_eff = m.mu_c, mu_tilde_eff = m.mu_ctilde;
  if (m.f0_type == F0Type::Biii) {
    // take C to be the S0-component disjoint from E
    auto disjoint_from_e = [&](VertexId v) {
      const TaggedFiber* f0 = m.f0();
      for (VertexId nb : f0->fiber.graph.neighbors(v))
        if (f0->tags.at(nb) == Ownership::Exceptional) return false;
      return true;
    };
    bool c_dis = disjoint_from_e(m.f0_c);
    bool ct_dis = disjoint_from_e(m.f0_ctilde);
    if (c_dis == ct_dis)
      throw domain_error("UNDECIDED",
                         "cannot identify the S0-component disjoint from E");
    mu_eff = c_dis ? m.mu_c : m.mu_ctilde;
  }
  return kodaira_table(m.f0_type, m.n_columnar, m.mu, mu_eff, mu_tilde_eff);
}

Rat alpha_nonextendable(const SurfaceModel& m) {
  if (m.kind != ConstructionKind::Nonextendable)
    throw domain_error("WRONG_KIND", "alpha applies to nonextendable models");
  Rat a = Rat(m.n_columnar - 2 + 2 * m.ruling.base_genus);
  for (const Int& mi : m.mu) a -= Rat(1, mi);
  return a;
}

MultiDivisor fundamental_cycle(const WeightedGraph& e) {
  if (!e.is_connected() || e.empty())
    throw domain_error("NOT_CONNECTED", "fundamental cycle needs a connected graph");
  if (!is_negative_definite(e))
    throw domain_error("NOT_NEGATIVE_DEFINITE", "fundamental cycle needs definiteness");
  IntMatrix q = intersection_matrix(e);
  auto vs = e.vertices();
  std::size_t n = e.size();
  std::vector<Int> z(n, 1);
  bool changed = true;
  int guard = 100000;
  while (changed) {
    if (--guard < 0) throw domain_error("INTERNAL", "Laufer iteration did not terminate");
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      Int dot = 0;
      for (std::size_t j = 0; j < n; ++j) dot += q.at(i, j) * z[j];
      if (dot > 0) {
        z[i] += 1;
        changed = true;
      }
    }
  }
  MultiDivisor d;
  d.graph = &e;
  for (std::size_t i = 0; i < n; ++i) d.coeff[vs[i].id] = Rat(z[i]);
  return d;
}

Rationality is_rational_singularity(const WeightedGraph& e) {
  if (!e.is_connected() || e.empty())
    throw domain_error("NOT_CONNECTED", "rationality test needs a connected graph");
  bool has_genus = std::any_of(e.vertices().begin(), e.vertices().end(),
                               [](const Vertex& v) { return v.genus > 0; });
  if (has_genus || !e.is_tree()) {
    if (!is_negative_definite(e))
      throw domain_error("NOT_NEGATIVE_DEFINITE", "resolution graphs are negative definite");
    return Rationality::NotRational;
  }
  MultiDivisor z = fundamental_cycle(e);
  return arithmetic_genus(z) == 0 ? Rationality::Rational : Rationality::NotRational;
}

bool is_platonic_triple(const Int& x1, const Int& x2, const Int& x3) {
  if (x1 < 1 || x2 < 1 || x3 < 1)
    throw domain_error("BAD_TRIPLE", "platonic triples have positive entries");
  return Rat(1, x1) + Rat(1, x2) + Rat(1, x3) > 1;
}

std::optional<int> match_ruling_pattern(const WeightedGraph& d) {
  if (std::any_of(d.vertices().begin(), d.vertices().end(),
                  [](const Vertex& v) { return v.genus != 0; }))
    return std::nullopt;
  if (!d.is_tree()) return std::nullopt;
  auto tips_minus2 = [&](VertexId v) {
    int k = 0;
    for (VertexId nb : d.neighbors(v))
      if (d.degree(nb) == 1 && d.vertex(nb).weight == -2) ++k;
    return k;
  };
  if (d.size() == 6) {
    std::vector<VertexId> centers;
    for (const auto& v : d.vertices())
      if (d.degree(v.id) == 3) centers.push_back(v.id);
    if (centers.size() != 2) return std::nullopt;
    if (d.edge_multiplicity(centers[0], centers[1]) != 1) return std::nullopt;
    if (tips_minus2(centers[0]) != 2 || tips_minus2(centers[1]) != 2) return std::nullopt;
    std::int64_t w0 = d.vertex(centers[0]).weight, w1 = d.vertex(centers[1]).weight;
    if (w0 == -1 && w1 == -1) return 2;
    if ((w0 == -1 && w1 <= -2) || (w1 == -1 && w0 <= -2)) return 1;
    return std::nullopt;
  }
  if (d.size() == 7) {
    VertexId zero = -1;
    for (const auto& v : d.vertices())
      if (v.weight == 0 && d.degree(v.id) == 2) zero = v.id;
    if (zero == -1) return std::nullopt;
    auto nbrs = d.neighbors(zero);
    if (nbrs.size() != 2) return std::nullopt;
    for (VertexId b : nbrs) {
      if (d.degree(b) != 3) return std::nullopt;
      if (tips_minus2(b) != 2) return std::nullopt;
    }
    return 3;
  }
  return std::nullopt;
}

int count_cstar_rulings(const SurfaceModel& m) {
  if (m.kind == ConstructionKind::AffineRuled)
    throw domain_error("AFFINE_RULED_EXCLUDED",
                       "the C*-ruling count excludes affine-ruled surfaces");
  if (m.kind == ConstructionKind::Nonextendable) {
    Rat a = alpha_nonextendable(m);
    if (a >= 0) return 1;  // non-logarithmic: the unique non-extendable ruling
    // kbar(S_0) = -inf and not affine-ruled: a C^2/G-style model
    auto desc = classify_singularity(m.exceptional);
    if (desc.kind == SingularityKind::Fork && desc.fork_type[0] == 2 &&
        desc.fork_type[1] == 2)
      return desc.fork_type[2] == 2 ? 4 : 2;
    return 1;
  }
  KodairaSigns ks = kodaira_signs(m);
  if (ks.kappa0 > 0) return 1;
  if (ks.kappa0 < 0) {
    // kbar(S_0) = -inf: affine-ruled unless the singularity is a
    // noncyclic quotient
    if (!m.exceptional.empty() && m.exceptional.is_connected()) {
      auto desc = classify_singularity(m.exceptional);
      if (desc.kind == SingularityKind::Fork && desc.fork_type[0] == 2 &&
          desc.fork_type[1] == 2)
        return desc.fork_type[2] == 2 ? 4 : 2;
    }
    throw domain_error("AFFINE_RULED_EXCLUDED",
                       "kbar(S_0) = -inf model is affine-ruled; count not defined here");
  }
  // kbar(S_0) = 0, logarithmic, not exceptional: boundary pattern dispatch
  WeightedGraph std_d = standardize(m.boundary).graph;
  auto pat = match_ruling_pattern(std_d);
  if (pat) return *pat;
  return 2;
}

ContractibleCount count_contractible_curves(const SurfaceModel& m) {
  if (m.kind == ConstructionKind::Nonextendable) {
    Rat a = alpha_nonextendable(m);
    if (a != 0) throw domain_error("WRONG_KODAIRA", "requires kbar(S_0) = 0");
    throw domain_error("NON_LOGARITHMIC_INFINITE",
                       "a non-logarithmic model contains infinitely many contractible "
                       "curves");
  }
  KodairaSigns ks = kodaira_signs(m);
  if (ks.kappa0 != 0) throw domain_error("WRONG_KODAIRA", "requires kbar(S_0) = 0");
  WeightedGraph std_d = standardize(m.boundary).graph;
  auto pat = match_ruling_pattern(std_d);
  if (pat) {
    if (*pat == 1) return {1, 1};
    return {2, 2};
  }
  return {1, 2};  // case (4)(iv): resolved only with fiber-level data
}

int strongly_balanced_completion_count(const SurfaceModel& m) {
  if (m.kind == ConstructionKind::AffineRuled)
    throw domain_error("AFFINE_RULED_EXCLUDED",
                       "the completion count excludes affine-ruled surfaces");
  if (m.kind == ConstructionKind::UntwistedC1 && m.n_columnar >= 1) return 2;
  return 1;
}

InvariantReport analyze(const SurfaceModel& m) {
  InvariantReport r;
  r.d_boundary = discriminant(m.boundary);
  r.d_exceptional = discriminant(m.exceptional);
  r.validators = verify_qacyclicity(m);
  try {
    r.h1 = h1_order(m);
  } catch (const domain_error&) {
  }
  if (m.kind == ConstructionKind::AffineRuled) {
    try {
      r.h1_group = h1_group_affine_ruled(m);
    } catch (const domain_error&) {
    }
    r.kod_s = KodairaDim::MinusInfinity;
    r.kod_s0 = KodairaDim::MinusInfinity;
  } else if (m.kind == ConstructionKind::Nonextendable) {
    r.alpha = alpha_nonextendable(m);
    r.kod_s = KodairaDim::MinusInfinity;
    r.kod_s0 = sign_to_dim(*r.alpha);
  } else {
    try {
      KodairaSigns ks = kodaira_signs(m);
      r.lambda = ks.lambda;
      r.kappa = ks.kappa;
      r.kappa0 = ks.kappa0;
      r.kod_s = ks.dim_s;
      r.kod_s0 = ks.dim_s0;
    } catch (const domain_error&) {
    }
  }
  for (const auto& comp : m.exceptional.connected_components()) {
    WeightedGraph piece = m.exceptional.induced_subgraph(comp);
    SingularityReport sr;
    sr.desc = classify_singularity(piece);
    if (sr.desc.kind != SingularityKind::NonQuotient) {
      sr.rationality = Rationality::Rational;  // quotient singularities are rational
      sr.pa_fundamental_cycle = 0;
    } else {
      sr.rationality = is_rational_singularity(piece);
      try {
        MultiDivisor z = fundamental_cycle(piece);
        sr.pa_fundamental_cycle = arithmetic_genus(z);
      } catch (const domain_error&) {
      }
    }
    r.singularities.push_back(std::move(sr));
  }
  try {
    r.ruling_count = count_cstar_rulings(m);
  } catch (const domain_error&) {
  }
  try {
    r.contractible = count_contractible_curves(m);
  } catch (const domain_error&) {
  }
  try {
    r.balanced_completions = strongly_balanced_completion_count(m);
  } catch (const domain_error&) {
  }
  return r;
}

}  // namespace qhp
