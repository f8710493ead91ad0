#include "qhp/fibration.hpp"

#include <algorithm>
#include <numeric>

namespace qhp {

const Int& FiberTree::mu(VertexId v) const {
  auto it = mult.find(v);
  if (it == mult.end()) throw domain_error("UNKNOWN_VERTEX", "no multiplicity for vertex");
  return it->second;
}

std::vector<VertexId> FiberTree::minus_one_vertices() const {
  std::vector<VertexId> out;
  for (const auto& v : graph.vertices())
    if (v.weight == -1) out.push_back(v.id);
  return out;
}

FiberTree fiber_from_history(const std::vector<BlowupStep>& history) {
  FiberTree f;
  f.root = f.graph.add_vertex(0, 0);
  f.mult[f.root] = 1;
  for (const BlowupStep& s : history) {
    auto r = blowup(f.graph, s);
    f.graph = std::move(r.graph);
    if (s.kind == BlowupStep::Kind::Sprouting)
      f.mult[r.created] = f.mult.at(s.a);
    else
      f.mult[r.created] = f.mult.at(s.a) + f.mult.at(s.b);
    f.history.push_back(s);
  }
  return f;
}

FiberTree fiber_from_graph(const WeightedGraph& g) {
  if (!g.is_tree() || g.empty()) throw domain_error("NOT_A_TREE", "fibers are nonempty trees");
  std::size_t n = g.size();
  IntMatrix q = intersection_matrix(g);
  // kernel of Q by rational elimination
  std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = Rat(q.at(i, j));
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < n; ++col) {
    std::size_t p = row;
    while (p < n && a[p][col] == 0) ++p;
    if (p == n) continue;
    std::swap(a[p], a[row]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == row || a[i][col] == 0) continue;
      Rat f = a[i][col] / a[row][col];
      for (std::size_t j = 0; j < n; ++j) a[i][j] -= f * a[row][j];
    }
    pivot_col.push_back(col);
    ++row;
  }
  if (pivot_col.size() != n - 1)
    throw domain_error("NOT_A_FIBER", "intersection matrix kernel is not 1-dimensional");
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;
  std::size_t free_col = 0;
  while (is_pivot[free_col]) ++free_col;
  std::vector<Rat> x(n, Rat(0));
  x[free_col] = 1;
  for (std::size_t r2 = pivot_col.size(); r2-- > 0;) {
    std::size_t c = pivot_col[r2];
    Rat s(0);
    for (std::size_t j = c + 1; j < n; ++j) s -= a[r2][j] * x[j];
    x[c] = s / a[r2][c];
  }
  Int lcm_den = 1;
  for (const Rat& v : x) lcm_den = boost::multiprecision::lcm(lcm_den, den(v));
  std::vector<Int> m(n);
  Int g_all = 0;
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = num(x[i]) * (lcm_den / den(x[i]));
    g_all = boost::multiprecision::gcd(g_all, m[i]);
  }
  if (g_all == 0) throw domain_error("NOT_A_FIBER", "zero kernel vector");
  bool all_neg = std::all_of(m.begin(), m.end(), [](const Int& v) { return v <= 0; });
  for (auto& v : m) {
    v /= g_all;
    if (all_neg) v = -v;
  }
  if (!std::all_of(m.begin(), m.end(), [](const Int& v) { return v > 0; }))
    throw domain_error("NOT_A_FIBER", "kernel vector is not positive");
  FiberTree f;
  f.graph = g;
  auto vs = g.vertices();
  for (std::size_t i = 0; i < n; ++i) f.mult[vs[i].id] = m[i];
  f.root = vs.empty() ? -1 : vs[0].id;
  return f;
}

bool FiberValidation::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const FiberCheck& c) { return c.pass || c.undecided; });
}

std::vector<std::vector<VertexId>> branch_decomposition(const FiberTree& f) {
  if (f.history.empty() && f.graph.size() > 1)
    throw domain_error("NO_HISTORY", "branch decomposition needs a creation history");
  auto minus_ones = f.minus_one_vertices();
  if (minus_ones.size() != 1)
    throw domain_error("NOT_UNIQUE_EXCEPTIONAL", "branches need a unique (-1)-curve");
  VertexId c = minus_ones[0];
  // creation order equals insertion order for replayed histories
  std::vector<VertexId> branching;
  for (const auto& v : f.graph.vertices())
    if (f.graph.degree(v.id) >= 3) branching.push_back(v.id);
  branching.push_back(c);
  std::vector<std::vector<VertexId>> branches;
  std::vector<bool> used(f.graph.size(), false);
  for (VertexId b : branching) {
    std::size_t cutoff = f.graph.position(b);
    std::vector<VertexId> t;
    auto vs = f.graph.vertices();
    for (std::size_t i = 0; i <= cutoff; ++i)
      if (!used[i]) {
        t.push_back(vs[i].id);
        used[i] = true;
      }
    branches.push_back(std::move(t));
  }
  return branches;
}

FiberValidation validate_fiber(const FiberTree& f) {
  FiberValidation out;
  auto add = [&out](std::string clause, bool pass, std::string detail = "") {
    out.checks.push_back({std::move(clause), pass, false, std::move(detail)});
  };
  auto add_undecided = [&out](std::string clause, std::string detail) {
    out.checks.push_back({std::move(clause), true, true, std::move(detail)});
  };

  bool tree = f.graph.is_tree() &&
              std::all_of(f.graph.vertices().begin(), f.graph.vertices().end(),
                          [](const Vertex& v) { return v.genus == 0; });
  add("rational snc-tree", tree);
  if (!tree) return out;

  // kernel property Q.mu = 0
  IntMatrix q = intersection_matrix(f.graph);
  auto vs = f.graph.vertices();
  bool kernel = true;
  for (std::size_t i = 0; i < f.graph.size(); ++i) {
    Int s = 0;
    for (std::size_t j = 0; j < f.graph.size(); ++j) s += q.at(i, j) * f.mu(vs[j].id);
    if (s != 0) kernel = false;
  }
  add("Q.mu = 0", kernel);

  MultiDivisor d;
  d.graph = &f.graph;
  for (const auto& v : vs) d.coeff[v.id] = Rat(f.mu(v.id));
  add("p_a(F) = 0", arithmetic_genus(d) == 0);

  auto minus_ones = f.minus_one_vertices();
  if (f.graph.size() == 1) {
    add("smooth fiber [0]", f.graph.vertices()[0].weight == 0);
    return out;
  }
  add("contains a (-1)-curve", !minus_ones.empty());
  bool deg_ok = std::all_of(minus_ones.begin(), minus_ones.end(), [&](VertexId v) {
    return f.graph.degree(v) <= 2;
  });
  add("(-1)-curves meet at most two components", deg_ok);

  if (minus_ones.size() != 1) return out;
  VertexId c = minus_ones[0];
  add("unique (-1)-curve has mu > 1", f.mu(c) > 1);

  std::vector<VertexId> mult_one;
  for (const auto& v : vs)
    if (f.mu(v.id) == 1) mult_one.push_back(v.id);
  add("exactly two multiplicity-1 components", mult_one.size() == 2);
  bool tips = std::all_of(mult_one.begin(), mult_one.end(), [&](VertexId v) {
    return f.graph.degree(v) <= 1;
  });
  add("multiplicity-1 components are tips", tips);

  if (!f.history.empty()) {
    auto branches = branch_decomposition(f);
    const auto& first = branches.front();
    bool in_first = std::all_of(mult_one.begin(), mult_one.end(), [&](VertexId v) {
      return std::find(first.begin(), first.end(), v) != first.end();
    });
    add("multiplicity-1 tips lie in the first branch", in_first);
  } else {
    add_undecided("multiplicity-1 tips lie in the first branch", "no creation history");
  }

  // mu(C) = 2 dichotomy
  if (f.mu(c) == 2) {
    auto order = f.graph.linear_order();
    bool is_212 = order && order->size() == 3 && f.graph.vertex((*order)[1]).weight == -1;
    if (is_212) {
      add("mu=2 shape: F = [2,1,2]", true);
    } else {
      bool c_tip = f.graph.degree(c) <= 1;
      bool rest_ok = false;
      if (c_tip) {
        std::vector<VertexId> rest;
        for (const auto& v : vs)
          if (v.id != c) rest.push_back(v.id);
        WeightedGraph r = f.graph.induced_subgraph(rest);
        auto ro = r.linear_order();
        if (ro) rest_ok = Chain::from_graph(r, *ro) == Chain({2, 2, 2});
        if (!rest_ok && r.is_connected()) {
          // (-2)-fork of type (2,2,n)
          bool all_minus2 = std::all_of(rest.begin(), rest.end(), [&](VertexId v) {
            return f.graph.vertex(v).weight == -2;
          });
          if (all_minus2 && is_negative_definite(r)) {
            auto desc = classify_singularity(r);
            rest_ok = desc.kind == SingularityKind::Fork && desc.fork_type.size() == 3 &&
                      desc.fork_type[0] == 2 && desc.fork_type[1] == 2;
          }
        }
      }
      add("mu=2 shape: C is a tip with F-C = [2,2,2] or a (2,2,n)-fork", c_tip && rest_ok);
    }
  }

  // clause: the connected component of F - C without multiplicity-1
  // curves is a chain (possibly empty)
  if (f.graph.degree(c) == 2 || f.graph.degree(c) == 1) {
    std::vector<VertexId> rest;
    for (const auto& v : vs)
      if (v.id != c) rest.push_back(v.id);
    WeightedGraph r = f.graph.induced_subgraph(rest);
    bool ok = true;
    for (const auto& comp : r.connected_components()) {
      bool has_mult_one = std::any_of(comp.begin(), comp.end(), [&](VertexId v) {
        return f.mu(v) == 1;
      });
      if (has_mult_one) continue;
      WeightedGraph piece = r.induced_subgraph(comp);
      if (!piece.linear_order()) ok = false;
    }
    add("component of F-C without multiplicity-1 curves is a chain", ok);
  }
  return out;
}

Chain hj_chain(const Int& p, const Int& q) {
  if (!(p > 0 && q > 0 && q <= p))
    throw domain_error("BAD_FRACTION", "hj_chain needs 0 < q <= p");
  if (boost::multiprecision::gcd(p, q) != 1)
    throw domain_error("BAD_FRACTION", "hj_chain needs gcd(p,q) = 1");
  if (p == 1) {
    if (q != 1) throw domain_error("BAD_FRACTION", "q must be 1 when p is 1");
    return Chain{};  // d(empty) = 1
  }
  Chain c;
  Int a = p, b = q;
  while (b > 0) {
    Int e = ceil_div(a, b);
    c.entries.push_back(static_cast<std::int64_t>(e));
    Int next = e * b - a;
    a = b;
    b = next;
  }
  return c;
}

Chain adjoint_chain(const Chain& a) {
  if (a.empty() || !a.admissible())
    throw domain_error("NOT_ADMISSIBLE", "adjoint needs a nonempty admissible chain");
  Int p = discriminant(a);
  Chain rest(std::vector<std::int64_t>(a.entries.begin() + 1, a.entries.end()));
  Int q = discriminant(rest);
  return hj_chain(p, p - q);
}

Chain ColumnarFiber::a_chain() const {
  Chain c;
  for (VertexId v : a_side) c.entries.push_back(-fiber.graph.vertex(v).weight);
  return c;
}

Chain ColumnarFiber::b_chain() const {
  Chain c;
  for (VertexId v : b_side) c.entries.push_back(-fiber.graph.vertex(v).weight);
  return c;
}

ColumnarFiber columnar_from_tilde_e(const Rat& q) {
  if (!(q > 0 && q < 1))
    throw domain_error("BAD_FRACTION", "tilde-e must lie strictly between 0 and 1");
  Int p = den(q), s = num(q);
  // B side read from the section end: d = p, d minus section-end = s.
  Chain b_from_section = hj_chain(p, s);
  Chain a_from_section = hj_chain(p, p - s);
  // full fiber chain: A_n .. A_1, C, B_1 .. B_m
  std::vector<std::int64_t> full = a_from_section.entries;  // A_n first
  full.push_back(1);                                        // C
  Chain b_rev = b_from_section.reversed();                  // B_1 first
  for (auto e : b_rev.entries) full.push_back(e);

  std::size_t n_a = a_from_section.length(), n_b = b_from_section.length();
  std::size_t total = n_a + 1 + n_b;

  // Contract the explicit chain to a point, keeping the B_m end (the
  // last position) alive; reversing the contractions gives the history.
  struct Node {
    std::int64_t weight;
    bool alive = true;
  };
  std::vector<Node> nodes;
  for (auto e : full) nodes.push_back({-e});
  auto left_of = [&](std::size_t i) -> std::optional<std::size_t> {
    for (std::size_t j = i; j-- > 0;)
      if (nodes[j].alive) return j;
    return std::nullopt;
  };
  auto right_of = [&](std::size_t i) -> std::optional<std::size_t> {
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (nodes[j].alive) return j;
    return std::nullopt;
  };
  std::vector<std::size_t> contraction_order;
  std::size_t alive = total;
  while (alive > 1) {
    // contract the (-1)-position farthest from the B_m end
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].alive && nodes[i].weight == -1 && i + 1 != nodes.size()) {
        pick = i;
        break;
      }
    if (!pick) throw domain_error("INTERNAL", "columnar chain failed to contract");
    auto l = left_of(*pick), r = right_of(*pick);
    if (l) nodes[*l].weight += 1;
    if (r) nodes[*r].weight += 1;
    nodes[*pick].alive = false;
    contraction_order.push_back(*pick);
    --alive;
  }
  if (!nodes.back().alive || nodes.back().weight != 0)
    throw domain_error("INTERNAL", "columnar contraction did not end at [0]");

  // replay ids: survivor (position total-1) gets id 0; the vertex
  // contracted k-th from the end gets id k.
  std::vector<VertexId> replay_id(total, -1);
  replay_id[total - 1] = 0;
  for (std::size_t j = 0; j < contraction_order.size(); ++j)
    replay_id[contraction_order[j]] =
        static_cast<VertexId>(contraction_order.size() - j);

  // rebuild history: reverse contractions; neighbors at contraction time
  std::vector<BlowupStep> history(contraction_order.size());
  {
    std::vector<Node> sim;
    for (auto e : full) sim.push_back({-e});
    auto sim_left = [&](std::size_t i) -> std::optional<std::size_t> {
      for (std::size_t j = i; j-- > 0;)
        if (sim[j].alive) return j;
      return std::nullopt;
    };
    auto sim_right = [&](std::size_t i) -> std::optional<std::size_t> {
      for (std::size_t j = i + 1; j < sim.size(); ++j)
        if (sim[j].alive) return j;
      return std::nullopt;
    };
    for (std::size_t j = 0; j < contraction_order.size(); ++j) {
      std::size_t pos = contraction_order[j];
      auto l = sim_left(pos), r = sim_right(pos);
      BlowupStep step = (l && r)
          ? BlowupStep::subdivisional(replay_id[*l], replay_id[*r])
          : BlowupStep::sprouting(replay_id[l ? *l : *r]);
      history[contraction_order.size() - 1 - j] = step;
      sim[pos].alive = false;
    }
  }

  ColumnarFiber out;
  out.fiber = fiber_from_history(history);
  out.mu = p;
  for (std::size_t i = 0; i < n_a; ++i)
    out.a_side.push_back(replay_id[n_a - 1 - i]);  // A_1 first (next to C)
  out.c = replay_id[n_a];
  for (std::size_t i = 0; i < n_b; ++i) out.b_side.push_back(replay_id[n_a + 1 + i]);

  // sanity: the replayed fiber matches the target chain
  auto order = out.fiber.graph.linear_order();
  if (!order) throw domain_error("INTERNAL", "columnar fiber is not a chain");
  Chain got = Chain::from_graph(out.fiber.graph, *order);
  if (!(got == Chain(full) || got == Chain(full).reversed()))
    throw domain_error("INTERNAL", "columnar replay mismatch");
  if (out.fiber.mu(out.c) != p)
    throw domain_error("INTERNAL", "columnar multiplicity mismatch");
  return out;
}

std::size_t TaggedFiber::open_count() const {
  std::size_t n = 0;
  for (const auto& [v, t] : tags)
    if (t == Ownership::Open) ++n;
  return n;
}

Int fujita_count(const RulingDescriptor& r, const Int& b2_total, const Int& b2_boundary) {
  Int from_tags = 0;
  for (const TaggedFiber& f : r.fibers) {
    bool in_boundary = true;
    for (const auto& [v, t] : f.tags)
      if (t != Ownership::Boundary) in_boundary = false;
    if (in_boundary) continue;
    from_tags += Int(f.open_count()) - 1;
  }
  Int from_formula = Int(r.h) + Int(r.nu) + b2_total - b2_boundary - 2;
  if (from_tags != from_formula)
    throw domain_error("SIGMA_MISMATCH",
                       "ownership tags and Fujita's equation disagree: " +
                           from_tags.str() + " vs " + from_formula.str());
  return from_tags;
}

}  // namespace qhp
