#include "qhp/invariants.hpp"

#include <algorithm>

namespace qhp {

IntMatrix IntMatrix::negated() const {
  IntMatrix m(n_);
  for (std::size_t i = 0; i < n_ * n_; ++i) m.a_[i] = -a_[i];
  return m;
}

IntMatrix IntMatrix::leading_minor(std::size_t k) const {
  IntMatrix m(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) m.at(i, j) = at(i, j);
  return m;
}

Int IntMatrix::determinant() const {
  if (n_ == 0) return 1;
  IntMatrix m = *this;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n_; ++k) {
    if (m.at(k, k) == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n_ && m.at(swap_row, k) == 0) ++swap_row;
      if (swap_row == n_) return 0;
      for (std::size_t j = 0; j < n_; ++j) std::swap(m.at(k, j), m.at(swap_row, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n_; ++i)
      for (std::size_t j = k + 1; j < n_; ++j)
        m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
    prev = m.at(k, k);
  }
  return sign * m.at(n_ - 1, n_ - 1);
}

IntMatrix intersection_matrix(const WeightedGraph& g) {
  std::size_t n = g.size();
  IntMatrix q(n);
  auto vs = g.vertices();
  for (std::size_t i = 0; i < n; ++i) q.at(i, i) = vs[i].weight;
  for (const auto& [a, b] : g.edges()) {
    std::size_t i = g.position(a), j = g.position(b);
    q.at(i, j) += 1;
    q.at(j, i) += 1;
  }
  return q;
}

Int discriminant(const WeightedGraph& g) {
  return intersection_matrix(g).negated().determinant();
}

Int discriminant(const Chain& c) { return discriminant(c.to_graph()); }

bool is_negative_definite(const WeightedGraph& g) {
  IntMatrix m = intersection_matrix(g).negated();
  // Leading minors of the Bareiss elimination would do, but sizes here
  // are tiny; compute each minor directly.
  for (std::size_t k = 1; k <= m.size(); ++k)
    if (m.leading_minor(k).determinant() <= 0) return false;
  return true;
}

std::size_t branching_number(const WeightedGraph& g, VertexId v) { return g.degree(v); }

Rat e_invariant(const Chain& c) {
  if (c.empty()) throw domain_error("EMPTY_CHAIN", "e is undefined for the empty chain");
  if (!c.admissible())
    throw domain_error("NOT_ADMISSIBLE", "e requires all entries >= 2, got " + to_string(c));
  Chain rest(std::vector<std::int64_t>(c.entries.begin() + 1, c.entries.end()));
  return Rat(discriminant(rest), discriminant(c));
}

Rat tilde_e(const Chain& c) { return e_invariant(c.reversed()); }

EFraction e_fraction(const Chain& c) {
  if (c.empty()) throw domain_error("EMPTY_CHAIN", "e is undefined for the empty chain");
  if (!c.admissible())
    throw domain_error("NOT_ADMISSIBLE", "e requires all entries >= 2, got " + to_string(c));
  Chain rest(std::vector<std::int64_t>(c.entries.begin() + 1, c.entries.end()));
  EFraction f;
  f.raw_num = discriminant(rest);
  f.raw_den = discriminant(c);
  f.reduced = Rat(f.raw_num, f.raw_den);
  return f;
}

namespace {

bool is_admissible_chain_graph(const WeightedGraph& g) {
  auto order = g.linear_order();
  if (!order || order->empty()) return false;
  for (VertexId v : *order) {
    const Vertex& vx = g.vertex(v);
    if (vx.genus != 0 || vx.weight > -2) return false;
  }
  return true;
}

}  // namespace

std::vector<Twig> maximal_admissible_twigs(const WeightedGraph& g) {
  if (!g.is_forest()) throw domain_error("NOT_FOREST", "twigs require a forest");
  for (const auto& comp : g.connected_components()) {
    WeightedGraph sub = g.induced_subgraph(comp);
    if (is_admissible_chain_graph(sub))
      throw domain_error("ADMISSIBLE_CHAIN_AMBIGUOUS",
                         "twig decomposition undefined for a standalone admissible chain");
  }
  std::vector<Twig> out;
  for (const auto& v : g.vertices()) {
    if (g.degree(v.id) > 1) continue;  // twigs start at tips
    if (v.genus != 0 || v.weight > -2) continue;
    Twig t;
    VertexId prev = -1, cur = v.id;
    while (true) {
      const Vertex& vx = g.vertex(cur);
      if (vx.genus != 0 || vx.weight > -2) break;
      if (g.degree(cur) > 2) break;  // branching vertex ends the twig
      t.vertices.push_back(cur);
      t.chain.entries.push_back(-vx.weight);
      VertexId next = -1;
      for (VertexId n : g.neighbors(cur))
        if (n != prev) next = n;
      if (next == -1) break;
      prev = cur;
      cur = next;
    }
    if (!t.vertices.empty()) out.push_back(std::move(t));
  }
  return out;
}

Rat e_sum_over_twigs(const WeightedGraph& g) {
  Rat sum(0);
  for (const Twig& t : maximal_admissible_twigs(g)) sum += e_invariant(t.chain);
  return sum;
}

Rat arithmetic_genus(const MultiDivisor& d) {
  const WeightedGraph& g = *d.graph;
  IntMatrix q = intersection_matrix(g);
  auto vs = g.vertices();
  std::size_t n = g.size();
  std::vector<Rat> t(n, Rat(0));
  for (const auto& [id, c] : d.coeff) t[g.position(id)] = c;
  Rat self(0), canon(0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) self += t[i] * t[j] * Rat(q.at(i, j));
    Int k_dot = 2 * Int(vs[i].genus) - 2 - Int(vs[i].weight);
    canon += t[i] * Rat(k_dot);
  }
  return (self + canon) / 2 + 1;
}

MultiDivisor reduced_divisor(const WeightedGraph& g) {
  MultiDivisor d;
  d.graph = &g;
  for (const auto& v : g.vertices()) d.coeff[v.id] = 1;
  return d;
}

namespace {

/// Solves A x = b exactly by Gauss elimination over the rationals.
/// Empty result when A is singular.
std::optional<std::vector<Rat>> solve_linear(std::vector<std::vector<Rat>> a,
                                             std::vector<Rat> b) {
  std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && a[pivot][k] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[k]);
    std::swap(b[pivot], b[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      Rat f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<Rat> x(n, Rat(0));
  for (std::size_t i = n; i-- > 0;) {
    Rat s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

}  // namespace

MultiDivisor bark(const WeightedGraph& g, const std::vector<VertexId>& support) {
  std::size_t n = support.size();
  std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n, Rat(0)));
  std::vector<Rat> b(n, Rat(0));
  for (std::size_t i = 0; i < n; ++i) {
    const Vertex& vi = g.vertex(support[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j)
        a[i][j] = Rat(vi.weight);
      else
        a[i][j] = Rat(Int(g.edge_multiplicity(support[i], support[j])));
    }
    // (K + D).D_i = 2 genus - 2 + beta for the reduced divisor D of g.
    b[i] = Rat(2 * Int(vi.genus) - 2 + Int(g.degree(support[i])));
  }
  auto x = solve_linear(std::move(a), std::move(b));
  if (!x)
    throw domain_error("NOT_ADMISSIBLE_SUPPORT", "bark system is singular on this support");
  MultiDivisor d;
  d.graph = &g;
  for (std::size_t i = 0; i < n; ++i) d.coeff[support[i]] = (*x)[i];
  return d;
}

SingularityDescriptor classify_singularity(const WeightedGraph& g) {
  if (!g.is_connected() || g.empty())
    throw domain_error("NOT_CONNECTED", "singularity graphs are connected and nonempty");
  if (!is_negative_definite(g))
    throw domain_error("NOT_NEGATIVE_DEFINITE", "resolution graphs are negative definite");

  SingularityDescriptor out;
  out.topologically_rational = g.is_tree() &&
      std::all_of(g.vertices().begin(), g.vertices().end(),
                  [](const Vertex& v) { return v.genus == 0; });

  if (is_admissible_chain_graph(g)) {
    out.kind = SingularityKind::Cyclic;
    out.order = discriminant(g);
    return out;
  }

  // Admissible fork: genus-0 tree, all weights <= -2, one degree-3
  // vertex, everything else on three twigs.
  bool admissible = out.topologically_rational &&
      std::all_of(g.vertices().begin(), g.vertices().end(),
                  [](const Vertex& v) { return v.weight <= -2; });
  if (admissible) {
    std::size_t deg3 = 0, deg_more = 0;
    for (const auto& v : g.vertices()) {
      std::size_t d = g.degree(v.id);
      if (d == 3) ++deg3;
      if (d > 3) ++deg_more;
    }
    if (deg3 == 1 && deg_more == 0) {
      out.kind = SingularityKind::Fork;
      out.order = discriminant(g);
      for (const Twig& t : maximal_admissible_twigs(g))
        out.fork_type.push_back(discriminant(t.chain));
      std::sort(out.fork_type.begin(), out.fork_type.end());
      if (out.fork_type.size() != 3)
        throw domain_error("INTERNAL", "fork with != 3 maximal twigs");
      return out;
    }
  }
  out.kind = SingularityKind::NonQuotient;
  out.order = 0;
  return out;
}

}  // namespace qhp
