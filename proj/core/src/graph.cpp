#include "qhp/graph.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace qhp {

VertexId WeightedGraph::add_vertex(std::int64_t weight, std::int64_t genus) {
  VertexId id = next_id_++;
  add_vertex_with_id(id, weight, genus);
  return id;
}

void WeightedGraph::add_vertex_with_id(VertexId id, std::int64_t weight, std::int64_t genus) {
  if (index_.count(id)) throw domain_error("DUPLICATE_VERTEX", "vertex id " + std::to_string(id));
  if (genus < 0) throw domain_error("NEGATIVE_GENUS", "vertex id " + std::to_string(id));
  index_[id] = verts_.size();
  verts_.push_back(Vertex{id, weight, genus});
  next_id_ = std::max(next_id_, static_cast<VertexId>(id + 1));
}

void WeightedGraph::add_edge(VertexId a, VertexId b) {
  if (a == b) throw domain_error("SELF_LOOP", "vertex id " + std::to_string(a));
  if (!has_vertex(a) || !has_vertex(b))
    throw domain_error("UNKNOWN_VERTEX", "edge endpoints must exist");
  edges_.emplace_back(std::min(a, b), std::max(a, b));
}

const Vertex& WeightedGraph::vertex(VertexId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw domain_error("UNKNOWN_VERTEX", std::to_string(id));
  return verts_[it->second];
}

Vertex& WeightedGraph::vertex_mut(VertexId id) {
  auto it = index_.find(id);
  if (it == index_.end()) throw domain_error("UNKNOWN_VERTEX", std::to_string(id));
  return verts_[it->second];
}

std::size_t WeightedGraph::position(VertexId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw domain_error("UNKNOWN_VERTEX", std::to_string(id));
  return it->second;
}

std::size_t WeightedGraph::degree(VertexId id) const {
  if (!has_vertex(id)) throw domain_error("UNKNOWN_VERTEX", std::to_string(id));
  std::size_t d = 0;
  for (const auto& [a, b] : edges_)
    if (a == id || b == id) ++d;
  return d;
}

std::vector<VertexId> WeightedGraph::neighbors(VertexId id) const {
  if (!has_vertex(id)) throw domain_error("UNKNOWN_VERTEX", std::to_string(id));
  std::vector<VertexId> out;
  for (const auto& [a, b] : edges_) {
    if (a == id) out.push_back(b);
    else if (b == id) out.push_back(a);
  }
  return out;
}

std::size_t WeightedGraph::edge_multiplicity(VertexId a, VertexId b) const {
  auto key = std::make_pair(std::min(a, b), std::max(a, b));
  return static_cast<std::size_t>(std::count(edges_.begin(), edges_.end(), key));
}

void WeightedGraph::set_weight(VertexId id, std::int64_t w) { vertex_mut(id).weight = w; }

void WeightedGraph::remove_vertex(VertexId id) {
  std::size_t pos = position(id);
  verts_.erase(verts_.begin() + static_cast<std::ptrdiff_t>(pos));
  std::erase_if(edges_, [id](const auto& e) { return e.first == id || e.second == id; });
  index_.clear();
  for (std::size_t i = 0; i < verts_.size(); ++i) index_[verts_[i].id] = i;
}

void WeightedGraph::remove_one_edge(VertexId a, VertexId b) {
  auto key = std::make_pair(std::min(a, b), std::max(a, b));
  auto it = std::find(edges_.begin(), edges_.end(), key);
  if (it == edges_.end()) throw domain_error("UNKNOWN_EDGE", "no such edge");
  edges_.erase(it);
}

std::vector<std::vector<VertexId>> WeightedGraph::connected_components() const {
  std::unordered_map<VertexId, bool> seen;
  std::vector<std::vector<VertexId>> comps;
  for (const auto& v : verts_) {
    if (seen[v.id]) continue;
    std::vector<VertexId> comp, stack{v.id};
    seen[v.id] = true;
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (VertexId w : neighbors(u)) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    // stable order within the component
    std::sort(comp.begin(), comp.end(), [this](VertexId a, VertexId b) {
      return position(a) < position(b);
    });
    comps.push_back(std::move(comp));
  }
  return comps;
}

bool WeightedGraph::is_connected() const {
  return verts_.empty() || connected_components().size() == 1;
}

bool WeightedGraph::is_forest() const {
  return edges_.size() + connected_components().size() == verts_.size();
}

std::optional<std::vector<VertexId>> WeightedGraph::linear_order() const {
  if (verts_.empty()) return std::vector<VertexId>{};
  if (!is_connected() || !is_forest()) return std::nullopt;
  if (verts_.size() == 1) return std::vector<VertexId>{verts_[0].id};
  std::vector<VertexId> tips;
  for (const auto& v : verts_) {
    std::size_t d = degree(v.id);
    if (d > 2) return std::nullopt;
    if (d == 1) tips.push_back(v.id);
  }
  if (tips.size() != 2) return std::nullopt;
  VertexId start = position(tips[0]) < position(tips[1]) ? tips[0] : tips[1];
  std::vector<VertexId> order{start};
  VertexId prev = -1, cur = start;
  while (order.size() < verts_.size()) {
    VertexId next = -1;
    for (VertexId n : neighbors(cur))
      if (n != prev) next = n;
    if (next == -1) return std::nullopt;
    order.push_back(next);
    prev = cur;
    cur = next;
  }
  return order;
}

WeightedGraph WeightedGraph::induced_subgraph(std::span<const VertexId> keep) const {
  WeightedGraph out;
  std::unordered_map<VertexId, bool> in;
  std::vector<VertexId> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end(), [this](VertexId a, VertexId b) {
    return position(a) < position(b);
  });
  for (VertexId id : sorted) {
    const Vertex& v = vertex(id);
    out.add_vertex_with_id(v.id, v.weight, v.genus);
    in[id] = true;
  }
  for (const auto& [a, b] : edges_)
    if (in[a] && in[b]) out.add_edge(a, b);
  return out;
}

WeightedGraph WeightedGraph::disjoint_union(const WeightedGraph& a, const WeightedGraph& b) {
  WeightedGraph out = a;
  for (const auto& v : b.vertices()) out.add_vertex_with_id(v.id, v.weight, v.genus);
  for (const auto& [x, y] : b.edges()) out.add_edge(x, y);
  return out;
}

bool WeightedGraph::operator==(const WeightedGraph& other) const {
  if (verts_.size() != other.verts_.size()) return false;
  for (std::size_t i = 0; i < verts_.size(); ++i) {
    const Vertex &a = verts_[i], &b = other.verts_[i];
    if (a.id != b.id || a.weight != b.weight || a.genus != b.genus) return false;
  }
  auto ea = edges_, eb = other.edges_;
  std::sort(ea.begin(), ea.end());
  std::sort(eb.begin(), eb.end());
  return ea == eb;
}

bool Chain::admissible() const {
  return std::all_of(entries.begin(), entries.end(), [](std::int64_t a) { return a >= 2; });
}

Chain Chain::reversed() const {
  Chain r = *this;
  std::reverse(r.entries.begin(), r.entries.end());
  return r;
}

WeightedGraph Chain::to_graph() const {
  WeightedGraph g;
  VertexId prev = -1;
  for (std::int64_t a : entries) {
    VertexId v = g.add_vertex(-a, 0);
    if (prev != -1) g.add_edge(prev, v);
    prev = v;
  }
  return g;
}

Chain Chain::from_graph(const WeightedGraph& g, const std::vector<VertexId>& order) {
  Chain c;
  for (VertexId id : order) c.entries.push_back(-g.vertex(id).weight);
  return c;
}

std::string to_string(const Chain& c) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < c.entries.size(); ++i) {
    if (i) os << ',';
    os << c.entries[i];
  }
  os << ']';
  return os.str();
}

Chain parse_chain(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw domain_error("PARSE_ERROR", "chain must look like [a1,...,an]: " + text);
  s = s.substr(1, s.size() - 2);
  Chain c;
  if (s.empty()) return c;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (tok.empty()) throw domain_error("PARSE_ERROR", "empty chain entry in " + text);
    try {
      std::size_t used = 0;
      long long v = std::stoll(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      c.entries.push_back(v);
    } catch (const std::exception&) {
      throw domain_error("PARSE_ERROR", "bad chain entry '" + tok + "'");
    }
  }
  return c;
}

Rat parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(text));
    Int p(text.substr(0, slash)), q(text.substr(slash + 1));
    if (q == 0) throw domain_error("PARSE_ERROR", "zero denominator in " + text);
    return Rat(p, q);
  } catch (const std::exception&) {
    throw domain_error("PARSE_ERROR", "bad rational '" + text + "'");
  }
}

std::string rational_to_string(const Rat& q) {
  if (is_integer(q)) return num(q).str();
  return num(q).str() + "/" + den(q).str();
}

}  // namespace qhp
