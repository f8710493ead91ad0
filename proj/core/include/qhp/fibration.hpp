#pragma once

#include "qhp/birational.hpp"
#include "qhp/graph.hpp"
#include "qhp/invariants.hpp"

#include <map>
#include <string>
#include <vector>

namespace qhp {

/// Fiber of a P1-ruling as a multiplicity-decorated tree, produced from a
/// smooth 0-curve by a blowup sequence. Multiplicities follow the total
/// transform: a subdivisional blowup creates multiplicity mu(u)+mu(v), a
/// sprouting one copies mu(v).
struct FiberTree {
  WeightedGraph graph;
  std::map<VertexId, Int> mult;
  std::vector<BlowupStep> history;
  VertexId root = -1;

  const Int& mu(VertexId v) const;
  /// Vertices of weight -1.
  std::vector<VertexId> minus_one_vertices() const;
};

/// Replays a blowup history starting from the single vertex [0] with
/// multiplicity 1. Vertex ids are assigned deterministically: root = 0,
/// then one per step.
FiberTree fiber_from_history(const std::vector<BlowupStep>& history);

/// Builds a FiberTree for a given tree graph by solving Q.mu = 0 for a
/// primitive positive kernel vector; no history is attached.
FiberTree fiber_from_graph(const WeightedGraph& g);

struct FiberCheck {
  std::string clause;
  bool pass = true;
  bool undecided = false;
  std::string detail;
};

struct FiberValidation {
  std::vector<FiberCheck> checks;
  bool all_pass() const;
};

/// Structure checks for singular fibers: rational snc-tree with a
/// (-1)-curve, (-1)-curves meet at most two other components, kernel and
/// genus identities, and when the (-1)-curve is unique: mu > 1, exactly
/// two multiplicity-1 components, both tips (and in the first branch when
/// a creation history is available), plus the chain condition on the
/// component without multiplicity-1 curves.
FiberValidation validate_fiber(const FiberTree& f);

/// Branches T_1..T_{n+1} of a fiber with a unique (-1)-curve, defined via
/// the creation order of branching components; requires a history.
std::vector<std::vector<VertexId>> branch_decomposition(const FiberTree& f);

/// The admissible chain b with e(b) = 1 - e(a) and d(b) = d(a).
Chain adjoint_chain(const Chain& a);

/// Admissible chain T with d(T) = p and d(T - T_1) = q, via the
/// Hirzebruch-Jung expansion of p/q.
Chain hj_chain(const Int& p, const Int& q);

/// Columnar fiber A_n..A_1 C B_1..B_m: a chain with unique (-1)-curve C,
/// sections meeting the two end tips, d(A) = d(B) = mu(C). A and B are
/// listed starting next to C; the B side carries the prescribed
/// tilde-e invariant, measured from the section-adjacent end.
struct ColumnarFiber {
  FiberTree fiber;
  std::vector<VertexId> a_side;  // A_1..A_n, A_n at the section tip
  VertexId c = -1;
  std::vector<VertexId> b_side;  // B_1..B_m, B_m at the section tip
  Int mu = 1;

  Chain a_chain() const;
  Chain b_chain() const;
};

/// Synthesizes the columnar fiber whose B-side chain has tilde-e equal to
/// q (0 < q < 1); mu is the denominator of q. The history starts with a
/// sprouting blowup of the root (the B_m tip).
ColumnarFiber columnar_from_tilde_e(const Rat& q);

enum class Ownership { Boundary, Exceptional, Open };

/// Fiber with per-vertex ownership tags (D / E / S0 components).
struct TaggedFiber {
  FiberTree fiber;
  std::map<VertexId, Ownership> tags;

  std::size_t open_count() const;  // sigma(F)
};

/// Descriptor of a P1-ruling on a completed model: h horizontal boundary
/// components, nu fibers inside the boundary, the singular fibers with
/// ownership tags, and the base genus.
struct RulingDescriptor {
  int h = 1;
  int nu = 0;
  std::vector<TaggedFiber> fibers;
  std::int64_t base_genus = 0;
};

/// Fujita's count Sigma computed two ways: from ownership tags
/// (sum over fibers not in the boundary of sigma(F) - 1) and from
/// h + nu + b2(X) - b2(D) - 2; the two must agree.
Int fujita_count(const RulingDescriptor& r, const Int& b2_total, const Int& b2_boundary);

}  // namespace qhp
