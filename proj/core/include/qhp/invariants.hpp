#pragma once

#include "qhp/graph.hpp"

#include <vector>

namespace qhp {

/// Dense symmetric matrix over arbitrary-precision integers, indexed by
/// the stable vertex order of the graph it came from.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(std::size_t n) : n_(n), a_(n * n, Int(0)) {}

  std::size_t size() const { return n_; }
  Int& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const Int& at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  IntMatrix negated() const;
  IntMatrix leading_minor(std::size_t k) const;
  /// Exact determinant (fraction-free Bareiss elimination).
  Int determinant() const;

 private:
  std::size_t n_ = 0;
  std::vector<Int> a_;
};

/// Q(g): diagonal = self-intersections, off-diagonal = intersection
/// counts, rows/columns in the stable vertex order.
IntMatrix intersection_matrix(const WeightedGraph& g);

/// d(g) = det(-Q(g)); d of the empty graph is 1 and d is multiplicative
/// over connected components.
Int discriminant(const WeightedGraph& g);
Int discriminant(const Chain& c);

/// Sylvester test on -Q(g): all leading principal minors positive.
/// Order-independent for symmetric matrices; the empty graph passes.
bool is_negative_definite(const WeightedGraph& g);

/// beta_g(v), the number of intersections of v with the rest of g.
std::size_t branching_number(const WeightedGraph& g, VertexId v);

/// e(c) = d(c - first vertex)/d(c) for an admissible nonempty chain;
/// lies strictly between 0 and 1.
Rat e_invariant(const Chain& c);
/// e of the reversed chain.
Rat tilde_e(const Chain& c);

/// The raw determinant ratio behind e(c), kept alongside its reduced
/// form: the reduced denominator is d(c) divided by the common factor.
struct EFraction {
  Int raw_num, raw_den;
  Rat reduced;
};
EFraction e_fraction(const Chain& c);

/// A maximal admissible twig: tip-first run of genus-0 vertices of weight
/// <= -2 hanging from a tip of the ambient graph, stopping before the
/// first branching or non-admissible vertex.
struct Twig {
  std::vector<VertexId> vertices;  // tip first
  Chain chain;                     // bracket entries, tip first
};

/// All maximal admissible twigs of a forest. Rejects graphs with a
/// connected component that is itself an admissible chain: the tip-first
/// convention needs an ambient divisor that is not an admissible chain,
/// so the decomposition would be ambiguous there.
std::vector<Twig> maximal_admissible_twigs(const WeightedGraph& g);

/// Sum of e(T) over all maximal admissible twigs.
Rat e_sum_over_twigs(const WeightedGraph& g);

/// p_a(D) = D.(K+D)/2 + 1 with K.T_i = 2 genus(T_i) - 2 - T_i^2.
Rat arithmetic_genus(const MultiDivisor& d);

/// Reduced divisor of the whole graph.
MultiDivisor reduced_divisor(const WeightedGraph& g);

/// Bk: the rational divisor supported on `support` with
/// (K + D - Bk).D_i = 0 for every i in the support, D reduced.
/// Support must be a connected admissible chain/fork making up all of g,
/// or a union of maximal admissible twigs; a singular system is reported
/// as NOT_ADMISSIBLE_SUPPORT.
MultiDivisor bark(const WeightedGraph& g, const std::vector<VertexId>& support);

enum class SingularityKind { Cyclic, Fork, NonQuotient };

struct SingularityDescriptor {
  SingularityKind kind = SingularityKind::NonQuotient;
  Int order = 0;                 // d(g) = |G/[G,G]| for quotient types
  std::vector<Int> fork_type;    // (d1,d2,d3) for forks, sorted
  bool topologically_rational = false;  // g is a tree of genus-0 vertices
};

/// Quotient-singularity recognition for a connected negative definite
/// resolution graph: admissible chain -> cyclic of order d(g); admissible
/// fork -> noncyclic of type (d1,d2,d3); anything else is not a quotient.
SingularityDescriptor classify_singularity(const WeightedGraph& g);

}  // namespace qhp
