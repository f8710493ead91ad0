#pragma once

#include "qhp/fibration.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qhp {

enum class ConstructionKind { AffineRuled, Nonextendable, Twisted, UntwistedC1, UntwistedP1 };

enum class F0Type { None, Ai, Aii, Aiii, Aiv, Av, Bi, Bii, Biii, C };

enum class KodairaDim { MinusInfinity, Zero, One, TwoExcluded, Undecided };

std::string to_string(ConstructionKind k);
std::string to_string(F0Type t);
std::string to_string(KodairaDim k);

/// A completed surface model: boundary graph D, exceptional graph E
/// (resolution graphs of the singular points), the ruling with tagged
/// fibers, and the construction bookkeeping the case analysis needs.
struct SurfaceModel {
  ConstructionKind kind = ConstructionKind::AffineRuled;
  WeightedGraph boundary;     // D
  WeightedGraph exceptional;  // E
  RulingDescriptor ruling;
  std::vector<VertexId> d_horizontal;
  std::vector<VertexId> e_horizontal;

  F0Type f0_type = F0Type::None;
  bool eta_trivial = true;
  int n_columnar = 0;
  std::vector<Int> mu;     // multiplicities of the columnar (-1)-curves
  std::vector<Int> d_e_i;  // d(E_i) per fiber (1 when E_i is empty)

  // F0 data for C*-ruled kinds
  std::size_t f0_index = static_cast<std::size_t>(-1);
  VertexId f0_c = -1;
  VertexId f0_ctilde = -1;  // untwisted base C1; rivet component for base P1
  Int mu_c = 0, mu_ctilde = 0;
  bool s0_components_meet_d = true;  // both S0-components of F0 meet D

  Int b2_total = 0;

  const TaggedFiber* f0() const {
    return f0_index == static_cast<std::size_t>(-1) ? nullptr : &ruling.fibers[f0_index];
  }
};

// --- constructions ---------------------------------------------------------

/// Fiber specification for the affine-ruled construction: a blowup
/// history starting from the smooth fiber through the chosen point of the
/// horizontal section. The first step must sprout the root; the section
/// then follows the first exceptional curve (vertex 1) and is not touched
/// again.
struct AffineFiberSpec {
  std::vector<BlowupStep> history;
};

SurfaceModel construct_affine_ruled(const std::vector<AffineFiberSpec>& specs);

SurfaceModel construct_nonextendable(const Int& N, std::int64_t genus,
                                     const std::vector<Rat>& tilde_e_list);

/// One step of the F0 program of a C*-ruled construction. Vertices are
/// referenced by the growing fiber's ids (creation order). A sprouting
/// step may consume a section slot: the center is then the intersection
/// with that section, which moves onto the new vertex and keeps the step
/// subdivisional for the total divisor.
struct CstarF0Step {
  enum class Kind { Sprout, Subdiv };
  Kind kind = Kind::Sprout;
  VertexId a = -1;
  VertexId b = -1;   // subdiv only
  int at_slot = -1;  // sprout only: 0 = first section, 1 = second
};

struct CstarParams {
  ConstructionKind kind = ConstructionKind::Twisted;
  std::vector<Rat> columnar;      // tilde-e of F_1..F_n
  std::optional<Rat> f0_base;     // columnar base of F0 (untwisted kinds)
  std::vector<CstarF0Step> f0_steps;
  Int p1_degree = 1;              // N of the Hirzebruch base (untwisted P1)
};

SurfaceModel construct_cstar(const CstarParams& p);

// --- validators and invariants ---------------------------------------------

struct Check {
  std::string clause;
  bool pass = true;
  bool hard = true;
  std::string detail;
};

struct ValidatorReport {
  std::vector<Check> checks;
  bool all_hard_pass() const;
};

/// The Q-acyclicity validators: unique horizontal boundary component, D a
/// tree with b1(D) = b1(E), Fujita count h + nu - 2, nu <= 1, d(D)
/// nonzero (direct determinant plus the per-case criteria), d(D) < 0 and
/// E negative definite.
ValidatorReport verify_qacyclicity(const SurfaceModel& m);

/// |H1|: the positive square root of |d(D)| / |d(E)|; requires b1(E) = 0.
Int h1_order(const SurfaceModel& m);

/// Cyclic orders mu(C_i)/d(E_i) of H1 for affine-ruled models.
std::vector<Int> h1_group_affine_ruled(const SurfaceModel& m);

struct KodairaSigns {
  Rat lambda, kappa, kappa0;
  KodairaDim dim_s = KodairaDim::Undecided;
  KodairaDim dim_s0 = KodairaDim::Undecided;
};

/// Case dispatch of the (kappa, kappa0) table for C*-ruled models.
KodairaSigns kodaira_signs(const SurfaceModel& m);

/// The raw table: lambda = n + nu - 1 - sum(1/mu_i); (kappa, kappa0) per
/// F0 type. `mu` and `mu_tilde` are the S0-multiplicities in F0; for
/// B(iii) pass the multiplicity of the component disjoint from E as `mu`.
KodairaSigns kodaira_table(F0Type type, int n, const std::vector<Int>& mu_list,
                           const Int& mu, const Int& mu_tilde);

/// alpha = n - 2 + 2 g(B) - sum(1/mu_i); its sign is the Kodaira
/// dimension of the smooth locus, while the surface itself always has
/// negative Kodaira dimension for this kind.
Rat alpha_nonextendable(const SurfaceModel& m);

KodairaDim sign_to_dim(const Rat& x);

/// Laufer's algorithm: start from the reduced divisor and add any vertex
/// with Z.E_v > 0 until Z.E_v <= 0 everywhere.
MultiDivisor fundamental_cycle(const WeightedGraph& e);

enum class Rationality { Rational, NotRational, Undecided };

/// Artin's criterion via the fundamental cycle: rational iff p_a(Z) = 0.
/// Graphs with a cycle or positive genus are never rational.
Rationality is_rational_singularity(const WeightedGraph& e);

bool is_platonic_triple(const Int& x1, const Int& x2, const Int& x3);

/// Number r of C*-rulings of the smooth locus, by the classification:
/// 0 would be general type (not representable here), 1 for kappa0 > 0 or
/// non-logarithmic models, fork dispatch for kappa0 < 0, boundary pattern
/// dispatch for kappa0 = 0.
int count_cstar_rulings(const SurfaceModel& m);

/// Matches the strongly balanced boundary against the three displayed
/// dual graphs with one, two or three C*-rulings; 1, 2 or 3 on a match.
std::optional<int> match_ruling_pattern(const WeightedGraph& standard_boundary);

struct ContractibleCount {
  int min = 0, max = 0;
  bool exact() const { return min == max; }
};

/// Number of topologically contractible curves for models whose smooth
/// locus has Kodaira dimension 0.
ContractibleCount count_contractible_curves(const SurfaceModel& m);

/// 2 for untwisted base-C1 rulings with at least one columnar fiber,
/// otherwise 1. Affine-ruled models are excluded from the count.
int strongly_balanced_completion_count(const SurfaceModel& m);

/// The two exceptional planes (no C1- and no C*-ruling of the smooth
/// locus) are carried as a classification label only: their smooth loci
/// admit no C*-rulings and they contain no contractible curves.
inline int exceptional_plane_ruling_count() { return 0; }
inline ContractibleCount exceptional_plane_contractible_count() { return {0, 0}; }

// --- aggregate report -------------------------------------------------------

struct SingularityReport {
  SingularityDescriptor desc;
  Rationality rationality = Rationality::Undecided;
  Rat pa_fundamental_cycle;
};

struct InvariantReport {
  Int d_boundary, d_exceptional;
  std::optional<Int> h1;
  std::vector<Int> h1_group;
  std::optional<Rat> lambda, kappa, kappa0, alpha;
  KodairaDim kod_s = KodairaDim::Undecided;
  KodairaDim kod_s0 = KodairaDim::Undecided;
  std::vector<SingularityReport> singularities;
  std::optional<int> ruling_count;
  std::optional<ContractibleCount> contractible;
  std::optional<int> balanced_completions;
  ValidatorReport validators;
};

InvariantReport analyze(const SurfaceModel& m);

}  // namespace qhp
