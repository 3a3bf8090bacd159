#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ofdma/core.hpp"
#include "ofdma/exact.hpp"

namespace ofdma {

/// 3-dimensional matching instance over X, Y, Z of common size K.
/// Triple components are 0-based indices in [0, K).
struct Triple {
  int x = 0;
  int y = 0;
  int z = 0;
  friend bool operator==(const Triple&, const Triple&) = default;
};

struct ThreeDMInstance {
  int size = 0;
  std::vector<Triple> triples;  // duplicate-free subset of X x Y x Z
};

struct Match {
  std::vector<Triple> chosen;
};

struct SizeBoundExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> validate_3dm(const ThreeDMInstance& tdm);

/// True iff chosen is a subset of the triples, its triples are pairwise
/// disjoint in every coordinate, and it covers X, Y, and Z completely.
bool is_match(const ThreeDMInstance& tdm, const Match& m);

/// Backtracking matcher (the verification oracle for the reductions).
/// Throws SizeBoundExceeded above size_bound.
std::optional<Match> solve_3dm_exact(const ThreeDMInstance& tdm, int size_bound = 8);

/// Deterministic random instance with duplicate-free triples.
ThreeDMInstance random_3dm(int size, int num_triples, std::uint64_t seed);

/// The largest relation with the same per-user (x,y) and (x,z) projections:
/// every mixed pair (x, y, z) with (x,y) and (x,z) each appearing in some
/// triple of the input. The feasibility gadget's channel parameters depend on
/// the relation only through these projections, so the reduced instance is
/// feasible iff the closure has a match; the instance cannot distinguish a
/// relation from its closure.
ThreeDMInstance pair_closure(const ThreeDMInstance& tdm);

/// True iff the relation equals its pair closure (each user's triples form a
/// full rectangle Y_x x Z_x). On this family a closure match is a match of
/// the relation itself, so the reduction round-trip is exact.
bool is_pair_closed(const ThreeDMInstance& tdm);

/// Random pair-closed instance: each user draws a rectangle Y_x x Z_x with
/// |Y_x|*|Z_x| <= size, so the triple count lies in [size, size^2].
ThreeDMInstance random_closed_3dm(int size, std::uint64_t seed);

/// Min-power feasibility gadget: K users, 2K subcarriers (the Y block then
/// the Z block). Budgets 3 on Y and 2 on Z; noise 1 on the S1 pairs, 2 on the
/// S2 pairs, 3 elsewhere; gain 1 exactly on S1 and S2, 0.25 elsewhere; every
/// rate target 3. The instance is feasible iff the matching instance has a
/// match.
OfdmaInstance reduce_feasibility(const ThreeDMInstance& tdm);

/// The witness allocation of a match: user x transmits 3 on subcarrier y and
/// 2 on subcarrier K+z, reaching rate exactly 3. Throws when m is not a
/// match.
PowerAllocation match_to_allocation(const ThreeDMInstance& tdm, const Match& m);

enum class NodeRole { TypeI, TypeII };

/// A gadget instance padded to an arbitrary rational subcarrier/user ratio
/// c > 1: the Type-I block embeds the basic c=2 gadget, the Type-II users
/// and subcarriers are dummies whose targets are met by full power on their
/// own block. threshold is set by the utility reductions only.
struct ReducedInstanceBundle {
  OfdmaInstance instance;
  std::optional<double> threshold;
  std::vector<NodeRole> user_roles;
  std::vector<NodeRole> subcarrier_roles;
};

/// Feasibility gadget at ratio c = c_num/c_den > 1. The 3DM size fixes the
/// Type-I user count; role counts must come out integral, otherwise an
/// exception names the required divisibility. c = 2 is the basic gadget.
ReducedInstanceBundle reduce_feasibility_c(const ThreeDMInstance& tdm, long c_num, long c_den);

/// Utility-threshold gadget: the feasibility gadget's channel with rate
/// targets replaced by total power budgets (5 per Type-I user) and the
/// decision threshold for the given utility. At c = 2 the threshold is 3 for
/// all four utilities; padded ratios use the utility of the ideal rate
/// profile ([3] per Type-I user, [log2 11] per case-(i) Type-II user, or one
/// [N2*log2 11] entry).
ReducedInstanceBundle reduce_utility(const ThreeDMInstance& tdm, UtilityKind kind,
                                     long c_num = 2, long c_den = 1);

enum class ReductionVariant { Feasibility, FeasibilityC, Utility };

struct RoundTripOptions {
  ReductionVariant variant = ReductionVariant::Feasibility;
  long c_num = 2;
  long c_den = 1;
  UtilityKind kind = UtilityKind::SumRate;
  int solver_bound = 8;
  ExactOptions exact;
};

struct RoundTripResult {
  bool tdm_answer = false;
  bool ofdma_answer = false;
  bool agree = false;
};

/// Executes both sides of the reduction's iff-claim: the matching oracle on
/// the 3DM instance and the exact solver on the reduced OFDMA instance.
RoundTripResult verify_reduction_roundtrip(const ThreeDMInstance& tdm,
                                           const RoundTripOptions& opts);

}  // namespace ofdma
