#pragma once

#include <optional>
#include <string>

#include "circlerev/dynamics.hpp"
#include "circlerev/eval_map.hpp"
#include "circlerev/pl_map.hpp"

namespace circlerev {

// Construction route a YES verdict commits to.
enum class Route { rot0, two_i_reversing, two_ii, two_minus, three_involutions, rot_half_trivial };
std::string route_name(Route r);

struct MatchConstraints {
    // The matching must exchange these two points.
    std::optional<std::pair<CirclePoint, CirclePoint>> swap_points;
};

// Shift by half the word length with every sign flipped and kinds preserved;
// the only shift realizable by a conjugator of rotation number 1/2.
std::optional<ComponentMatching> half_turn_matching(const SignatureWord& w);

// Scan all 2m reflection axes of the doubled alternating sequence; accept the
// first type-preserving axis that preserves kinds and signs and honors the
// point constraints.
std::optional<ComponentMatching> reflection_matching(const SignatureWord& w,
                                                     const MatchConstraints& constraints = {});

// PL homeomorphism realizing a matching on a word: affine on each component
// and each complementary interval, pinned at component endpoints and at the
// matching's pins.
PLMap realize_matching(const SignatureWord& w, const ComponentMatching& m);

enum class VerdictKind { yes, no, unknown };
enum class Group { hplus, h };

struct Verdict {
    VerdictKind kind;
    Group group;
    std::string reason;
    std::optional<Route> route;
    std::optional<ComponentMatching> plan;
    std::optional<Rat> rho;  // certified rotation number, when known

    bool yes() const { return kind == VerdictKind::yes; }
    bool no() const { return kind == VerdictKind::no; }
    bool unknown() const { return kind == VerdictKind::unknown; }
};

struct DecisionOptions {
    long max_period = 64;
    long max_iterations = 100000;
};

// Strong reversibility in the orientation preserving group.
Verdict decide_strongly_reversible_hplus(const PLMap& f, const DecisionOptions& opt = {});
// Strong reversibility in the full homeomorphism group.
Verdict decide_strongly_reversible_h(const PLMap& f, const DecisionOptions& opt = {});

// Conjugator c of degree epsilon with c o f = g o c, or nullopt if the maps
// are not so conjugate.  Throws uncertified_error when a rotation number is
// only bracketed; rejects mixed degrees.
std::optional<EvalMap> conjugate_in_h(const PLMap& f, const PLMap& g, int epsilon,
                                      const DecisionOptions& opt = {});

// Test oracle: all shifts k of the word for which sign flip, kind
// preservation and the rotation-number-1/2 constraint (2k = m) hold.
std::vector<long> naive_half_turn_shifts(const SignatureWord& w);

}  // namespace circlerev
