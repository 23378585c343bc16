#pragma once

#include <optional>
#include <string>
#include <vector>

#include "circlerev/eval_map.hpp"
#include "circlerev/pl_map.hpp"
#include "circlerev/reversibility.hpp"
#include "circlerev/sampling.hpp"

namespace circlerev {

struct VerificationReport {
    std::size_t samples = 0;
    bool all_pass = false;
    std::optional<CirclePoint> failing_sample;
    std::string failed_check;
    std::size_t max_denominator_bits = 0;
    std::int64_t unwind_steps = 0;
    double elapsed_ms = 0;
};

// Raised when a constructed witness fails its own exact verification; this
// indicates a construction bug, never legitimate input.
struct verification_error : std::runtime_error {
    CirclePoint sample;
    verification_error(std::string what, CirclePoint s)
        : std::runtime_error(std::move(what)), sample(std::move(s)) {}
};

struct Witness {
    Route route;
    PLMap target;
    std::vector<EvalMap> involutions;  // one reverser, or three factors
    VerificationReport verification;
    std::string notes;  // matching/audit metadata
};

struct FactorOptions {
    SamplePlan plan;
    std::int64_t cap = 1000000;
    long max_period = 64;
    long max_iterations = 100000;
};

// Exact checks of the defining equations at the plan's samples: involution
// laws plus either the reversal law or the three-factor composition law.
VerificationReport verify_witness(const Witness& w, const SamplePlan& plan);

// Orientation preserving involution reversing f; requires a half-turn plan.
Witness involution_rot0(const PLMap& f, const ComponentMatching& plan,
                        const FactorOptions& opt = {});

// Orientation reversing involution reversing f; requires a reflection plan
// (with pins when the plan must exchange designated points).
Witness reversing_involution_rot0(const PLMap& f, const ComponentMatching& plan,
                                  const FactorOptions& opt = {});

// Reversing involution for nonzero rational rotation number.
Witness involution_two_ii(const PLMap& f, const FactorOptions& opt = {});

// Reversing involution for an orientation reversing map.
Witness involution_two_minus(const PLMap& f, const FactorOptions& opt = {});

// Three orientation preserving involutions composing to f.
Witness factor_three_involutions(const PLMap& f, const FactorOptions& opt = {});

// Dispatch a YES verdict to its construction route.
Witness factor_strongly_reversible(const PLMap& f, const Verdict& verdict,
                                   const FactorOptions& opt = {});

// Conjugator c of degree epsilon with c o f = g o c for maps with equal
// certified nonzero rational rotation number (negated when epsilon = -1),
// built on a fundamental gap between periodic points and transported by the
// dynamics.  Returns nullopt when no block alignment is compatible.
std::optional<EvalMap> build_periodic_conjugator(const PLMap& f, const PLMap& g, int epsilon,
                                                 const DecisionOptions& opt = {},
                                                 std::int64_t cap = 1000000);

// Orientation reversing gamma: J -> J2 with gamma o g^{-1} o gamma = g, for an
// orientation preserving g: J -> J2 between disjoint nontrivial closed arcs.
EvalMap involution_between_intervals(const EvalMap& g, const Arc& J, const Arc& J2);

}  // namespace circlerev
