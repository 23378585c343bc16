#pragma once

#include <optional>
#include <string>
#include <vector>

#include "circlerev/circle.hpp"
#include "circlerev/pl_map.hpp"

namespace circlerev {

struct uncertified_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FixComponent {
    bool is_arc;
    CirclePoint a;  // point, or arc start
    CirclePoint b;  // arc end (== a for points)
    Arc arc() const { return is_arc ? Arc(a, b, ArcClosure::closed) : Arc(a, a, ArcClosure::closed); }
    CirclePoint start() const { return a; }
    CirclePoint end() const { return is_arc ? b : a; }
    bool contains(const CirclePoint& x) const { return arc().contains(x); }
    friend bool operator==(const FixComponent&, const FixComponent&) = default;
};

// Maximal components of {x : f(x) = x}, anticlockwise, starting from the
// component containing 0 (else the first one after 0).
struct FixSet {
    bool full = false;  // identity map
    std::vector<FixComponent> comps;

    bool empty() const { return !full && comps.empty(); }
    std::optional<std::size_t> component_containing(const CirclePoint& x) const;
    // Open interval of S \ fix(f) after component i: start point and length.
    // A lone point component is followed by the whole punctured circle, which
    // an Arc cannot represent, hence the split form.
    CirclePoint gap_start(std::size_t i) const;
    Rat gap_length(std::size_t i) const;
};

FixSet fixed_points(const PLMap& f);

enum class BlockKind { point, arc };

struct SignatureBlock {
    BlockKind kind;
    FixComponent geom;
    int sign;  // +/-1 on the open interval following this component
    friend bool operator==(const SignatureBlock&, const SignatureBlock&) = default;
};

// Cyclic word of fixed-set components and the signs of the complementary
// intervals between them; the combinatorial form of the signature function.
struct SignatureWord {
    bool identity = false;  // empty word, signature identically 0
    std::vector<SignatureBlock> blocks;

    std::size_t size() const { return blocks.size(); }
    std::string str() const;
};

// Requires deg(f) = 1 and a nonempty fixed set (or the identity map).
SignatureWord signature(const PLMap& f);

// Signature value of f at x, given fix(f).
int delta_at(const PLMap& f, const FixSet& fix, const CirclePoint& x);
int delta_at(const PLMap& f, const CirclePoint& x);

struct IdentityCheckReport {
    bool pass = true;
    std::string failed_identity;
    std::optional<CirclePoint> counterexample;
    std::size_t samples = 0;
};

// Exact pointwise check of the two signature identities relating f, h and
// conjugation/inversion, at the given sample points.
IdentityCheckReport signature_identities_check(const PLMap& f, const PLMap& h,
                                               const std::vector<CirclePoint>& samples);

struct RotationNumberResult {
    enum class Kind { rational, bracket } kind;
    // kind == rational: rho = p/q in lowest terms with an exact periodic
    // witness x satisfying f^q(x) = x and no smaller period.
    Rat rho;
    CirclePoint witness;
    long period = 0;
    // kind == bracket: lo <= rho(f) <= hi with hi - lo <= 2/iterations.
    Rat lo, hi;
    long iterations = 0;

    bool is_rational() const { return kind == Kind::rational; }
};

// Rigorous rotation number: lift iteration brackets rho, and every reduced
// p/q inside the bracket with q <= max_period is tested exactly; the test
// order is lowest denominator first, so a rational hit is the minimal period.
RotationNumberResult rotation_number(const PLMap& f, long max_period = 64,
                                     long max_iterations = 100000);

struct MinimalPeriod {
    long period;
    CirclePoint witness;
};

// Minimal period of f, cross-checked exactly: fix(f^n) is empty for n < q and
// nonempty for n = q.  Throws uncertified_error when rho(f) only bracketed.
MinimalPeriod minimal_period(const PLMap& f, long max_period = 64, long max_iterations = 100000);

// All reduced fractions in [lo, hi] with denominator <= qmax, ordered by
// (denominator, numerator).  Exposed for testing against a naive scan.
std::vector<Rat> stern_brocot_candidates(const Rat& lo, const Rat& hi, long qmax);

std::string block_kind_name(BlockKind k);

}  // namespace circlerev
