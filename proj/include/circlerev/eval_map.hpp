#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "circlerev/circle.hpp"
#include "circlerev/dynamics.hpp"
#include "circlerev/pl_map.hpp"

namespace circlerev {

// Open arc (a,b), with a == b meaning the full circle punctured at a.  The
// complementary interval of a one-point fixed set needs this; a plain Arc
// with start == end would be empty by convention.
struct OpenSpan {
    CirclePoint a, b;
    bool punctured = false;

    static OpenSpan from_arc(const Arc& arc) {
        if (arc.is_full()) throw precondition_error("span must be proper");
        return OpenSpan{arc.start(), arc.end(), false};
    }
    static OpenSpan punctured_circle(const CirclePoint& p) { return OpenSpan{p, p, true}; }

    Rat length() const { return punctured ? Rat(1) : a.distance_to(b); }
    bool interior_contains(const CirclePoint& x) const {
        if (punctured) return x != a;
        Rat d = a.distance_to(x);
        return d > 0 && d < length();
    }
    // Offset from a along the span; defined on the closure.
    Rat position(const CirclePoint& x) const { return punctured && x == a ? Rat(0) : a.distance_to(x); }
    std::string str() const { return "(" + a.str() + "," + b.str() + (punctured ? " punctured)" : ")"); }
    friend bool operator==(const OpenSpan&, const OpenSpan&) = default;
};

// Affine bijection between two closed arcs of equal or different length.
struct AffineArcMap {
    CirclePoint src_start;
    Rat src_len;  // > 0
    CirclePoint dst_start;
    Rat dst_len;  // > 0
    bool reversing = false;

    CirclePoint apply(const CirclePoint& x) const {
        Rat u = src_start.distance_to(x);
        if (u > src_len) throw precondition_error("affine arc map: point outside domain");
        Rat v = u * dst_len / src_len;
        return dst_start.advanced_by(reversing ? dst_len - v : v);
    }
    AffineArcMap inverted() const {
        AffineArcMap r;
        r.src_start = dst_start;
        r.src_len = dst_len;
        r.dst_start = src_start;
        r.dst_len = src_len;
        r.reversing = reversing;
        return r;
    }
    friend bool operator==(const AffineArcMap&, const AffineArcMap&) = default;
};

struct EvalStats {
    std::int64_t unwind_steps = 0;
    std::size_t max_denominator_bits = 0;
    void note(const Rat& q) {
        std::size_t b = denominator_bits(q);
        if (b > max_denominator_bits) max_denominator_bits = b;
    }
};

class EvalMap;

namespace detail {

struct EvalNode;
using NodePtr = std::shared_ptr<const EvalNode>;

// Conjugacy transported along an orbit: on the source span, with fwd the
// forward (anticlockwise) fixed-point-free generator and base map k0 defined
// on the fundamental domain [x0, fwd(x0)], the node evaluates
//     x = fwd^n(d), d in D  ->  tgt^(n + o) (k0(d)),
// with o = 1 when k0 reverses.  Both endpoints of the span carry explicit
// images.  tgt moves the same way as fwd on the target span when k0
// preserves, and the opposite way when k0 reverses.
struct TransportData {
    PLMap fwd, fwd_inv;
    PLMap tgt, tgt_inv;
    OpenSpan src, dst;
    CirclePoint img_a, img_b;
    CirclePoint x0;
    AffineArcMap k0;
    std::int64_t cap = 1000000;
};

TransportData make_transport(PLMap f, PLMap g, const OpenSpan& src, const OpenSpan& dst,
                             bool reversing, std::int64_t cap);

struct EvalNode {
    enum class Kind { pl, affine_arc, piecewise, compose, inverse, transport };
    Kind kind;

    std::optional<PLMap> pl;
    std::optional<AffineArcMap> affine;
    std::vector<std::pair<Arc, NodePtr>> pieces;  // contiguous closed arcs
    bool pieces_wrap = false;                     // cover the whole circle
    std::vector<NodePtr> factors;                 // compose: apply last first
    NodePtr inner, inner_inverted;                // inverse
    std::optional<TransportData> transport;
};

}  // namespace detail

// Lazily evaluated circle (or arc) map built from combinators.  Exact at
// every rational point; constructed involutions generally have breakpoints
// accumulating at fixed points, so no finite PL form exists.
class EvalMap {
  public:
    EvalMap();  // identity

    static EvalMap identity();
    static EvalMap pl(PLMap m);
    static EvalMap affine_arc(AffineArcMap m);
    // Pieces must form a contiguous chain of closed arcs (wrapping iff they
    // cover the circle) whose maps agree exactly at shared endpoints.
    static EvalMap piecewise(std::vector<std::pair<Arc, EvalMap>> pieces);
    // compose({f, g}) is f o g: the last factor is applied first.
    static EvalMap compose(std::vector<EvalMap> factors);
    static EvalMap inverse_of(const EvalMap& m);
    static EvalMap transport(detail::TransportData data);

    CirclePoint eval(const CirclePoint& x, EvalStats* stats = nullptr) const;
    CirclePoint operator()(const CirclePoint& x) const { return eval(x); }

    EvalMap inverted() const;

    const detail::EvalNode& node() const { return *node_; }
    detail::NodePtr node_ptr() const { return node_; }
    static EvalMap from_node(detail::NodePtr n) { return EvalMap(std::move(n)); }

  private:
    explicit EvalMap(detail::NodePtr n) : node_(std::move(n)) {}
    detail::NodePtr node_;
};

// Orientation-reversing involution of the closed span that conjugates f to
// f^{-1} there.  f must map the span onto itself with no fixed point inside.
EvalMap reverse_on_arc(const PLMap& f, const OpenSpan& span, std::int64_t cap = 1000000);
EvalMap reverse_on_arc(const PLMap& f, const Arc& open_arc, std::int64_t cap = 1000000);

// How a block map realizes h: block i of the source word maps to block
// shift + i (preserving) or axis/2 - i (reversing, axis even, on the doubled
// alternating sequence).
struct ComponentMatching {
    bool reversing = false;
    long shift = 0;
    long axis = 0;
    std::vector<std::pair<CirclePoint, CirclePoint>> pins;  // h(first) = second

    long block_image(long i, long m) const {
        long j = reversing ? (axis / 2 - i) : (i + shift);
        j %= m;
        if (j < 0) j += m;
        return j;
    }
    // Interval following block i maps to the interval following block_image's
    // predecessor when reversing.
    long interval_image(long i, long m) const {
        long j = reversing ? (axis / 2 - i - 1) : (i + shift);
        j %= m;
        if (j < 0) j += m;
        return j;
    }
    std::string str() const {
        return reversing ? "axis " + std::to_string(axis) : "shift " + std::to_string(shift);
    }
};

// Conjugator k with k o f = g o k mapping each fixed-set component of f onto
// its matched component of g.  Rejects kind/sign mismatches before building.
EvalMap equivariant_conjugator(const PLMap& f, const PLMap& g, const ComponentMatching& matching,
                               std::int64_t cap = 1000000);

// Conjugator on a closed sub-arc: F fixes [a,b] endpointwise, G fixes [a2,b2]
// endpointwise; returns k: [a,b] -> [a2,b2] with k o F = G o k, matching the
// fixed structure inside in order (reversed and sign-flipped when reversing).
EvalMap arc_conjugator(const PLMap& F, const PLMap& G, const Arc& src, const Arc& dst,
                       bool reversing, std::int64_t cap = 1000000);

// JSON round-trip hooks implemented in json_io.cpp.
std::string eval_map_to_json(const EvalMap& m);
EvalMap eval_map_from_json(const std::string& text);

}  // namespace circlerev
