#include "circlerev/eval_map.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

namespace circlerev {

using detail::EvalNode;
using detail::NodePtr;
using detail::TransportData;

namespace {

NodePtr make_node(EvalNode n) { return std::make_shared<const EvalNode>(std::move(n)); }

CirclePoint eval_node(const EvalNode& n, const CirclePoint& x, EvalStats* stats);

CirclePoint transport_eval(const TransportData& t, const CirclePoint& x, EvalStats* stats) {
    if (x == t.src.a) return t.img_a;
    if (!t.src.punctured && x == t.src.b) return t.img_b;
    if (!t.src.interior_contains(x))
        throw precondition_error("transport: point " + x.str() + " outside span " + t.src.str());
    Rat p0 = t.src.position(t.x0);
    Rat p1 = t.src.position(t.fwd(t.x0));
    CirclePoint d = x;
    Rat pd = t.src.position(d);
    long n = 0;
    std::int64_t steps = 0;
    while (!(pd >= p0 && pd < p1)) {
        if (++steps > t.cap) throw eval_limit_error(x.value(), steps);
        if (pd < p0) {
            d = t.fwd(d);
            --n;
        } else {
            d = t.fwd_inv(d);
            ++n;
        }
        pd = t.src.position(d);
    }
    if (stats) {
        stats->unwind_steps += steps;
        stats->note(pd);
    }
    CirclePoint y = t.k0.apply(d);
    long e = n + (t.k0.reversing ? 1 : 0);
    const PLMap& step = e >= 0 ? t.tgt : t.tgt_inv;
    for (long i = 0, m = std::labs(e); i < m; ++i) y = step(y);
    if (stats) stats->note(y.value());
    return y;
}

CirclePoint piecewise_eval(const EvalNode& n, const CirclePoint& x, EvalStats* stats) {
    const CirclePoint& base = n.pieces.front().first.start();
    Rat p = base.distance_to(x);
    Rat cum(0);
    for (const auto& [arc, sub] : n.pieces) {
        Rat len = arc.length();
        if (p >= cum && p <= cum + len) return eval_node(*sub, x, stats);
        cum += len;
    }
    throw precondition_error("piecewise: point " + x.str() + " outside domain");
}

CirclePoint eval_node(const EvalNode& n, const CirclePoint& x, EvalStats* stats) {
    switch (n.kind) {
        case EvalNode::Kind::pl: {
            CirclePoint y = (*n.pl)(x);
            if (stats) stats->note(y.value());
            return y;
        }
        case EvalNode::Kind::affine_arc:
            return n.affine->apply(x);
        case EvalNode::Kind::piecewise:
            return piecewise_eval(n, x, stats);
        case EvalNode::Kind::compose: {
            CirclePoint y = x;
            for (auto it = n.factors.rbegin(); it != n.factors.rend(); ++it)
                y = eval_node(**it, y, stats);
            return y;
        }
        case EvalNode::Kind::inverse:
            return eval_node(*n.inner_inverted, x, stats);
        case EvalNode::Kind::transport:
            return transport_eval(*n.transport, x, stats);
    }
    throw precondition_error("eval: bad node");
}

NodePtr invert_node(const NodePtr& n);

// Image of a closed arc under a node, oriented so that the midpoint lands
// inside; used to invert piecewise covers.
Arc image_arc(const EvalNode& n, const Arc& a) {
    CirclePoint ia = eval_node(n, a.start(), nullptr);
    CirclePoint ib = eval_node(n, a.end(), nullptr);
    CirclePoint mid = a.start().advanced_by(a.length() / 2);
    CirclePoint im = eval_node(n, mid, nullptr);
    Arc fwd(ia, ib, ArcClosure::closed);
    if (fwd.contains(im) && ia != ib) return fwd;
    return Arc(ib, ia, ArcClosure::closed);
}

NodePtr invert_node(const NodePtr& n) {
    EvalNode r;
    switch (n->kind) {
        case EvalNode::Kind::pl:
            r.kind = EvalNode::Kind::pl;
            r.pl = n->pl->inverse();
            return make_node(std::move(r));
        case EvalNode::Kind::affine_arc:
            r.kind = EvalNode::Kind::affine_arc;
            r.affine = n->affine->inverted();
            return make_node(std::move(r));
        case EvalNode::Kind::compose: {
            r.kind = EvalNode::Kind::compose;
            for (auto it = n->factors.rbegin(); it != n->factors.rend(); ++it)
                r.factors.push_back(invert_node(*it));
            return make_node(std::move(r));
        }
        case EvalNode::Kind::inverse:
            return n->inner;
        case EvalNode::Kind::piecewise: {
            std::vector<std::pair<Arc, EvalMap>> pieces;
            for (const auto& [arc, sub] : n->pieces)
                pieces.emplace_back(image_arc(*sub, arc), EvalMap::from_node(invert_node(sub)));
            return EvalMap::piecewise(std::move(pieces)).node_ptr();
        }
        case EvalNode::Kind::transport: {
            const TransportData& t = *n->transport;
            TransportData s;
            if (t.k0.reversing) {
                s.fwd = t.tgt_inv;
                s.fwd_inv = t.tgt;
                s.tgt = t.fwd_inv;
                s.tgt_inv = t.fwd;
            } else {
                s.fwd = t.tgt;
                s.fwd_inv = t.tgt_inv;
                s.tgt = t.fwd;
                s.tgt_inv = t.fwd_inv;
            }
            s.src = t.dst;
            s.dst = t.src;
            s.x0 = t.k0.dst_start;
            s.k0 = t.k0.inverted();
            if (t.k0.reversing) {
                s.img_a = t.src.punctured ? t.src.a : t.src.b;
                s.img_b = t.src.a;
            } else {
                s.img_a = t.src.a;
                s.img_b = t.src.punctured ? t.src.a : t.src.b;
            }
            s.cap = t.cap;
            r.kind = EvalNode::Kind::transport;
            r.transport = std::move(s);
            return make_node(std::move(r));
        }
    }
    throw precondition_error("invert: bad node");
}

}  // namespace

class EvalMapAccess;

EvalMap::EvalMap() : node_(nullptr) {
    EvalNode n;
    n.kind = EvalNode::Kind::pl;
    n.pl = PLMap::identity();
    node_ = make_node(std::move(n));
}

EvalMap EvalMap::identity() { return EvalMap(); }

EvalMap EvalMap::pl(PLMap m) {
    EvalNode n;
    n.kind = EvalNode::Kind::pl;
    n.pl = std::move(m);
    return EvalMap(make_node(std::move(n)));
}

EvalMap EvalMap::affine_arc(AffineArcMap m) {
    if (m.src_len <= 0 || m.dst_len <= 0)
        throw precondition_error("affine arc map: degenerate arc");
    EvalNode n;
    n.kind = EvalNode::Kind::affine_arc;
    n.affine = std::move(m);
    return EvalMap(make_node(std::move(n)));
}

EvalMap EvalMap::piecewise(std::vector<std::pair<Arc, EvalMap>> pieces) {
    if (pieces.empty()) throw precondition_error("piecewise: no pieces");
    for (const auto& [arc, m] : pieces) {
        if (arc.is_full() || arc.length() == 0 || arc.closure() != ArcClosure::closed)
            throw precondition_error("piecewise: pieces must be proper closed arcs");
    }
    // Chain the pieces: each arc's end is the next arc's start.  The chain
    // either wraps (full-circle cover) or has a unique head.
    std::map<Rat, std::size_t> by_start;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (!by_start.emplace(pieces[i].first.start().value(), i).second)
            throw precondition_error("piecewise: two pieces share a start point");
    }
    std::size_t tails = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (!by_start.count(pieces[i].first.end().value())) ++tails;
    }
    bool wrap = tails == 0;
    std::size_t start_idx;
    if (wrap) {
        start_idx = 0;
    } else {
        if (tails != 1) throw precondition_error("piecewise: pieces do not form one chain");
        // Head = piece whose start is no piece's end.
        std::map<Rat, std::size_t> by_end;
        for (std::size_t i = 0; i < pieces.size(); ++i)
            by_end.emplace(pieces[i].first.end().value(), i);
        start_idx = pieces.size();
        for (std::size_t i = 0; i < pieces.size(); ++i)
            if (!by_end.count(pieces[i].first.start().value())) {
                if (start_idx != pieces.size())
                    throw precondition_error("piecewise: pieces do not form one chain");
                start_idx = i;
            }
        if (start_idx == pieces.size())
            throw precondition_error("piecewise: pieces do not form one chain");
    }

    std::vector<std::pair<Arc, EvalMap>> ordered;
    std::vector<bool> used(pieces.size(), false);
    std::size_t cur = start_idx;
    Rat total(0);
    for (std::size_t step = 0; step < pieces.size(); ++step) {
        if (used[cur]) throw precondition_error("piecewise: pieces revisit a point");
        used[cur] = true;
        ordered.push_back(pieces[cur]);
        total += pieces[cur].first.length();
        auto it = by_start.find(pieces[cur].first.end().value());
        if (it == by_start.end()) {
            if (step + 1 != pieces.size())
                throw precondition_error("piecewise: pieces do not form one chain");
            break;
        }
        cur = it->second;
    }
    if (std::find(used.begin(), used.end(), false) != used.end())
        throw precondition_error("piecewise: pieces do not form one chain");
    if (total > 1 || (wrap && total != 1))
        throw precondition_error("piecewise: pieces overlap or fail to cover");

    // Exact endpoint agreement at every junction.
    std::size_t junctions = wrap ? ordered.size() : ordered.size() - 1;
    for (std::size_t i = 0; i < junctions; ++i) {
        const auto& left = ordered[i];
        const auto& right = ordered[(i + 1) % ordered.size()];
        CirclePoint at = left.first.end();
        CirclePoint lv = left.second.eval(at);
        CirclePoint rv = right.second.eval(at);
        if (lv != rv)
            throw precondition_error("piecewise: endpoint values disagree at " + at.str() + ": " +
                                     lv.str() + " vs " + rv.str());
    }

    EvalNode n;
    n.kind = EvalNode::Kind::piecewise;
    n.pieces_wrap = wrap;
    for (auto& [arc, m] : ordered) n.pieces.emplace_back(arc, m.node_);
    return EvalMap(make_node(std::move(n)));
}

EvalMap EvalMap::compose(std::vector<EvalMap> factors) {
    if (factors.empty()) return identity();
    if (factors.size() == 1) return factors[0];
    EvalNode n;
    n.kind = EvalNode::Kind::compose;
    for (auto& f : factors) n.factors.push_back(f.node_);
    return EvalMap(make_node(std::move(n)));
}

EvalMap EvalMap::inverse_of(const EvalMap& m) {
    EvalNode n;
    n.kind = EvalNode::Kind::inverse;
    n.inner = m.node_;
    n.inner_inverted = invert_node(m.node_);
    return EvalMap(make_node(std::move(n)));
}

EvalMap EvalMap::transport(TransportData data) {
    EvalNode n;
    n.kind = EvalNode::Kind::transport;
    n.transport = std::move(data);
    return EvalMap(make_node(std::move(n)));
}

CirclePoint EvalMap::eval(const CirclePoint& x, EvalStats* stats) const {
    return eval_node(*node_, x, stats);
}

EvalMap EvalMap::inverted() const { return EvalMap(invert_node(node_)); }

namespace {

bool forward_on_span(const PLMap& f, const OpenSpan& span) {
    CirclePoint mid = span.a.advanced_by(span.length() / 2);
    CirclePoint img = f(mid);
    if (img == mid) throw precondition_error("span dynamics: fixed point at span midpoint");
    return span.position(img) > span.position(mid);
}

void require_span_invariant(const PLMap& f, const OpenSpan& span) {
    if (f(span.a) != span.a || f(span.b) != span.b)
        throw precondition_error("span dynamics: endpoints not fixed");
    FixSet fix = fixed_points(f);
    for (const auto& c : fix.comps) {
        if (span.interior_contains(c.start()) || span.interior_contains(c.end()))
            throw precondition_error("span dynamics: fixed point inside span " + span.str());
        if (c.is_arc && c.contains(span.a.advanced_by(span.length() / 2)))
            throw precondition_error("span dynamics: fixed arc covers span " + span.str());
    }
}

}  // namespace

namespace detail {

// Shared transport builder.  reversing selects a reversing base map, which
// requires tgt to move against fwd on the target span.
TransportData make_transport(PLMap f, PLMap g, const OpenSpan& src, const OpenSpan& dst,
                             bool reversing, std::int64_t cap) {
    require_span_invariant(f, src);
    require_span_invariant(g, dst);
    if (!forward_on_span(f, src)) {
        f = f.inverse();
        g = g.inverse();
    }
    bool g_forward = forward_on_span(g, dst);
    if (g_forward == reversing)
        throw precondition_error("transport: sign mismatch between spans");

    TransportData t;
    t.fwd = f;
    t.fwd_inv = f.inverse();
    t.tgt = g;
    t.tgt_inv = g.inverse();
    t.src = src;
    t.dst = dst;
    t.cap = cap;
    t.x0 = src.a.advanced_by(src.length() / 2);
    CirclePoint fx0 = t.fwd(t.x0);
    CirclePoint y0 = dst.a.advanced_by(dst.length() / 2);
    AffineArcMap k0;
    k0.src_start = t.x0;
    k0.src_len = t.x0.distance_to(fx0);
    if (!reversing) {
        k0.dst_start = y0;
        k0.dst_len = y0.distance_to(t.tgt(y0));
        k0.reversing = false;
        t.img_a = dst.a;
        t.img_b = dst.punctured ? dst.a : dst.b;
    } else {
        k0.dst_start = y0;
        k0.dst_len = y0.distance_to(t.tgt_inv(y0));
        k0.reversing = true;
        t.img_a = dst.punctured ? dst.a : dst.b;
        t.img_b = dst.a;
    }
    t.k0 = std::move(k0);
    return t;
}

}  // namespace detail

EvalMap reverse_on_arc(const PLMap& f, const OpenSpan& span, std::int64_t cap) {
    return EvalMap::transport(detail::make_transport(f, f.inverse(), span, span, true, cap));
}

EvalMap reverse_on_arc(const PLMap& f, const Arc& open_arc, std::int64_t cap) {
    return reverse_on_arc(f, OpenSpan::from_arc(open_arc), cap);
}

namespace {

OpenSpan gap_span(const FixSet& fix, std::size_t i) {
    const FixComponent& cur = fix.comps[i];
    const FixComponent& next = fix.comps[(i + 1) % fix.comps.size()];
    if (fix.comps.size() == 1 && !cur.is_arc) return OpenSpan::punctured_circle(cur.a);
    return OpenSpan{cur.end(), next.start(), false};
}

}  // namespace

EvalMap equivariant_conjugator(const PLMap& f, const PLMap& g, const ComponentMatching& matching,
                               std::int64_t cap) {
    if (f.degree() != 1 || g.degree() != 1)
        throw precondition_error("equivariant conjugator: maps must preserve orientation");
    if (f.is_identity() && g.is_identity()) return EvalMap::identity();
    SignatureWord wf = signature(f);
    SignatureWord wg = signature(g);
    if (wf.identity || wg.identity)
        throw precondition_error("equivariant conjugator: identity against non-identity");
    long m = (long)wf.size();
    if ((long)wg.size() != m)
        throw precondition_error("equivariant conjugator: component counts differ");
    for (long i = 0; i < m; ++i) {
        long j = matching.block_image(i, m);
        if (wf.blocks[i].kind != wg.blocks[j].kind)
            throw precondition_error("equivariant conjugator: kind mismatch at block " +
                                     std::to_string(i));
        long ji = matching.interval_image(i, m);
        int want = (matching.reversing ? -1 : 1) * wf.blocks[i].sign;
        if (wg.blocks[ji].sign != want)
            throw precondition_error("equivariant conjugator: sign mismatch at interval " +
                                     std::to_string(i));
    }
    FixSet ff = fixed_points(f);
    FixSet fg = fixed_points(g);

    if (m == 1 && !ff.comps[0].is_arc) {
        // Whole circle punctured at the lone fixed points.
        return EvalMap::transport(detail::make_transport(
            f, g, gap_span(ff, 0), gap_span(fg, 0), matching.reversing, cap));
    }

    std::vector<std::pair<Arc, EvalMap>> pieces;
    for (long i = 0; i < m; ++i) {
        long j = matching.block_image(i, m);
        const FixComponent& cf = ff.comps[i];
        const FixComponent& cg = fg.comps[j];
        if (cf.is_arc) {
            // Pins inside this block split the affine piece.
            std::vector<std::pair<CirclePoint, CirclePoint>> cuts;
            cuts.emplace_back(cf.a, matching.reversing ? cg.b : cg.a);
            for (const auto& [p, q] : matching.pins) {
                Rat off = cf.a.distance_to(p);
                if (off > 0 && off < cf.a.distance_to(cf.b)) cuts.emplace_back(p, q);
            }
            cuts.emplace_back(cf.b, matching.reversing ? cg.a : cg.b);
            std::sort(cuts.begin(), cuts.end(), [&](const auto& u, const auto& v) {
                return cf.a.distance_to(u.first) < cf.a.distance_to(v.first);
            });
            for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
                AffineArcMap am;
                am.reversing = matching.reversing;
                am.src_start = cuts[s].first;
                am.src_len = cuts[s].first.distance_to(cuts[s + 1].first);
                if (!matching.reversing) {
                    am.dst_start = cuts[s].second;
                    am.dst_len = cuts[s].second.distance_to(cuts[s + 1].second);
                } else {
                    am.dst_start = cuts[s + 1].second;
                    am.dst_len = cuts[s + 1].second.distance_to(cuts[s].second);
                }
                if (am.src_len <= 0 || am.dst_len <= 0)
                    throw precondition_error("equivariant conjugator: pin order invalid");
                pieces.emplace_back(Arc(cuts[s].first, cuts[s + 1].first, ArcClosure::closed),
                                    EvalMap::affine_arc(am));
            }
        }
        long ji = matching.interval_image(i, m);
        OpenSpan si = gap_span(ff, i);
        OpenSpan sj = gap_span(fg, ji);
        pieces.emplace_back(Arc(si.a, si.b, ArcClosure::closed),
                            EvalMap::transport(detail::make_transport(f, g, si, sj,
                                                                      matching.reversing, cap)));
    }
    return EvalMap::piecewise(std::move(pieces));
}

namespace {

struct ClippedComponent {
    Rat lo, hi;  // positions within the span, lo <= hi
    bool is_arc() const { return hi > lo; }
};

// fix(F) intersected with the closed arc, in span positions.
std::vector<ClippedComponent> clip_fixed(const PLMap& F, const Arc& span) {
    Rat L = span.length();
    std::vector<ClippedComponent> out;
    FixSet fix = fixed_points(F);
    if (fix.full) {
        out.push_back({Rat(0), L});
        return out;
    }
    for (const auto& c : fix.comps) {
        Rat s = span.start().distance_to(c.start());
        Rat len = c.is_arc ? c.a.distance_to(c.b) : Rat(0);
        for (int copy = 0; copy < 2; ++copy) {
            Rat lo = s - copy;  // component lifted to [s-1, s-1+len] as well
            Rat hi = lo + len;
            Rat clo = std::max(lo, Rat(0));
            Rat chi = std::min(hi, L);
            if (clo <= chi) out.push_back({clo, chi});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    std::vector<ClippedComponent> merged;
    for (const auto& c : out) {
        if (!merged.empty() && c.lo <= merged.back().hi)
            merged.back().hi = std::max(merged.back().hi, c.hi);
        else
            merged.push_back(c);
    }
    return merged;
}

}  // namespace

EvalMap arc_conjugator(const PLMap& F, const PLMap& G, const Arc& src, const Arc& dst,
                       bool reversing, std::int64_t cap) {
    if (F(src.start()) != src.start() || F(src.end()) != src.end())
        throw precondition_error("arc conjugator: src endpoints not fixed");
    if (G(dst.start()) != dst.start() || G(dst.end()) != dst.end())
        throw precondition_error("arc conjugator: dst endpoints not fixed");
    std::vector<ClippedComponent> cs = clip_fixed(F, src);
    std::vector<ClippedComponent> cd = clip_fixed(G, dst);
    std::size_t r = cs.size();
    if (cd.size() != r) throw precondition_error("arc conjugator: component counts differ");
    if (r == 0 || cs.front().lo != 0 || cs.back().hi != src.length() || cd.front().lo != 0 ||
        cd.back().hi != dst.length())
        throw precondition_error("arc conjugator: endpoints must bound fixed components");

    auto dst_comp = [&](std::size_t i) -> const ClippedComponent& {
        return cd[reversing ? r - 1 - i : i];
    };
    for (std::size_t i = 0; i < r; ++i) {
        if (cs[i].is_arc() != dst_comp(i).is_arc())
            throw precondition_error("arc conjugator: kind mismatch at component " +
                                     std::to_string(i));
    }
    auto at = [&](const Arc& base, const Rat& pos) { return base.start().advanced_by(pos); };
    // Interval signs must correspond (flipped when reversing).
    for (std::size_t i = 0; i + 1 < r; ++i) {
        Rat a = cs[i].hi, b = cs[i + 1].lo;
        CirclePoint mid = at(src, (a + b) / 2);
        int sF = src.start().distance_to(F(mid)) > src.start().distance_to(mid) ? 1 : -1;
        std::size_t j = reversing ? r - 2 - i : i;
        Rat a2 = cd[j].hi, b2 = cd[j + 1].lo;
        CirclePoint mid2 = at(dst, (a2 + b2) / 2);
        int sG = dst.start().distance_to(G(mid2)) > dst.start().distance_to(mid2) ? 1 : -1;
        if (sG != (reversing ? -sF : sF))
            throw precondition_error("arc conjugator: sign mismatch at interval " +
                                     std::to_string(i));
    }

    std::vector<std::pair<Arc, EvalMap>> pieces;
    for (std::size_t i = 0; i < r; ++i) {
        const ClippedComponent& a = cs[i];
        const ClippedComponent& b = dst_comp(i);
        if (a.is_arc()) {
            AffineArcMap am;
            am.reversing = reversing;
            am.src_start = at(src, a.lo);
            am.src_len = a.hi - a.lo;
            am.dst_start = at(dst, b.lo);
            am.dst_len = b.hi - b.lo;
            pieces.emplace_back(Arc(at(src, a.lo), at(src, a.hi), ArcClosure::closed),
                                EvalMap::affine_arc(am));
        }
        if (i + 1 < r) {
            OpenSpan si{at(src, a.hi), at(src, cs[i + 1].lo), false};
            std::size_t j = reversing ? r - 2 - i : i;
            OpenSpan sj{at(dst, cd[j].hi), at(dst, cd[j + 1].lo), false};
            pieces.emplace_back(Arc(si.a, si.b, ArcClosure::closed),
                                EvalMap::transport(detail::make_transport(F, G, si, sj, reversing,
                                                                          cap)));
        }
    }
    return EvalMap::piecewise(std::move(pieces));
}

}  // namespace circlerev
