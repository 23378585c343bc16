#include "circlerev/factorization.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

namespace circlerev {

namespace {

long mod_inverse(long a, long n) {
    long t = 0, newt = 1, r = n, newr = ((a % n) + n) % n;
    while (newr != 0) {
        long q = r / newr;
        t -= q * newt;
        std::swap(t, newt);
        r -= q * newr;
        std::swap(r, newr);
    }
    if (r != 1) throw precondition_error("no modular inverse");
    return ((t % n) + n) % n;
}

ComponentMatching identity_matching() {
    ComponentMatching m;
    m.reversing = false;
    m.shift = 0;
    return m;
}

OpenSpan gap_after(const FixSet& fix, std::size_t i) {
    const FixComponent& cur = fix.comps[i];
    const FixComponent& next = fix.comps[(i + 1) % fix.comps.size()];
    if (fix.comps.size() == 1 && !cur.is_arc) return OpenSpan::punctured_circle(cur.a);
    return OpenSpan{cur.end(), next.start(), false};
}

std::optional<EvalMap> periodic_conjugator_core(const PLMap& f, const PLMap& g, int epsilon,
                                                long p, long q, const CirclePoint& fwitness,
                                                const CirclePoint& gwitness, std::int64_t cap);

// Unique fixed point of the orientation reversing PL map inside the arc.
std::optional<CirclePoint> reversing_fixed_point_in(const PLMap& M, const CirclePoint& lo,
                                                    const CirclePoint& hi) {
    FixSet fix = fixed_points(M);
    Arc range(lo, hi, ArcClosure::closed);
    for (const auto& c : fix.comps)
        if (range.contains(c.a)) return c.a;
    return std::nullopt;
}

}  // namespace

VerificationReport verify_witness(const Witness& w, const SamplePlan& plan) {
    VerificationReport rep;
    auto start = std::chrono::steady_clock::now();
    std::vector<CirclePoint> samples = sample_points(plan);
    rep.samples = samples.size();
    EvalStats stats;
    PLMap finv = w.target.inverse();
    auto fail = [&](const std::string& check, const CirclePoint& x) {
        rep.all_pass = false;
        rep.failed_check = check;
        rep.failing_sample = x;
    };
    rep.all_pass = true;
    for (const auto& x : samples) {
        if (w.involutions.size() == 1) {
            const EvalMap& mu = w.involutions[0];
            CirclePoint mx = mu.eval(x, &stats);
            if (mu.eval(mx, &stats) != x) {
                fail("involution law", x);
                break;
            }
            CirclePoint rx = mu.eval(w.target(mx), &stats);
            if (rx != finv(x)) {
                fail("reversal law", x);
                break;
            }
        } else {
            bool bad = false;
            for (const auto& s : w.involutions) {
                CirclePoint sx = s.eval(x, &stats);
                if (s.eval(sx, &stats) != x) {
                    fail("involution law", x);
                    bad = true;
                    break;
                }
            }
            if (bad) break;
            CirclePoint y = x;
            for (auto it = w.involutions.rbegin(); it != w.involutions.rend(); ++it)
                y = it->eval(y, &stats);
            if (y != w.target(x)) {
                fail("composition law", x);
                break;
            }
        }
        stats.note(x.value());
    }
    rep.max_denominator_bits = stats.max_denominator_bits;
    rep.unwind_steps = stats.unwind_steps;
    rep.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return rep;
}

namespace {

Witness finish(Witness w, const FactorOptions& opt) {
    w.verification = verify_witness(w, opt.plan);
    if (!w.verification.all_pass)
        throw verification_error("witness verification failed (" + w.verification.failed_check +
                                     ") at sample " + w.verification.failing_sample->str() +
                                     " on route " + route_name(w.route),
                                 *w.verification.failing_sample);
    return w;
}

}  // namespace

Witness involution_rot0(const PLMap& f, const ComponentMatching& plan, const FactorOptions& opt) {
    if (f.degree() != 1) throw precondition_error("rot0: orientation preserving map required");
    if (f.is_identity()) {
        Witness w{Route::rot_half_trivial, f, {EvalMap::identity()}, {}, "identity target"};
        return finish(std::move(w), opt);
    }
    if (plan.reversing) throw precondition_error("rot0: half-turn plan required");
    SignatureWord word = signature(f);
    PLMap h = realize_matching(word, plan);
    PLMap hinv = h.inverse();
    PLMap f1 = compose(hinv, compose(f, h));
    // k conjugates f^{-1} to h^{-1} f h, so k^{-1} h^{-1} f h k = f^{-1}.
    EvalMap k = equivariant_conjugator(f.inverse(), f1, identity_matching(), opt.cap);
    CirclePoint p = word.blocks[0].geom.a;
    CirclePoint hp = h(p);
    std::vector<std::pair<Arc, EvalMap>> pieces;
    pieces.emplace_back(Arc(p, hp, ArcClosure::closed),
                        EvalMap::compose({EvalMap::pl(h), k}));
    pieces.emplace_back(Arc(hp, p, ArcClosure::closed),
                        EvalMap::compose({k.inverted(), EvalMap::pl(hinv)}));
    Witness w{Route::rot0, f, {EvalMap::piecewise(std::move(pieces))}, {},
              "half-turn " + plan.str() + " at base " + p.str()};
    return finish(std::move(w), opt);
}

namespace {

// Reversing involution for a map with fixed points, plus the PL restriction
// of the involution to each fixed component (needed to locate fixed points of
// tau o F exactly when propagating along a periodic orbit).
struct ReversingParts {
    EvalMap mu;
    PLMap h, hinv;
    SignatureWord word;
    struct BlockMap {
        int kind;  // 0: h^{-1} on the block, 1: h, 2: split at `split`
        CirclePoint split;
    };
    std::vector<BlockMap> block_maps;
};

ReversingParts build_reversing_rot0(const PLMap& f, const ComponentMatching& plan,
                                    const FactorOptions& opt) {
    if (f.degree() != 1)
        throw precondition_error("reversing rot0: orientation preserving map required");
    ReversingParts parts;
    if (f.is_identity()) {
        parts.h = PLMap::reflection(Rat(0));
        parts.hinv = parts.h;
        parts.mu = EvalMap::pl(parts.h);
        parts.word.identity = true;
        return parts;
    }
    if (!plan.reversing) throw precondition_error("reversing rot0: reflection plan required");
    SignatureWord word = signature(f);
    PLMap h = realize_matching(word, plan);
    PLMap hinv = h.inverse();
    PLMap f1 = compose(hinv, compose(f, h));
    // k conjugates f^{-1} to h^{-1} f h; s := k^{-1} h^{-1} then reverses f.
    EvalMap k = equivariant_conjugator(f.inverse(), f1, identity_matching(), opt.cap);
    EvalMap s = EvalMap::compose({k.inverted(), EvalMap::pl(hinv)});
    EvalMap s_inv = EvalMap::compose({EvalMap::pl(h), k});

    FixSet fix = fixed_points(f);
    long m = (long)word.size();
    parts.h = h;
    parts.hinv = hinv;
    parts.word = word;
    parts.block_maps.resize(m, {0, CirclePoint()});

    if (m == 1 && word.blocks[0].kind == BlockKind::point) {
        parts.mu = reverse_on_arc(f, OpenSpan::punctured_circle(word.blocks[0].geom.a), opt.cap);
        return parts;
    }

    long n1 = plan.axis / 2;
    long n2 = n1 + m;
    auto region_map = [&](long pos) -> const EvalMap& {
        long rel = ((pos - n1) % (2 * m) + 2 * m) % (2 * m);
        return rel < m ? s : s_inv;
    };
    std::vector<std::pair<Arc, EvalMap>> pieces;
    for (long pos = 0; pos < 2 * m; ++pos) {
        bool fixed_node = pos == (n1 % (2 * m)) || pos == (n2 % (2 * m));
        if (pos % 2 == 0) {
            long idx = pos / 2;
            const FixComponent& c = fix.comps[idx];
            if (!c.is_arc) {
                parts.block_maps[idx] = {fixed_node ? 0 : (region_map(pos).node_ptr() == s.node_ptr() ? 0 : 1),
                                         CirclePoint()};
                continue;  // zero extent; neighbors cover the point
            }
            if (fixed_node) {
                auto split = reversing_fixed_point_in(h, c.a, c.b);
                if (!split)
                    throw precondition_error("reversing rot0: no axis point inside block");
                pieces.emplace_back(Arc(c.a, *split, ArcClosure::closed), s);
                pieces.emplace_back(Arc(*split, c.b, ArcClosure::closed), s_inv);
                parts.block_maps[idx] = {2, *split};
            } else {
                const EvalMap& mmap = region_map(pos);
                pieces.emplace_back(Arc(c.a, c.b, ArcClosure::closed), mmap);
                parts.block_maps[idx] = {mmap.node_ptr() == s.node_ptr() ? 0 : 1, CirclePoint()};
            }
        } else {
            long idx = (pos - 1) / 2;
            OpenSpan span = gap_after(fix, idx);
            Arc arc(span.a, span.b, ArcClosure::closed);
            if (fixed_node)
                pieces.emplace_back(arc, reverse_on_arc(f, span, opt.cap));
            else
                pieces.emplace_back(arc, region_map(pos));
        }
    }
    parts.mu = EvalMap::piecewise(std::move(pieces));
    return parts;
}

}  // namespace

Witness reversing_involution_rot0(const PLMap& f, const ComponentMatching& plan,
                                  const FactorOptions& opt) {
    ReversingParts parts = build_reversing_rot0(f, plan, opt);
    Witness w{Route::two_i_reversing, f, {parts.mu}, {},
              f.is_identity() ? std::string("identity target: plain reflection")
                              : "reflection " + plan.str()};
    return finish(std::move(w), opt);
}

namespace {

// Reversing involution of F built by propagating a reverser of F^q along the
// orbit tiling; requires rho(F) = 1/q so that orbits are consecutively
// ordered.
EvalMap two_ii_base(const PLMap& F, long q, const FactorOptions& opt, std::string& notes) {
    PLMap G = F.power(q);
    std::vector<PLMap> fpow(q + 1);
    fpow[0] = PLMap::identity();
    for (long i = 1; i <= q; ++i) fpow[i] = compose(F, fpow[i - 1]);

    auto periodic_tiles = [&](const CirclePoint& q0, const EvalMap& tau) -> EvalMap {
        std::vector<std::pair<Arc, EvalMap>> pieces;
        for (long kk = 0; kk < q; ++kk) {
            PLMap fk = fpow[kk];
            CirclePoint lo = fk.inverse()(q0);
            CirclePoint hi = fk.inverse()(F(q0));
            pieces.emplace_back(Arc(lo, hi, ArcClosure::closed),
                                EvalMap::compose({EvalMap::pl(fk), tau, EvalMap::pl(fk)}));
        }
        return EvalMap::piecewise(std::move(pieces));
    };

    if (G.is_identity()) {
        PLMap tau = PLMap::reflection(Rat(0));
        PLMap tauF = compose(tau, F);
        FixSet fx = fixed_points(tauF);
        CirclePoint q0 = fx.comps[0].a;
        notes += "; trivial power, reflection seed at " + q0.str();
        return periodic_tiles(q0, EvalMap::pl(tau));
    }

    SignatureWord w = signature(G);
    auto plan = reflection_matching(w);
    if (!plan) throw precondition_error("two_ii: power word admits no reflection");
    ReversingParts parts = build_reversing_rot0(G, *plan, opt);
    const EvalMap& tau = parts.mu;

    FixSet fixG = fixed_points(G);
    long m = (long)fixG.comps.size();
    // Block action of F on fix(G) components: a rotation by t_F.
    auto block_of_start = [&](const CirclePoint& p) -> long {
        for (long j = 0; j < m; ++j)
            if (fixG.comps[j].a == p) return j;
        throw precondition_error("two_ii: component start not found");
    };
    long t_F = block_of_start(F(fixG.comps[0].a));
    for (long i = 0; i < m; ++i) {
        if (block_of_start(F(fixG.comps[i].a)) != (i + t_F) % m)
            throw precondition_error("two_ii: component action not a rotation");
    }
    long c2 = ((plan->axis - 2 * t_F) % (2 * m) + 2 * m) % (2 * m);
    long pos_candidates[2] = {c2 / 2, (c2 / 2 + m) % (2 * m)};

    // Prefer a component node: the fixed point of tau o F there is an exact
    // PL computation.
    for (long pos : pos_candidates) {
        if (pos % 2 != 0) continue;
        long idx = pos / 2;
        const FixComponent& c = fixG.comps[idx];
        if (!c.is_arc) {
            CirclePoint pt = c.a;
            if (tau.eval(F(pt)) == pt) {
                notes += "; periodic seed at point component " + pt.str();
                return periodic_tiles(pt, tau);
            }
            continue;
        }
        long j = (idx + t_F) % m;
        const ReversingParts::BlockMap& bm = parts.block_maps[j];
        std::vector<std::tuple<CirclePoint, CirclePoint, const PLMap*>> ranges;
        if (bm.kind == 0) {
            ranges.emplace_back(c.a, c.b, &parts.hinv);
        } else if (bm.kind == 1) {
            ranges.emplace_back(c.a, c.b, &parts.h);
        } else {
            CirclePoint cut = F.inverse()(bm.split);
            ranges.emplace_back(c.a, cut, &parts.hinv);
            ranges.emplace_back(cut, c.b, &parts.h);
        }

        for (auto& [lo, hi, pl] : ranges) {
            PLMap M = compose(*pl, F);
            if (auto q0 = reversing_fixed_point_in(M, lo, hi)) {
                if (tau.eval(F(*q0)) != *q0)
                    continue;
                notes += "; periodic seed at " + q0->str();
                return periodic_tiles(*q0, tau);
            }
        }
    }

    // Otherwise the fixed point of tau o F lies in a complementary interval:
    // fill its orbit with a reversal of the interval dynamics.
    for (long pos : pos_candidates) {
        if (pos % 2 != 1) continue;
        long idx = (pos - 1) / 2;
        OpenSpan J = gap_after(fixG, idx);
        CirclePoint s_pt = J.a, t_pt = J.b;
        EvalMap tauJ = reverse_on_arc(G, J, opt.cap);
        PLMap Ginv = G.inverse();
        std::vector<std::pair<Arc, EvalMap>> pieces;
        for (long kk = 0; kk < q; ++kk) {
            PLMap fk = fpow[kk];
            PLMap fk_inv = fk.inverse();
            // Outer tile [F^{-k}(t), F^{-k+1}(s)].
            CirclePoint lo = fk_inv(t_pt);
            CirclePoint hi = fk_inv(F(s_pt));
            pieces.emplace_back(Arc(lo, hi, ArcClosure::closed),
                                EvalMap::compose({EvalMap::pl(fk), tau, EvalMap::pl(fk)}));
            // Orbit tile F^k(J).
            long e = ((1 - kk) % q + q) % q;
            std::vector<EvalMap> factors;
            factors.push_back(EvalMap::pl(fpow[e]));
            if (kk >= 2) factors.push_back(EvalMap::pl(Ginv));
            factors.push_back(tauJ);
            factors.push_back(EvalMap::pl(fk_inv));
            pieces.emplace_back(Arc(fk(s_pt), fk(t_pt), ArcClosure::closed),
                                EvalMap::compose(std::move(factors)));
        }
        notes += "; interval seed on " + J.str();
        return EvalMap::piecewise(std::move(pieces));
    }
    throw precondition_error("two_ii: no usable seed node");
}

}  // namespace

Witness involution_two_ii(const PLMap& f, const FactorOptions& opt) {
    if (f.degree() != 1) throw precondition_error("two_ii: orientation preserving map required");
    RotationNumberResult r = rotation_number(f, opt.max_period, opt.max_iterations);
    if (!r.is_rational()) throw uncertified_error("two_ii: rotation number not certified");
    if (r.rho == 0) throw precondition_error("two_ii: nonzero rotation number required");
    long q = r.period;
    long p = (long)r.rho.get_num().get_si();
    std::string notes = "period " + std::to_string(q);
    long d = p == 1 ? 1 : mod_inverse(p, q);
    PLMap F = f.power(d);
    EvalMap mu_d = two_ii_base(F, q, opt, notes);
    EvalMap mu = mu_d;
    if (d != 1) {
        // f is conjugate to f^{dt} with dt = 1 mod q; both share the certified
        // rotation data, so the conjugator is built without re-certification.
        long t = mod_inverse(d, q);
        CirclePoint base = r.witness;
        auto c = periodic_conjugator_core(f, f.power(d * t), 1, p, q, base, base, opt.cap);
        if (!c) throw precondition_error("two_ii: transport conjugator not found");
        notes += "; transported via exponent " + std::to_string(d * t);
        mu = EvalMap::compose({c->inverted(), mu_d, *c});
    }
    Witness w{Route::two_ii, f, {mu}, {}, notes};
    return finish(std::move(w), opt);
}

Witness involution_two_minus(const PLMap& f, const FactorOptions& opt) {
    if (f.degree() != -1) throw precondition_error("two_minus: orientation reversing map required");
    if (f.is_involution()) {
        Witness w{Route::rot_half_trivial, f, {EvalMap::pl(f)}, {}, "reversing involution"};
        return finish(std::move(w), opt);
    }
    FixSet fix = fixed_points(f);
    CirclePoint a = fix.comps[0].a;
    CirclePoint b = fix.comps[1].a;
    PLMap g = compose(f, f);
    SignatureWord w2 = signature(g);
    MatchConstraints mc;
    mc.swap_points = std::make_pair(a, b);
    auto plan = reflection_matching(w2, mc);
    if (!plan) throw precondition_error("two_minus: no constrained reflection of squared word");
    ReversingParts parts = build_reversing_rot0(g, *plan, opt);
    std::vector<std::pair<Arc, EvalMap>> pieces;
    pieces.emplace_back(Arc(a, b, ArcClosure::closed), parts.mu);
    pieces.emplace_back(Arc(b, a, ArcClosure::closed),
                        EvalMap::compose({EvalMap::pl(f), parts.mu, EvalMap::pl(f)}));
    Witness w{Route::two_minus, f, {EvalMap::piecewise(std::move(pieces))}, {},
              "fixed points " + a.str() + ", " + b.str() + "; reflection " + plan->str()};
    return finish(std::move(w), opt);
}

namespace {

bool anticlockwise(const CirclePoint& u, const CirclePoint& v, const CirclePoint& w) {
    return u.distance_to(v) < u.distance_to(w);
}

}  // namespace

Witness factor_three_involutions(const PLMap& f, const FactorOptions& opt) {
    if (f.degree() != 1)
        throw precondition_error("three involutions: orientation preserving map required");
    if (f.is_involution()) {
        Witness w{Route::three_involutions, f,
                  {EvalMap::pl(f), EvalMap::identity(), EvalMap::identity()}, {},
                  "involution path"};
        return finish(std::move(w), opt);
    }
    PLMap f2 = compose(f, f);
    FixSet fix2 = fixed_points(f2);
    CirclePoint x(0);
    if (!fix2.empty()) {
        OpenSpan gap = gap_after(fix2, 0);
        x = gap.a.advanced_by(gap.length() / 2);
    }
    PLMap F = f;
    if (!anticlockwise(x, F(x), compose(F, F)(x))) {
        x = compose(F, F)(x);
        F = F.inverse();
    }
    bool flipped = !(F == f);

    PLMap Finv = F.inverse();
    CirclePoint fx = F(x);
    CirclePoint f2x = F(fx);
    CirclePoint f3x = F(f2x);
    // y: midpoint of the last stretch of (x, f(x)) whose f-preimage lies
    // beyond f^2(x).
    CirclePoint w0 = x;
    if (Arc(x, fx, ArcClosure::open).contains(f3x)) w0 = f3x;
    CirclePoint y = w0.advanced_by(w0.distance_to(fx) / 2);

    // Corridor graph in window coordinates: positions measured from x, target
    // values lifted from f(x).
    Rat p_fx = x.distance_to(fx);
    Rat xi = x.value();
    auto val = [&](const CirclePoint& z) -> Rat { return xi + p_fx + fx.distance_to(z); };
    auto vof = [&](const CirclePoint& t) -> Rat { return val(F(t)); };
    auto wof = [&](const CirclePoint& t) -> Rat { return val(Finv(t)); };

    auto grid_between = [&](const CirclePoint& lo, const CirclePoint& hi, bool with_fix2) {
        std::vector<Rat> pos;
        Arc open(lo, hi, ArcClosure::open);
        auto add = [&](const CirclePoint& p) {
            if (open.contains(p)) pos.push_back(x.distance_to(p));
        };
        for (const auto& v : F.vertices()) add(CirclePoint(v.x));
        for (const auto& v : Finv.vertices()) add(CirclePoint(v.x));
        if (with_fix2) {
            for (const auto& c : fix2.comps) {
                add(c.a);
                add(c.b);
            }
        }
        // An interior point keeps the blend strictly inside the corridor even
        // when the envelopes are affine across the whole stretch.
        add(lo.advanced_by(lo.distance_to(hi) / 2));
        pos.push_back(x.distance_to(lo));
        pos.push_back(x.distance_to(hi));
        std::sort(pos.begin(), pos.end());
        pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
        return pos;
    };

    // The graph of g is built in window coordinates [xi, xi+1): sources on
    // [xi, xi+p_fx], lifted targets on [xi+p_fx, xi+1]; the inverse branch is
    // the reflected graph on the rest of the window.
    std::vector<std::pair<Rat, Rat>> window;  // (lifted source, lifted target)
    {
        std::vector<Rat> grid = grid_between(x, y, true);
        Rat py = x.distance_to(y);
        Rat base = xi + p_fx;
        for (const Rat& tpos : grid) {
            CirclePoint t = x.advanced_by(tpos);
            Rat U = std::min(vof(t), wof(t));
            Rat alpha = tpos / py;
            window.emplace_back(xi + tpos, base + alpha * (U - base));
        }
        grid = grid_between(y, fx, false);
        for (const Rat& tpos : grid) {
            if (tpos == py) continue;  // shared with the lower half
            CirclePoint t = x.advanced_by(tpos);
            Rat gamma = (tpos - py) / (p_fx - py);
            window.emplace_back(xi + tpos, vof(t) + gamma * (wof(t) - vof(t)));
        }
    }
    {
        std::vector<std::pair<Rat, Rat>> mirror;
        for (const auto& [u, v] : window) {
            if (v == xi + 1) continue;  // would leave the half-open window
            mirror.emplace_back(v, u + 1);
        }
        window.insert(window.end(), mirror.begin(), mirror.end());
    }
    std::vector<PLVertex> sigma_graph;
    for (const auto& [u, v] : window) {
        Rat k = rat_floor(u);
        sigma_graph.push_back(PLVertex{u - k, v - k});
    }
    std::sort(sigma_graph.begin(), sigma_graph.end(),
              [](const PLVertex& a, const PLVertex& b) {
                  return a.x < b.x || (a.x == b.x && a.y < b.y);
              });
    sigma_graph.erase(std::unique(sigma_graph.begin(), sigma_graph.end()), sigma_graph.end());
    for (std::size_t i = 0; i + 1 < sigma_graph.size(); ++i)
        if (sigma_graph[i].x == sigma_graph[i + 1].x)
            throw precondition_error("three involutions: conflicting corridor vertices");
    PLMap sigma = PLMap::from_vertices(1, std::move(sigma_graph));
    if (!sigma.is_involution())
        throw precondition_error("three involutions: corridor map is not an involution");

    PLMap sf = compose(sigma, F);
    SignatureWord wsf = signature(sf);
    if (wsf.size() != 2)
        throw precondition_error("three involutions: unexpected word for sigma o f");
    auto plan = half_turn_matching(wsf);
    if (!plan) throw precondition_error("three involutions: no half-turn for sigma o f");
    FactorOptions inner = opt;
    Witness wmu = involution_rot0(sf, *plan, inner);
    const EvalMap& mu = wmu.involutions[0];
    EvalMap nu = EvalMap::compose({mu, EvalMap::pl(sigma), EvalMap::pl(F)});

    std::vector<EvalMap> triple;
    if (!flipped) {
        triple = {EvalMap::pl(sigma), mu, nu};
    } else {
        triple = {nu, mu, EvalMap::pl(sigma)};
    }
    Witness w{Route::three_involutions, f, std::move(triple), {},
              std::string("corridor at x=") + x.str() + ", y=" + y.str() +
                  (flipped ? " (factored through the inverse)" : "")};
    return finish(std::move(w), opt);
}

Witness factor_strongly_reversible(const PLMap& f, const Verdict& verdict,
                                   const FactorOptions& opt) {
    if (!verdict.yes()) throw precondition_error("factor: verdict is not YES");
    if (!verdict.route) throw precondition_error("factor: verdict carries no route");
    switch (*verdict.route) {
        case Route::rot_half_trivial: {
            Witness w{Route::rot_half_trivial, f, {EvalMap::identity()}, {}, "involution target"};
            return finish(std::move(w), opt);
        }
        case Route::rot0:
            return involution_rot0(f, *verdict.plan, opt);
        case Route::two_i_reversing:
            return reversing_involution_rot0(f, *verdict.plan, opt);
        case Route::two_ii:
            return involution_two_ii(f, opt);
        case Route::two_minus:
            return involution_two_minus(f, opt);
        case Route::three_involutions:
            return factor_three_involutions(f, opt);
    }
    throw precondition_error("factor: bad route");
}

namespace {

// Gap-and-tile construction given certified rotation data for both maps:
// rho = p/q in lowest terms with q-periodic witnesses.
std::optional<EvalMap> periodic_conjugator_core(const PLMap& f, const PLMap& g, int epsilon,
                                                long p, long q, const CirclePoint& fwitness,
                                                const CirclePoint& gwitness, std::int64_t cap) {
    long d = mod_inverse(p, q);

    PLMap Fq = f.power(q);
    PLMap Gq = g.power(q);
    FixSet fixf = fixed_points(Fq);
    FixSet fixg = fixed_points(Gq);
    if (fixf.full != fixg.full) return std::nullopt;
    CirclePoint x0 = fwitness;
    if (!fixf.full) {
        auto ci = fixf.component_containing(fwitness);
        if (!ci) throw precondition_error("periodic conjugator: witness not in fixed set");
        x0 = fixf.comps[*ci].a;
    }
    CirclePoint x1 = f.power(d)(x0);
    Arc src(x0, x1, ArcClosure::closed);

    std::vector<PLMap> fpow(q), gpow(q);
    fpow[0] = PLMap::identity();
    gpow[0] = PLMap::identity();
    for (long i = 1; i < q; ++i) {
        fpow[i] = compose(f, fpow[i - 1]);
        gpow[i] = compose(g, gpow[i - 1]);
    }
    PLMap gd = g.power(d);

    std::vector<CirclePoint> anchors;
    if (fixg.full) {
        anchors.push_back(gwitness);
    } else {
        for (const auto& c : fixg.comps) anchors.push_back(epsilon == 1 ? c.a : c.end());
    }
    for (const CirclePoint& y0 : anchors) {
        Arc dst = epsilon == 1 ? Arc(y0, gd(y0), ArcClosure::closed)
                               : Arc(gd(y0), y0, ArcClosure::closed);
        try {
            EvalMap c0 = arc_conjugator(Fq, Gq, src, dst, epsilon == -1, cap);
            std::vector<std::pair<Arc, EvalMap>> pieces;
            for (long i = 0; i < q; ++i) {
                Arc tile(fpow[i](x0), fpow[i](x1), ArcClosure::closed);
                pieces.emplace_back(tile,
                                    EvalMap::compose({EvalMap::pl(gpow[i]), c0,
                                                      EvalMap::pl(fpow[i].inverse())}));
            }
            return EvalMap::piecewise(std::move(pieces));
        } catch (const precondition_error&) {
            continue;
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<EvalMap> build_periodic_conjugator(const PLMap& f, const PLMap& g, int epsilon,
                                                 const DecisionOptions& opt, std::int64_t cap) {
    RotationNumberResult rf = rotation_number(f, opt.max_period, opt.max_iterations);
    RotationNumberResult rg = rotation_number(g, opt.max_period, opt.max_iterations);
    if (!rf.is_rational() || !rg.is_rational())
        throw uncertified_error("periodic conjugator: rotation number not certified");
    if (rf.rho == 0 || rg.rho == 0)
        throw precondition_error("periodic conjugator: nonzero rotation number required");
    Rat want = epsilon == 1 ? rf.rho : mod1(-rf.rho);
    if (rg.rho != want) return std::nullopt;
    return periodic_conjugator_core(f, g, epsilon, (long)rf.rho.get_num().get_si(), rf.period,
                                    rf.witness, rg.witness, cap);
}

EvalMap involution_between_intervals(const EvalMap& g, const Arc& J, const Arc& J2) {
    if (J.is_full() || J2.is_full() || J.length() == 0 || J2.length() == 0)
        throw precondition_error("interval involution: nontrivial closed arcs required");
    Arc cj = J.closure_arc(), cj2 = J2.closure_arc();
    if (cj.contains(cj2.start()) || cj.contains(cj2.end()) || cj2.contains(cj.start()) ||
        cj2.contains(cj.end()))
        throw precondition_error("interval involution: arcs overlap");
    CirclePoint a = J.start(), b = J.end();
    if (g.eval(a) != J2.start() || g.eval(b) != J2.end())
        throw precondition_error("interval involution: g must map J onto J2 preserving ends");
    CirclePoint qm = a.advanced_by(J.length() / 2);
    CirclePoint gq = g.eval(qm);
    CirclePoint gb = J2.end();
    AffineArcMap alpha;
    alpha.reversing = true;
    alpha.src_start = a;
    alpha.src_len = a.distance_to(qm);
    alpha.dst_start = gq;
    alpha.dst_len = gq.distance_to(gb);
    EvalMap alpha_map = EvalMap::affine_arc(alpha);
    std::vector<std::pair<Arc, EvalMap>> pieces;
    pieces.emplace_back(Arc(a, qm, ArcClosure::closed), alpha_map);
    pieces.emplace_back(Arc(qm, b, ArcClosure::closed),
                        EvalMap::compose({g, alpha_map.inverted(), g}));
    return EvalMap::piecewise(std::move(pieces));
}

}  // namespace circlerev
