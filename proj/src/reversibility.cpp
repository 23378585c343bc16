#include "circlerev/reversibility.hpp"

#include <algorithm>

#include "circlerev/factorization.hpp"

namespace circlerev {

std::string route_name(Route r) {
    switch (r) {
        case Route::rot0: return "rot0";
        case Route::two_i_reversing: return "two_i_reversing";
        case Route::two_ii: return "two_ii";
        case Route::two_minus: return "two_minus";
        case Route::three_involutions: return "three_involutions";
        case Route::rot_half_trivial: return "rot_half_trivial";
    }
    return "?";
}

std::optional<ComponentMatching> half_turn_matching(const SignatureWord& w) {
    if (w.identity || w.blocks.empty())
        throw precondition_error("half turn matching: word required");
    long m = (long)w.size();
    if (m % 2 != 0) return std::nullopt;
    long k = m / 2;
    for (long i = 0; i < m; ++i) {
        const auto& src = w.blocks[i];
        const auto& dst = w.blocks[(i + k) % m];
        if (src.kind != dst.kind || dst.sign != -src.sign) return std::nullopt;
    }
    ComponentMatching out;
    out.reversing = false;
    out.shift = k;
    return out;
}

std::vector<long> naive_half_turn_shifts(const SignatureWord& w) {
    std::vector<long> out;
    long m = (long)w.size();
    for (long k = 0; k < m; ++k) {
        if ((2 * k) % m != 0 || k == 0) continue;  // conjugator must have rotation number 1/2
        bool ok = true;
        for (long i = 0; i < m && ok; ++i) {
            const auto& src = w.blocks[i];
            const auto& dst = w.blocks[(i + k) % m];
            ok = src.kind == dst.kind && dst.sign == -src.sign;
        }
        if (ok) out.push_back(k);
    }
    return out;
}

namespace {

struct PointLoc {
    long block;
    int role;  // 0 point-block, 1 arc start, 2 arc end, 3 arc interior
};

std::optional<PointLoc> locate(const SignatureWord& w, const CirclePoint& p) {
    for (long i = 0; i < (long)w.size(); ++i) {
        const auto& b = w.blocks[i];
        if (b.kind == BlockKind::point) {
            if (b.geom.a == p) return PointLoc{i, 0};
        } else {
            if (b.geom.a == p) return PointLoc{i, 1};
            if (b.geom.b == p) return PointLoc{i, 2};
            if (b.geom.contains(p)) return PointLoc{i, 3};
        }
    }
    return std::nullopt;
}

// Feasibility of sending p (located in wsrc) to q (in wdst) by a map whose
// block action is sigma with the given orientation.  Returns the pin needed,
// nullopt entry meaning "forced by block anchors", or failure.
struct PinCheck {
    bool ok = false;
    std::optional<std::pair<CirclePoint, CirclePoint>> pin;
};

PinCheck check_point_mapping(const SignatureWord& wsrc, const SignatureWord& wdst, long sigma_block,
                             bool reversing, const PointLoc& lp, const CirclePoint& p,
                             const CirclePoint& q) {
    PinCheck out;
    if (sigma_block >= (long)wdst.size()) return out;
    const auto& dst = wdst.blocks[sigma_block];
    switch (lp.role) {
        case 0:
            out.ok = dst.kind == BlockKind::point && dst.geom.a == q;
            return out;
        case 1:
            out.ok = dst.kind == BlockKind::arc && (reversing ? dst.geom.b : dst.geom.a) == q;
            return out;
        case 2:
            out.ok = dst.kind == BlockKind::arc && (reversing ? dst.geom.a : dst.geom.b) == q;
            return out;
        case 3: {
            if (dst.kind != BlockKind::arc) return out;
            Rat off = dst.geom.a.distance_to(q);
            if (off <= 0 || off >= dst.geom.a.distance_to(dst.geom.b)) return out;
            out.ok = true;
            out.pin = std::make_pair(p, q);
            return out;
        }
    }
    return out;
}

bool apply_swap_constraint(const SignatureWord& w, const ComponentMatching& m,
                           const CirclePoint& a, const CirclePoint& b,
                           ComponentMatching& out) {
    auto la = locate(w, a);
    auto lb = locate(w, b);
    if (!la || !lb) return false;
    long mlen = (long)w.size();
    if (m.block_image(la->block, mlen) != lb->block) return false;
    PinCheck ca = check_point_mapping(w, w, lb->block, m.reversing, *la, a, b);
    if (!ca.ok) return false;
    PinCheck cb = check_point_mapping(w, w, la->block, m.reversing, *lb, b, a);
    if (!cb.ok) return false;
    out = m;
    if (ca.pin) out.pins.push_back(*ca.pin);
    if (cb.pin) out.pins.push_back(*cb.pin);
    return true;
}

}  // namespace

std::optional<ComponentMatching> reflection_matching(const SignatureWord& w,
                                                     const MatchConstraints& constraints) {
    if (w.identity || w.blocks.empty())
        throw precondition_error("reflection matching: word required");
    long m = (long)w.size();
    for (long c = 0; c < 2 * m; ++c) {
        if (c % 2 != 0) continue;  // odd axes send components to intervals
        ComponentMatching cand;
        cand.reversing = true;
        cand.axis = c;
        bool ok = true;
        for (long i = 0; i < m && ok; ++i) {
            ok = w.blocks[cand.block_image(i, m)].kind == w.blocks[i].kind &&
                 w.blocks[cand.interval_image(i, m)].sign == w.blocks[i].sign;
        }
        if (!ok) continue;
        if (constraints.swap_points) {
            ComponentMatching pinned;
            if (!apply_swap_constraint(w, cand, constraints.swap_points->first,
                                       constraints.swap_points->second, pinned))
                continue;
            return pinned;
        }
        return cand;
    }
    return std::nullopt;
}

PLMap realize_matching(const SignatureWord& w, const ComponentMatching& m) {
    if (w.identity) throw precondition_error("realize matching: word required");
    long mlen = (long)w.size();
    std::vector<std::pair<CirclePoint, CirclePoint>> anchors;
    for (long i = 0; i < mlen; ++i) {
        const auto& src = w.blocks[i].geom;
        const auto& dst = w.blocks[m.block_image(i, mlen)].geom;
        if (!src.is_arc) {
            anchors.emplace_back(src.a, dst.a);
        } else if (!m.reversing) {
            anchors.emplace_back(src.a, dst.a);
            anchors.emplace_back(src.b, dst.b);
        } else {
            anchors.emplace_back(src.a, dst.b);
            anchors.emplace_back(src.b, dst.a);
        }
    }
    for (const auto& pin : m.pins) anchors.push_back(pin);
    std::sort(anchors.begin(), anchors.end(),
              [](const auto& u, const auto& v) { return u.first.value() < v.first.value(); });
    anchors.erase(std::unique(anchors.begin(), anchors.end(),
                              [](const auto& u, const auto& v) {
                                  return u.first == v.first && u.second == v.second;
                              }),
                  anchors.end());
    for (std::size_t i = 0; i + 1 < anchors.size(); ++i)
        if (anchors[i].first == anchors[i + 1].first)
            throw precondition_error("realize matching: conflicting anchors at " +
                                     anchors[i].first.str());

    std::vector<PLVertex> vx;
    Rat y = anchors[0].second.value();
    vx.push_back(PLVertex{anchors[0].first.value(), y});
    for (std::size_t i = 1; i < anchors.size(); ++i) {
        Rat step = m.reversing ? anchors[i].second.distance_to(anchors[i - 1].second)
                               : anchors[i - 1].second.distance_to(anchors[i].second);
        if (step == 0 && anchors.size() > 1)
            throw precondition_error("realize matching: repeated target anchor");
        y += m.reversing ? -step : step;
        vx.push_back(PLVertex{anchors[i].first.value(), y});
    }
    return PLMap::from_vertices(m.reversing ? -1 : 1, std::move(vx));
}

namespace {

Verdict make_yes(Group g, Route route, std::string reason, std::optional<ComponentMatching> plan,
                 std::optional<Rat> rho) {
    return Verdict{VerdictKind::yes, g, std::move(reason), route, std::move(plan), std::move(rho)};
}
Verdict make_no(Group g, std::string reason, std::optional<Rat> rho) {
    return Verdict{VerdictKind::no, g, std::move(reason), std::nullopt, std::nullopt, std::move(rho)};
}
Verdict make_unknown(Group g, std::string reason) {
    return Verdict{VerdictKind::unknown, g, std::move(reason), std::nullopt, std::nullopt,
                   std::nullopt};
}

}  // namespace

Verdict decide_strongly_reversible_hplus(const PLMap& f, const DecisionOptions& opt) {
    if (f.degree() != 1)
        throw precondition_error("H+ decision: map must preserve orientation");
    if (f.is_involution())
        return make_yes(Group::hplus, Route::rot_half_trivial, "involution", std::nullopt,
                        std::nullopt);
    RotationNumberResult r = rotation_number(f, opt.max_period, opt.max_iterations);
    if (!r.is_rational())
        return make_unknown(Group::hplus, "rotation number bracketed to [" + rat_to_string(r.lo) +
                                              "," + rat_to_string(r.hi) + "], rationality open");
    if (r.rho == Rat(1, 2))
        return make_no(Group::hplus, "rotation number 1/2 but not an involution", r.rho);
    if (r.rho != 0)
        return make_no(Group::hplus,
                       "rotation number " + rat_to_string(r.rho) + " is neither 0 nor 1/2", r.rho);
    SignatureWord w = signature(f);
    if (auto plan = half_turn_matching(w))
        return make_yes(Group::hplus, Route::rot0, "half-turn word symmetry", plan, r.rho);
    return make_no(Group::hplus, "signature word admits no half-turn symmetry", r.rho);
}

Verdict decide_strongly_reversible_h(const PLMap& f, const DecisionOptions& opt) {
    if (f.degree() == 1) {
        if (f.is_involution())
            return make_yes(Group::h, Route::rot_half_trivial, "involution", std::nullopt,
                            std::nullopt);
        RotationNumberResult r = rotation_number(f, opt.max_period, opt.max_iterations);
        if (!r.is_rational())
            return make_unknown(Group::h, "rotation number bracketed to [" + rat_to_string(r.lo) +
                                              "," + rat_to_string(r.hi) + "], rationality open");
        if (r.rho == 0) {
            SignatureWord w = signature(f);
            if (auto plan = half_turn_matching(w))
                return make_yes(Group::h, Route::rot0, "half-turn word symmetry", plan, r.rho);
            if (auto plan = reflection_matching(w))
                return make_yes(Group::h, Route::two_i_reversing, "reflection word symmetry", plan,
                                r.rho);
            return make_no(Group::h, "signature word admits neither half-turn nor reflection",
                           r.rho);
        }
        PLMap g = f.power(r.period);
        if (g.is_identity())
            return make_yes(Group::h, Route::two_ii, "minimal power is the identity", std::nullopt,
                            r.rho);
        SignatureWord w = signature(g);
        if (auto plan = reflection_matching(w))
            return make_yes(Group::h, Route::two_ii,
                            "power word reflection symmetry at period " + std::to_string(r.period),
                            plan, r.rho);
        return make_no(Group::h,
                       "power word chiral at period " + std::to_string(r.period), r.rho);
    }
    // Orientation reversing.
    if (f.is_involution())
        return make_yes(Group::h, Route::rot_half_trivial, "involution", std::nullopt,
                        std::nullopt);
    FixSet fix = fixed_points(f);
    CirclePoint a = fix.comps[0].a;
    CirclePoint b = fix.comps[1].a;
    PLMap g = compose(f, f);
    SignatureWord w = signature(g);
    MatchConstraints mc;
    mc.swap_points = std::make_pair(a, b);
    if (auto plan = reflection_matching(w, mc))
        return make_yes(Group::h, Route::two_minus, "squared word reflection exchanging fixed points",
                        plan, std::nullopt);
    return make_no(Group::h, "no reflection of squared word exchanges the fixed points",
                   std::nullopt);
}

namespace {

std::optional<EvalMap> conjugate_fixed_case(const PLMap& f, const PLMap& g, int eps,
                                            const std::optional<std::pair<CirclePoint, CirclePoint>>&
                                                pair_f,
                                            const std::optional<std::pair<CirclePoint, CirclePoint>>&
                                                pair_g) {
    bool fid = f.is_identity(), gid = g.is_identity();
    if (fid != gid) return std::nullopt;
    if (fid && gid) {
        if (!pair_f) return eps == 1 ? EvalMap::identity() : EvalMap::pl(PLMap::reflection(Rat(0)));
        // Map the distinguished pair onto the target pair.
        std::vector<std::pair<CirclePoint, CirclePoint>> anchors = {
            {pair_f->first, pair_g->first}, {pair_f->second, pair_g->second}};
        std::sort(anchors.begin(), anchors.end(),
                  [](const auto& u, const auto& v) { return u.first.value() < v.first.value(); });
        Rat y = anchors[0].second.value();
        Rat step = eps == 1 ? anchors[0].second.distance_to(anchors[1].second)
                            : anchors[1].second.distance_to(anchors[0].second);
        std::vector<PLVertex> vx;
        vx.push_back(PLVertex{anchors[0].first.value(), y});
        vx.push_back(PLVertex{anchors[1].first.value(), y + Rat(eps) * step});
        return EvalMap::pl(PLMap::from_vertices(eps, std::move(vx)));
    }
    SignatureWord wf = signature(f);
    SignatureWord wg = signature(g);
    long m = (long)wf.size();
    if ((long)wg.size() != m) return std::nullopt;

    auto try_matching = [&](ComponentMatching cand) -> std::optional<EvalMap> {
        for (long i = 0; i < m; ++i) {
            long j = cand.block_image(i, m);
            long ji = cand.interval_image(i, m);
            if (wg.blocks[j].kind != wf.blocks[i].kind) return std::nullopt;
            if (wg.blocks[ji].sign != (cand.reversing ? -1 : 1) * wf.blocks[i].sign)
                return std::nullopt;
        }
        if (pair_f) {
            auto la = locate(wf, pair_f->first);
            auto lb = locate(wf, pair_f->second);
            auto lqa = locate(wg, pair_g->first);
            auto lqb = locate(wg, pair_g->second);
            if (!la || !lb || !lqa || !lqb) return std::nullopt;
            if (cand.block_image(la->block, m) != lqa->block ||
                cand.block_image(lb->block, m) != lqb->block)
                return std::nullopt;
            PinCheck c1 = check_point_mapping(wf, wg, lqa->block, cand.reversing, *la,
                                              pair_f->first, pair_g->first);
            PinCheck c2 = check_point_mapping(wf, wg, lqb->block, cand.reversing, *lb,
                                              pair_f->second, pair_g->second);
            if (!c1.ok || !c2.ok) return std::nullopt;
            if (c1.pin) cand.pins.push_back(*c1.pin);
            if (c2.pin) cand.pins.push_back(*c2.pin);
        }
        try {
            return equivariant_conjugator(f, g, cand);
        } catch (const precondition_error&) {
            return std::nullopt;
        }
    };

    if (eps == 1) {
        for (long t = 0; t < m; ++t) {
            ComponentMatching cand;
            cand.reversing = false;
            cand.shift = t;
            if (auto k = try_matching(cand)) return k;
        }
    } else {
        for (long c = 0; c < 2 * m; c += 2) {
            ComponentMatching cand;
            cand.reversing = true;
            cand.axis = c;
            if (auto k = try_matching(cand)) return k;
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<EvalMap> conjugate_in_h(const PLMap& f, const PLMap& g, int epsilon,
                                      const DecisionOptions& opt) {
    if (epsilon != 1 && epsilon != -1)
        throw precondition_error("conjugacy: degree must be +1 or -1");
    if (f.degree() != g.degree())
        throw precondition_error("conjugacy: mixed degrees rejected");
    if (f.degree() == -1) {
        FixSet fa = fixed_points(f);
        FixSet fb = fixed_points(g);
        PLMap f2 = compose(f, f);
        PLMap g2 = compose(g, g);
        PLMap finv = f.inverse();
        for (int pairing = 0; pairing < 2; ++pairing) {
            auto pf = std::make_pair(fa.comps[0].a, fa.comps[1].a);
            auto pg = pairing == 0 ? std::make_pair(fb.comps[0].a, fb.comps[1].a)
                                   : std::make_pair(fb.comps[1].a, fb.comps[0].a);
            auto k = conjugate_fixed_case(f2, g2, epsilon, pf, pg);
            if (!k) continue;
            try {
                std::vector<std::pair<Arc, EvalMap>> pieces;
                pieces.emplace_back(Arc(pf.first, pf.second, ArcClosure::closed), *k);
                pieces.emplace_back(
                    Arc(pf.second, pf.first, ArcClosure::closed),
                    EvalMap::compose({EvalMap::pl(g), *k, EvalMap::pl(finv)}));
                return EvalMap::piecewise(std::move(pieces));
            } catch (const precondition_error&) {
                continue;
            }
        }
        return std::nullopt;
    }
    RotationNumberResult rf = rotation_number(f, opt.max_period, opt.max_iterations);
    RotationNumberResult rg = rotation_number(g, opt.max_period, opt.max_iterations);
    if (!rf.is_rational() || !rg.is_rational())
        throw uncertified_error("conjugacy: rotation number not certified rational");
    if (rf.rho == 0) {
        if (rg.rho != 0) return std::nullopt;
        return conjugate_fixed_case(f, g, epsilon, std::nullopt, std::nullopt);
    }
    Rat want = epsilon == 1 ? rf.rho : mod1(-rf.rho);
    if (rg.rho != want) return std::nullopt;
    return build_periodic_conjugator(f, g, epsilon, opt);
}

}  // namespace circlerev
