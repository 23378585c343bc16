#include "circlerev/dynamics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace circlerev {

std::optional<std::size_t> FixSet::component_containing(const CirclePoint& x) const {
    for (std::size_t i = 0; i < comps.size(); ++i)
        if (comps[i].contains(x)) return i;
    return std::nullopt;
}

CirclePoint FixSet::gap_start(std::size_t i) const { return comps[i].end(); }

Rat FixSet::gap_length(std::size_t i) const {
    const FixComponent& cur = comps[i];
    const FixComponent& next = comps[(i + 1) % comps.size()];
    Rat len = cur.end().distance_to(next.start());
    if (len == 0 && comps.size() == 1 && !cur.is_arc) return Rat(1);
    return len;
}

namespace {

// Fixed-point items in lifted coordinates: [start, start+len] with len >= 0.
struct RawItem {
    Rat s, e;
};

}  // namespace

FixSet fixed_points(const PLMap& f) {
    FixSet out;
    if (f.is_identity()) {
        out.full = true;
        return out;
    }
    std::vector<RawItem> items;
    for (const auto& seg : f.segments()) {
        // Solve F(x) = x + m on [x0, x1].  d(x) := F(x) - x is affine.
        Rat d0 = seg.y0 - seg.x0;
        Rat d1 = seg.y1 - seg.x1;
        Rat lo = std::min(d0, d1), hi = std::max(d0, d1);
        for (Rat m = rat_floor(lo); m <= hi; m += 1) {
            if (m < lo) continue;
            if (d0 == d1) {
                if (d0 == m) items.push_back({seg.x0, seg.x1});
                continue;
            }
            Rat x = seg.x0 + (m - d0) * (seg.x1 - seg.x0) / (d1 - d0);
            if (x >= seg.x0 && x <= seg.x1) items.push_back({x, x});
        }
    }
    if (items.empty()) return out;

    for (auto& it : items) {
        Rat base = mod1(it.s);
        it.e = base + (it.e - it.s);
        it.s = base;
    }
    std::sort(items.begin(), items.end(), [](const RawItem& a, const RawItem& b) {
        return a.s < b.s || (a.s == b.s && a.e < b.e);
    });
    std::vector<RawItem> merged;
    for (const auto& it : items) {
        if (!merged.empty() && it.s <= merged.back().e)
            merged.back().e = std::max(merged.back().e, it.e);
        else
            merged.push_back(it);
    }
    // Wrap: the last component may continue through 0 into the first.
    if (merged.size() > 1 && merged.back().e >= merged.front().s + 1) {
        merged.back().e = std::max(merged.back().e, Rat(merged.front().e + 1));
        merged.erase(merged.begin());
    }

    for (const auto& it : merged) {
        FixComponent c;
        c.is_arc = it.e > it.s;
        c.a = CirclePoint(it.s);
        c.b = CirclePoint(it.e);
        out.comps.push_back(c);
    }
    // Start the enumeration at the component containing 0, else the first one
    // anticlockwise after 0 (items are already sorted by start in [0,1)).
    CirclePoint zero;
    for (std::size_t i = 0; i < out.comps.size(); ++i) {
        if (out.comps[i].contains(zero)) {
            std::rotate(out.comps.begin(), out.comps.begin() + i, out.comps.end());
            break;
        }
    }
    if (f.degree() == -1 &&
        (out.comps.size() != 2 || out.comps[0].is_arc || out.comps[1].is_arc))
        throw precondition_error("fixed_points: reversing map must fix exactly two points");
    return out;
}

SignatureWord signature(const PLMap& f) {
    if (f.degree() != 1)
        throw precondition_error("signature: map must preserve orientation");
    FixSet fix = fixed_points(f);
    SignatureWord w;
    if (fix.full) {
        w.identity = true;
        return w;
    }
    if (fix.empty())
        throw precondition_error("signature: map has no fixed point");
    for (std::size_t i = 0; i < fix.comps.size(); ++i) {
        const FixComponent& c = fix.comps[i];
        CirclePoint a = fix.gap_start(i);
        CirclePoint mid = a.advanced_by(fix.gap_length(i) / 2);
        CirclePoint img = f(mid);
        // Constant on the interval by fixed-point freeness; one sample decides.
        int sign = a.distance_to(img) > a.distance_to(mid) ? 1 : -1;
        w.blocks.push_back(SignatureBlock{c.is_arc ? BlockKind::arc : BlockKind::point, c, sign});
    }
    return w;
}

int delta_at(const PLMap& f, const FixSet& fix, const CirclePoint& x) {
    if (fix.full) return 0;
    if (fix.empty())
        throw precondition_error("delta_at: map has no fixed point");
    for (std::size_t i = 0; i < fix.comps.size(); ++i) {
        if (fix.comps[i].contains(x)) return 0;
    }
    for (std::size_t i = 0; i < fix.comps.size(); ++i) {
        CirclePoint a = fix.gap_start(i);
        Rat off = a.distance_to(x);
        if (off > 0 && off < fix.gap_length(i)) {
            CirclePoint img = f(x);
            return a.distance_to(img) > off ? 1 : -1;
        }
    }
    throw precondition_error("delta_at: point not located");
}

int delta_at(const PLMap& f, const CirclePoint& x) { return delta_at(f, fixed_points(f), x); }

IdentityCheckReport signature_identities_check(const PLMap& f, const PLMap& h,
                                               const std::vector<CirclePoint>& samples) {
    IdentityCheckReport rep;
    rep.samples = samples.size();
    if (f.degree() != 1) throw precondition_error("signature identities: f must preserve orientation");
    PLMap hinv = h.inverse();
    PLMap conj = compose(compose(h, f), hinv);
    PLMap finv = f.inverse();
    FixSet fix_f = fixed_points(f);
    FixSet fix_conj = fixed_points(conj);
    FixSet fix_finv = fixed_points(finv);
    for (const auto& x : samples) {
        int lhs1 = delta_at(conj, fix_conj, x);
        int rhs1 = h.degree() * delta_at(f, fix_f, hinv(x));
        if (lhs1 != rhs1) {
            rep.pass = false;
            rep.failed_identity = "conjugation";
            rep.counterexample = x;
            return rep;
        }
        int lhs2 = delta_at(finv, fix_finv, x);
        int rhs2 = -delta_at(f, fix_f, x);
        if (lhs2 != rhs2) {
            rep.pass = false;
            rep.failed_identity = "inversion";
            rep.counterexample = x;
            return rep;
        }
    }
    return rep;
}

namespace {

void sb_collect(long pl, long ql, long pr, long qr, const Rat& lo, const Rat& hi, long qmax,
                std::vector<std::pair<long, long>>& out) {
    long pm = pl + pr, qm = ql + qr;
    if (qm > qmax) return;
    Rat m(pm, qm);
    m.canonicalize();
    if (m < lo) {
        sb_collect(pm, qm, pr, qr, lo, hi, qmax, out);
    } else if (m > hi) {
        sb_collect(pl, ql, pm, qm, lo, hi, qmax, out);
    } else {
        out.emplace_back(pm, qm);
        sb_collect(pl, ql, pm, qm, lo, hi, qmax, out);
        sb_collect(pm, qm, pr, qr, lo, hi, qmax, out);
    }
}

}  // namespace

std::vector<Rat> stern_brocot_candidates(const Rat& lo, const Rat& hi, long qmax) {
    std::vector<std::pair<long, long>> found;
    if (qmax >= 1 && lo <= hi) {
        if (lo <= 0 && 0 <= hi) found.emplace_back(0, 1);
        if (lo <= 1 && 1 <= hi) found.emplace_back(1, 1);
        sb_collect(0, 1, 1, 1, std::max(lo, Rat(0)), std::min(hi, Rat(1)), qmax, found);
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        return a.second < b.second || (a.second == b.second && a.first < b.first);
    });
    std::vector<Rat> out;
    out.reserve(found.size());
    for (auto& [p, q] : found) {
        Rat r(p, q);
        r.canonicalize();
        out.push_back(r);
    }
    return out;
}

namespace {

// Solve F^q(x) = x + p exactly; the power cache grows on demand.
std::optional<CirclePoint> periodic_witness(const PLMap& f, std::vector<PLMap>& powers, long q,
                                            long p) {
    while ((long)powers.size() <= q) powers.push_back(compose(f, powers.back()));
    const PLMap& g = powers[q];
    // g's lift G equals F^q - K where K = floor(F^q(0)).
    Rat v(0);
    for (long i = 0; i < q; ++i) v = f.lift(v);
    Rat K = v - g.lift(Rat(0));
    Rat m = Rat(p) - K;
    if (m.get_den() != 1) return std::nullopt;
    for (const auto& seg : g.segments()) {
        Rat d0 = seg.y0 - seg.x0;
        Rat d1 = seg.y1 - seg.x1;
        if (d0 == d1) {
            if (d0 == m) return CirclePoint(seg.x0);
            continue;
        }
        if ((m >= std::min(d0, d1)) && (m <= std::max(d0, d1))) {
            Rat x = seg.x0 + (m - d0) * (seg.x1 - seg.x0) / (d1 - d0);
            if (x >= seg.x0 && x <= seg.x1) return CirclePoint(x);
        }
    }
    return std::nullopt;
}

}  // namespace

RotationNumberResult rotation_number(const PLMap& f, long max_period, long max_iterations) {
    if (f.degree() != 1)
        throw precondition_error("rotation_number: defined for orientation preserving maps");
    RotationNumberResult res;
    FixSet fix = fixed_points(f);
    if (!fix.empty()) {
        res.kind = RotationNumberResult::Kind::rational;
        res.rho = Rat(0);
        res.witness = fix.full ? CirclePoint() : fix.comps[0].start();
        res.period = 1;
        return res;
    }

    Rat lo(0), hi(1);
    Rat t(0);
    long n = 0;
    std::vector<PLMap> powers{PLMap::identity()};
    std::set<std::pair<long, long>> rejected;
    while (n < max_iterations) {
        long target = std::min(max_iterations, std::max<long>(64, n * 4));
        while (n < target) {
            t = f.lift(t);
            ++n;
        }
        lo = std::max(lo, Rat((t - 1) / n));
        hi = std::min(hi, Rat((t + 1) / n));
        lo.canonicalize();
        hi.canonicalize();
        for (const Rat& cand : stern_brocot_candidates(lo, hi, max_period)) {
            long p = cand.get_num().get_si();
            long q = cand.get_den().get_si();
            if (rejected.count({p, q})) continue;
            if (auto w = periodic_witness(f, powers, q, p)) {
                res.kind = RotationNumberResult::Kind::rational;
                res.rho = mod1(cand);
                res.witness = *w;
                res.period = q;
                return res;
            }
            rejected.insert({p, q});
        }
    }
    res.kind = RotationNumberResult::Kind::bracket;
    res.lo = lo;
    res.hi = hi;
    res.iterations = n;
    return res;
}

MinimalPeriod minimal_period(const PLMap& f, long max_period, long max_iterations) {
    RotationNumberResult r = rotation_number(f, max_period, max_iterations);
    if (!r.is_rational())
        throw uncertified_error("minimal period unknown: rotation number only bracketed to [" +
                                rat_to_string(r.lo) + "," + rat_to_string(r.hi) + "]");
    long q = r.period;
    PLMap g = PLMap::identity();
    for (long i = 1; i < q; ++i) {
        g = compose(f, g);
        if (!fixed_points(g).empty())
            throw precondition_error("minimal period cross-check failed at " + std::to_string(i));
    }
    g = compose(f, g);
    if (fixed_points(g).empty())
        throw precondition_error("minimal period cross-check failed: fix(f^q) empty");
    return MinimalPeriod{q, r.witness};
}

std::string block_kind_name(BlockKind k) { return k == BlockKind::point ? "point" : "arc"; }

std::string SignatureWord::str() const {
    if (identity) return "identity";
    std::ostringstream os;
    for (const auto& b : blocks) {
        os << (b.kind == BlockKind::point ? "(" + b.geom.a.str() + ")"
                                          : "[" + b.geom.a.str() + "," + b.geom.b.str() + "]");
        os << (b.sign > 0 ? "+" : "-") << " ";
    }
    return os.str();
}

}  // namespace circlerev
