#include "circlerev/generator.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace circlerev {

Rat random_rational_between(const Rat& lo, const Rat& hi, std::mt19937_64& rng) {
    if (!(lo < hi)) throw precondition_error("random rational: empty interval");
    for (long den = 64;; den *= 4) {
        Rat qd(den);
        long nlo = floor_to_long(lo * qd) + 1;
        long nhi = floor_to_long(hi * qd);
        if (hi * qd == nhi) --nhi;  // keep strict
        if (nlo > nhi) continue;
        long n = nlo + (long)(rng() % (std::uint64_t)(nhi - nlo + 1));
        Rat r(n, den);
        r.canonicalize();
        return r;
    }
}

namespace {

// n distinct sorted points in [0,1), grid denominator scaled to n.
std::vector<Rat> random_sorted_points(std::size_t n, std::mt19937_64& rng) {
    long den = 64;
    while ((std::size_t)den < 8 * n) den *= 2;
    std::set<long> picks;
    while (picks.size() < n) picks.insert((long)(rng() % (std::uint64_t)den));
    std::vector<Rat> out;
    for (long p : picks) {
        Rat r(p, den);
        r.canonicalize();
        out.push_back(r);
    }
    return out;
}

}  // namespace

WordPattern parse_word_pattern(const std::string& text) {
    WordPattern w;
    if (text.size() % 2 != 0 || text.empty())
        throw parse_error("word pattern: expected pairs like P+A-");
    for (std::size_t i = 0; i < text.size(); i += 2) {
        char k = text[i], s = text[i + 1];
        if (k == 'P' || k == 'p')
            w.kinds.push_back(BlockKind::point);
        else if (k == 'A' || k == 'a')
            w.kinds.push_back(BlockKind::arc);
        else
            throw parse_error(std::string("word pattern: bad kind '") + k + "'");
        if (s == '+')
            w.signs.push_back(1);
        else if (s == '-')
            w.signs.push_back(-1);
        else
            throw parse_error(std::string("word pattern: bad sign '") + s + "'");
    }
    return w;
}

PLMap make_word_map(const WordPattern& pattern, std::mt19937_64& rng) {
    std::size_t m = pattern.kinds.size();
    if (m == 0) throw unsatisfiable_error("word pattern: empty");
    std::size_t anchors = 0;
    for (auto k : pattern.kinds) anchors += k == BlockKind::arc ? 2 : 1;
    std::vector<Rat> pts = random_sorted_points(2 * anchors, rng);  // spare room for gaps
    // Use every other point as an anchor so each gap is nonempty.
    std::vector<Rat> slot;
    for (std::size_t i = 0; i < 2 * anchors; i += 2) slot.push_back(pts[i]);

    std::vector<PLVertex> vx;
    std::size_t si = 0;
    std::vector<std::pair<Rat, Rat>> gaps;  // lifted gap (start, end)
    std::vector<Rat> gap_start;
    Rat first_anchor = slot[0];
    for (std::size_t b = 0; b < m; ++b) {
        Rat a = slot[si++];
        vx.push_back(PLVertex{a, a});
        Rat e = a;
        if (pattern.kinds[b] == BlockKind::arc) {
            e = slot[si++];
            vx.push_back(PLVertex{e, e});
        }
        Rat next = b + 1 < m ? slot[si] : first_anchor + 1;
        gaps.emplace_back(e, next);
    }
    // Tent on each gap per its sign; the tent apex stays in the middle band
    // of its target range so every slope is bounded away from 1 and orbit
    // escape times stay moderate.
    for (std::size_t b = 0; b < m; ++b) {
        auto [ga, gb] = gaps[b];
        Rat m1 = ga + (gb - ga) / 3 + (gb - ga) * (long)(rng() % 3) / 9;
        Rat m2;
        if (pattern.signs[b] > 0)
            m2 = random_rational_between(m1 + (gb - m1) / 4, gb - (gb - m1) / 4, rng);
        else
            m2 = random_rational_between(ga + (m1 - ga) / 4, m1 - (m1 - ga) / 4, rng);
        Rat k = rat_floor(m1);
        vx.push_back(PLVertex{m1 - k, m2 - k});
    }
    std::sort(vx.begin(), vx.end(), [](const PLVertex& a, const PLVertex& b) { return a.x < b.x; });
    return PLMap::from_vertices(1, std::move(vx));
}

PLMap random_homeo(int degree, std::size_t breakpoints, std::mt19937_64& rng) {
    std::size_t n = std::max<std::size_t>(1, breakpoints);
    std::vector<Rat> xs = random_sorted_points(n, rng);
    std::vector<Rat> ys = random_sorted_points(n, rng);
    std::vector<PLVertex> vx;
    for (std::size_t i = 0; i < n; ++i) {
        Rat y = degree == 1 ? ys[i] : ys[n - 1 - i];
        vx.push_back(PLVertex{xs[i], y});
    }
    return PLMap::from_vertices(degree, std::move(vx));
}

PLMap random_preserving_involution(std::mt19937_64& rng) {
    PLMap h = random_homeo(1, 3 + rng() % 3, rng);
    return compose(h, compose(PLMap::rotation(Rat(1, 2)), h.inverse()));
}

PLMap random_reversing_involution(std::mt19937_64& rng) {
    // Two fixed points a < b; a reversing graph on [a, b] mirrored exactly.
    std::vector<Rat> fp = random_sorted_points(2, rng);
    Rat a = fp[0], b = fp[1];
    std::size_t k = 1 + rng() % 3;
    std::vector<Rat> ts, ss;
    {
        std::vector<Rat> t = random_sorted_points(k + 8, rng);
        for (const Rat& v : t)
            if (v > a && v < b && ts.size() < k) ts.push_back(v);
        std::vector<Rat> s = random_sorted_points(k + 8, rng);
        for (const Rat& v : s) {
            Rat lifted = v < b ? v + 1 : v;  // target window (b, a+1)
            if (lifted > b && lifted < a + 1 && ss.size() < k) ss.push_back(lifted);
        }
    }
    std::size_t kk = std::min(ts.size(), ss.size());
    std::sort(ss.rbegin(), ss.rend());  // images decrease as sources increase
    std::vector<std::pair<Rat, Rat>> window;  // graph over [a, a+1)
    window.emplace_back(a, a + 1);
    for (std::size_t i = 0; i < kk; ++i) window.emplace_back(ts[i], ss[i]);
    window.emplace_back(b, b);
    for (std::size_t i = kk; i-- > 0;) window.emplace_back(ss[i], ts[i]);
    std::vector<PLVertex> vx;
    for (auto& [u, v] : window) {
        Rat w = rat_floor(u);
        vx.push_back(PLVertex{u - w, v + w});  // degree -1 lift: F(x+1) = F(x) - 1
    }
    std::sort(vx.begin(), vx.end(), [](const PLVertex& p, const PLVertex& q) { return p.x < q.x; });
    PLMap tau = PLMap::from_vertices(-1, std::move(vx));
    if (!tau.is_involution())
        throw precondition_error("generator: reversing involution construction failed");
    return tau;
}

GeneratedMap random_pl_homeo(const GeneratorSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    int set_count = (spec.rho ? 1 : 0) + (spec.word ? 1 : 0) + (spec.fixed_point_count ? 1 : 0);
    if (set_count > 1)
        throw unsatisfiable_error("generator: at most one constraint may be given");
    if (spec.degree == -1) {
        if (set_count > 0)
            throw unsatisfiable_error("generator: constraints apply to degree 1 maps");
        PLMap f = random_homeo(-1, spec.breakpoints, rng);
        FixSet fix = fixed_points(f);
        if (fix.comps.size() != 2 || fix.comps[0].is_arc || fix.comps[1].is_arc)
            throw precondition_error("generator: reversing map must have two fixed points");
        return {f, "degree -1; fixed points " + fix.comps[0].a.str() + ", " +
                       fix.comps[1].a.str()};
    }
    if (spec.rho) {
        Rat rho = mod1(*spec.rho);
        if (rho == 0) {
            WordPattern w;
            w.kinds = {BlockKind::point};
            w.signs = {rng() % 2 ? 1 : -1};
            PLMap f = make_word_map(w, rng);
            return {f, "rho = 0 via fixed point"};
        }
        long p = (long)rho.get_num().get_si();
        long q = (long)rho.get_den().get_si();
        std::vector<Rat> orbit = random_sorted_points(q, rng);
        std::vector<PLVertex> vx;
        std::ostringstream cert;
        cert << "periodic orbit";
        for (long j = 0; j < q; ++j) {
            long img = (j + p) % q;
            long wrap = (j + p) / q;
            vx.push_back(PLVertex{orbit[j], orbit[img] + wrap});
            cert << " " << rat_to_string(orbit[j]);
        }
        // Optional wiggle vertices between orbit points, monotone by choice.
        std::size_t extra = spec.breakpoints > (std::size_t)q ? spec.breakpoints - q : 0;
        for (std::size_t e = 0; e < extra; ++e) {
            long j = (long)(rng() % (std::uint64_t)q);
            Rat x0 = orbit[j];
            Rat x1 = j + 1 < q ? orbit[j + 1] : orbit[0] + 1;
            Rat y0 = vx[j].y;
            Rat y1 = j + 1 < q ? vx[j + 1].y : vx[0].y + 1;
            Rat xm = random_rational_between(x0, x1, rng);
            bool fresh = true;
            for (const auto& v : vx)
                if (v.x == mod1(xm)) fresh = false;
            if (!fresh) continue;
            Rat ym = random_rational_between(y0, y1, rng);
            Rat k = rat_floor(xm);
            vx.push_back(PLVertex{xm - k, ym - k});
            std::sort(vx.begin(), vx.end(),
                      [](const PLVertex& u, const PLVertex& v) { return u.x < v.x; });
            // Re-derive orbit vertex indices invalidated by the insert.
            break;
        }
        std::sort(vx.begin(), vx.end(),
                  [](const PLVertex& u, const PLVertex& v) { return u.x < v.x; });
        PLMap f = PLMap::from_vertices(1, std::move(vx));
        cert << "; rho = " << rat_to_string(rho);
        return {f, cert.str()};
    }
    if (spec.word) {
        WordPattern w = parse_word_pattern(*spec.word);
        PLMap f = make_word_map(w, rng);
        return {f, "word " + *spec.word};
    }
    if (spec.fixed_point_count) {
        int n = *spec.fixed_point_count;
        if (n < 1) throw unsatisfiable_error("generator: fixed point count must be positive");
        WordPattern w;
        for (int i = 0; i < n; ++i) {
            w.kinds.push_back(BlockKind::point);
            w.signs.push_back(rng() % 2 ? 1 : -1);
        }
        PLMap f = make_word_map(w, rng);
        std::ostringstream cert;
        cert << n << " fixed points";
        return {f, cert.str()};
    }
    return {random_homeo(1, spec.breakpoints, rng), "unconstrained"};
}

ModelPair periodic_reversible_model(long p, long q, std::mt19937_64& rng) {
    if (q < 2 || p < 1 || p >= q || std::gcd(p, q) != 1)
        throw precondition_error("model: p/q must be a reduced fraction in (0,1)");
    Rat len(1, 2 * q);
    // Anti-symmetric generator phi on [0, len]: graph symmetric under
    // (u,v) -> (len - v, len - u), which makes the block reflection conjugate
    // phi to its inverse.
    std::vector<std::pair<Rat, Rat>> pts;
    Rat u = len / 8 + len * (long)(rng() % 3) / 32;
    Rat v = len / 4 + len * (long)(rng() % 3) / 32;
    if (u < v && u + v < len) pts.emplace_back(u, v);
    std::vector<std::pair<Rat, Rat>> graph;
    graph.emplace_back(Rat(0), Rat(0));
    for (auto& [a, b] : pts) graph.emplace_back(a, b);
    for (auto it = pts.rbegin(); it != pts.rend(); ++it)
        graph.emplace_back(len - it->second, len - it->first);
    graph.emplace_back(len, len);

    // Equivariant union over the rotation orbit of the block, identity on the
    // complement.
    Rat step(1, q);
    std::vector<PLVertex> vx;
    for (long k = 0; k < q; ++k) {
        Rat base = step * k;
        for (std::size_t i = 0; i + 1 < graph.size(); ++i)
            vx.push_back(PLVertex{base + graph[i].first, base + graph[i].second});
        vx.push_back(PLVertex{base + len, base + len});
    }
    std::sort(vx.begin(), vx.end(), [](const PLVertex& a, const PLVertex& b) { return a.x < b.x; });
    PLMap block = PLMap::from_vertices(1, std::move(vx));
    PLMap g0 = compose(PLMap::rotation(step), block);
    PLMap sigma = PLMap::reflection(step + len);
    if (!sigma.is_involution() || !compose(sigma, compose(g0, compose(sigma, g0))).is_identity())
        throw precondition_error("model: reflection does not reverse the base map");
    PLMap f0 = g0.power(p);
    // sigma reverses every power of g0.
    PLMap h = random_homeo(rng() % 2 ? 1 : -1, 3 + rng() % 3, rng);
    ModelPair out;
    out.map = compose(h, compose(f0, h.inverse()));
    out.reverser = compose(h, compose(sigma, h.inverse()));
    return out;
}

PLMap reversing_with_inner_word(const std::vector<int>& inner_signs, std::mt19937_64& rng) {
    if (inner_signs.size() < 2)
        throw precondition_error("reversing generator: need at least two inner signs");
    std::size_t n = inner_signs.size() - 1;  // interior fixed points
    Rat c(1, 2);
    // g0: fixed arc [c, 1] (through 0), interior fixed points in (0, c), inner
    // sign pattern on the gaps.
    std::vector<Rat> interior;
    {
        std::vector<Rat> pts = random_sorted_points(2 * n + 4, rng);
        for (const Rat& p : pts)
            if (p > Rat(1, 16) && p < c - Rat(1, 16) && interior.size() < n) interior.push_back(p);
        if (interior.size() < n) {
            interior.clear();
            for (std::size_t i = 1; i <= n; ++i) interior.push_back(c * (long)i / (long)(n + 1));
        }
    }
    std::vector<PLVertex> vx;
    vx.push_back(PLVertex{Rat(0), Rat(0)});
    std::vector<Rat> bounds;
    bounds.push_back(Rat(0));
    for (const Rat& t : interior) {
        vx.push_back(PLVertex{t, t});
        bounds.push_back(t);
    }
    bounds.push_back(c);
    vx.push_back(PLVertex{c, c});
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        Rat ga = bounds[i], gb = bounds[i + 1];
        Rat m1 = ga + (gb - ga) / 2;
        Rat m2 = inner_signs[i] > 0 ? random_rational_between(m1, gb, rng)
                                    : random_rational_between(ga, m1, rng);
        vx.push_back(PLVertex{m1, m2});
    }
    std::sort(vx.begin(), vx.end(), [](const PLVertex& a, const PLVertex& b) { return a.x < b.x; });
    PLMap g0 = PLMap::from_vertices(1, std::move(vx));

    // r: reversing involution fixing 0 and c, affine on both sides.
    PLMap r = PLMap::from_vertices(-1, {PLVertex{Rat(0), Rat(1)}, PLVertex{c, c}});
    if (!r.is_involution())
        throw precondition_error("reversing generator: hinge is not an involution");
    return compose(g0, r);
}

}  // namespace circlerev
