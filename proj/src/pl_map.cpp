#include "circlerev/pl_map.hpp"

#include <algorithm>
#include <sstream>

namespace circlerev {

namespace {

Rat interpolate(const Rat& x0, const Rat& y0, const Rat& x1, const Rat& y1, const Rat& x) {
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

}  // namespace

PLMap PLMap::from_vertices(int degree, std::vector<PLVertex> vx) {
    if (degree != 1 && degree != -1)
        throw parse_error("degree must be 1 or -1");
    if (vx.empty()) throw parse_error("vertex list empty");
    for (std::size_t i = 0; i < vx.size(); ++i) {
        if (vx[i].x < 0 || vx[i].x >= 1)
            throw parse_error("vertex " + std::to_string(i) + ": x = " +
                              rat_to_string(vx[i].x) + " outside [0,1)");
        if (i > 0 && !(vx[i - 1].x < vx[i].x))
            throw parse_error("vertex " + std::to_string(i) + ": x = " +
                              rat_to_string(vx[i].x) + " not strictly increasing");
    }
    // Monotonicity of the lift, including the wrap segment.
    for (std::size_t i = 0; i < vx.size(); ++i) {
        Rat ynext = (i + 1 < vx.size()) ? vx[i + 1].y : vx[0].y + degree;
        bool ok = degree == 1 ? vx[i].y < ynext : vx[i].y > ynext;
        if (!ok)
            throw parse_error("vertex " + std::to_string((i + 1) % vx.size()) +
                              ": y breaks strict " + (degree == 1 ? std::string("increase") : std::string("decrease")) +
                              " required for degree " + std::to_string(degree));
    }

    // Force a vertex at x = 0 so equal maps canonicalize identically.
    if (vx[0].x != 0) {
        const PLVertex& last = vx.back();
        Rat y0 = interpolate(last.x - 1, last.y - degree, vx[0].x, vx[0].y, Rat(0));
        vx.insert(vx.begin(), PLVertex{Rat(0), y0});
    }
    // Normalize the lift so F(0) lands in [0,1).
    Rat shift = rat_floor(vx[0].y);
    if (shift != 0)
        for (auto& v : vx) v.y -= shift;

    // Drop collinear interior vertices (the vertex at 0 is always kept).
    std::vector<PLVertex> out;
    out.reserve(vx.size());
    out.push_back(vx[0]);
    for (std::size_t i = 1; i < vx.size(); ++i) {
        PLVertex next = (i + 1 < vx.size()) ? vx[i + 1] : PLVertex{vx[0].x + 1, vx[0].y + degree};
        const PLVertex& prev = out.back();
        Rat s1 = (vx[i].y - prev.y) / (vx[i].x - prev.x);
        Rat s2 = (next.y - vx[i].y) / (next.x - vx[i].x);
        if (s1 != s2) out.push_back(vx[i]);
    }
    for (auto& v : out) {
        v.x.canonicalize();
        v.y.canonicalize();
    }
    return PLMap(degree, std::move(out));
}

PLMap PLMap::identity() { return PLMap(1, {PLVertex{Rat(0), Rat(0)}}); }

PLMap PLMap::rotation(const Rat& rho) {
    return from_vertices(1, {PLVertex{Rat(0), mod1(rho)}});
}

PLMap PLMap::reflection(const Rat& c) {
    return from_vertices(-1, {PLVertex{Rat(0), c}});
}

Rat PLMap::lift(const Rat& t) const {
    Rat k = rat_floor(t);
    Rat x = t - k;
    // Locate the segment [x_i, x_{i+1}) containing x; x_0 = 0 always.
    std::size_t lo = 0, hi = v_.size();
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (v_[mid].x <= x)
            lo = mid;
        else
            hi = mid;
    }
    Rat x1 = (lo + 1 < v_.size()) ? v_[lo + 1].x : v_[0].x + 1;
    Rat y1 = (lo + 1 < v_.size()) ? v_[lo + 1].y : v_[0].y + degree_;
    Rat y = (x == v_[lo].x) ? v_[lo].y : interpolate(v_[lo].x, v_[lo].y, x1, y1, x);
    y += degree_ * k;
    y.canonicalize();
    return y;
}

PLMap PLMap::inverse() const {
    std::vector<PLVertex> inv;
    inv.reserve(v_.size());
    for (const auto& v : v_) {
        Rat k = rat_floor(v.y);
        inv.push_back(PLVertex{v.y - k, v.x - Rat(degree_) * k});
    }
    std::sort(inv.begin(), inv.end(),
              [](const PLVertex& a, const PLVertex& b) { return a.x < b.x; });
    return from_vertices(degree_, std::move(inv));
}

PLMap PLMap::power(long n) const {
    if (n < 0) return inverse().power(-n);
    PLMap base = *this;
    PLMap acc = identity();
    while (n > 0) {
        if (n & 1) acc = compose(base, acc);
        n >>= 1;
        if (n) base = compose(base, base);
    }
    return acc;
}

bool PLMap::is_identity() const {
    return degree_ == 1 && v_.size() == 1 && v_[0].x == 0 && v_[0].y == 0;
}

bool PLMap::is_involution() const { return compose(*this, *this).is_identity(); }

std::vector<PLMap::Segment> PLMap::segments() const {
    std::vector<Segment> segs;
    segs.reserve(v_.size());
    for (std::size_t i = 0; i < v_.size(); ++i) {
        Segment s;
        s.x0 = v_[i].x;
        s.y0 = v_[i].y;
        if (i + 1 < v_.size()) {
            s.x1 = v_[i + 1].x;
            s.y1 = v_[i + 1].y;
        } else {
            s.x1 = v_[0].x + 1;
            s.y1 = v_[0].y + degree_;
        }
        segs.push_back(std::move(s));
    }
    return segs;
}

std::string PLMap::str() const {
    std::ostringstream os;
    os << "PL(deg " << degree_ << ";";
    for (const auto& v : v_) os << " (" << rat_to_string(v.x) << "," << rat_to_string(v.y) << ")";
    os << ")";
    return os.str();
}

PLMap compose(const PLMap& f, const PLMap& g) {
    PLMap ginv = g.inverse();
    std::vector<Rat> xs;
    for (const auto& v : g.vertices()) xs.push_back(v.x);
    for (const auto& v : f.vertices()) xs.push_back(mod1(ginv.lift(v.x)));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<PLVertex> vx;
    vx.reserve(xs.size());
    for (const auto& x : xs) vx.push_back(PLVertex{x, f.lift(g.lift(x))});
    return PLMap::from_vertices(f.degree() * g.degree(), std::move(vx));
}

}  // namespace circlerev
