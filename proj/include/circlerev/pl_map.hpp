#pragma once

#include <string>
#include <utility>
#include <vector>

#include "circlerev/circle.hpp"
#include "circlerev/rational.hpp"

namespace circlerev {

struct PLVertex {
    Rat x;  // in [0,1), strictly increasing
    Rat y;  // lift value
    friend bool operator==(const PLVertex&, const PLVertex&) = default;
};

// Piecewise-linear circle homeomorphism of degree +/-1, stored as its lift
// F: R -> R with F(x+1) = F(x) + degree, affine between vertices.  Canonical
// form: a vertex at x = 0, F(0) normalized into [0,1), and no collinear
// interior vertices, so equality of maps is equality of representations.
class PLMap {
  public:
    PLMap() : PLMap(identity()) {}

    static PLMap from_vertices(int degree, std::vector<PLVertex> vertices);
    static PLMap identity();
    static PLMap rotation(const Rat& rho);
    // x -> c - x.
    static PLMap reflection(const Rat& c);

    int degree() const { return degree_; }
    const std::vector<PLVertex>& vertices() const { return v_; }
    std::size_t breakpoint_count() const { return v_.size(); }

    // Lift value F(t) for any rational t.
    Rat lift(const Rat& t) const;
    CirclePoint operator()(const CirclePoint& x) const { return CirclePoint(lift(x.value())); }

    PLMap inverse() const;
    PLMap power(long n) const;

    bool is_identity() const;
    bool is_involution() const;

    // Affine segments of the fundamental period [0,1): consecutive vertex
    // pairs plus the wrap segment ending at (x0+1, y0+degree).
    struct Segment {
        Rat x0, x1;  // x0 < x1, x1 <= 1
        Rat y0, y1;  // lift values at x0, x1
        Rat slope() const { return (y1 - y0) / (x1 - x0); }
    };
    std::vector<Segment> segments() const;

    friend bool operator==(const PLMap& a, const PLMap& b) {
        return a.degree_ == b.degree_ && a.v_ == b.v_;
    }

    std::string str() const;

  private:
    PLMap(int degree, std::vector<PLVertex> canonical) : degree_(degree), v_(std::move(canonical)) {}

    int degree_;
    std::vector<PLVertex> v_;
};

inline CirclePoint evaluate(const PLMap& f, const CirclePoint& x) { return f(x); }

// Exact f o g.  deg(f o g) = deg(f) * deg(g); breakpoints of the composite are
// g's breakpoints together with g-preimages of f's breakpoints.
PLMap compose(const PLMap& f, const PLMap& g);

inline PLMap invert(const PLMap& f) { return f.inverse(); }
inline bool is_involution(const PLMap& f) { return f.is_involution(); }

}  // namespace circlerev
