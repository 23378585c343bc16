#pragma once

#include <compare>
#include <iosfwd>
#include <string>

#include "circlerev/rational.hpp"

namespace circlerev {

// A point of the circle R/Z, held as its canonical representative in [0,1).
class CirclePoint {
  public:
    CirclePoint() : v_(0) {}
    explicit CirclePoint(const Rat& q) : v_(mod1(q)) {}

    const Rat& value() const { return v_; }

    friend bool operator==(const CirclePoint& a, const CirclePoint& b) { return a.v_ == b.v_; }
    friend bool operator!=(const CirclePoint& a, const CirclePoint& b) { return a.v_ != b.v_; }

    // Anticlockwise displacement from this point to `to`, in [0,1).
    Rat distance_to(const CirclePoint& to) const { return mod1(to.v_ - v_); }

    CirclePoint advanced_by(const Rat& d) const { return CirclePoint(v_ + d); }
    CirclePoint antipode() const { return advanced_by(Rat(1, 2)); }

    std::string str() const { return rat_to_string(v_); }

  private:
    Rat v_;
};

inline CirclePoint canonicalize(const Rat& q) { return CirclePoint(q); }

enum class ArcClosure { open, closed, closed_start, closed_end };

// Anticlockwise arc from start to end.  start == end with open closure is the
// empty arc; with closed closure it is the single point {start}.  A separate
// full-circle state represents all of S.
class Arc {
  public:
    Arc() : full_(true), closure_(ArcClosure::closed) {}
    Arc(const CirclePoint& start, const CirclePoint& end, ArcClosure closure)
        : full_(false), start_(start), end_(end), closure_(closure) {}

    static Arc full_circle() { return Arc(); }

    bool is_full() const { return full_; }
    bool is_empty() const {
        return !full_ && start_ == end_ && closure_ == ArcClosure::open;
    }
    bool is_degenerate_point() const {
        return !full_ && start_ == end_ && closure_ == ArcClosure::closed;
    }

    const CirclePoint& start() const { return start_; }
    const CirclePoint& end() const { return end_; }
    ArcClosure closure() const { return closure_; }

    // Anticlockwise length; 1 for the full circle, 0 for empty/point arcs.
    Rat length() const {
        if (full_) return Rat(1);
        return start_.distance_to(end_);
    }

    bool contains(const CirclePoint& x) const {
        if (full_) return true;
        Rat d = start_.distance_to(x);
        Rat len = length();
        bool start_in = closure_ == ArcClosure::closed || closure_ == ArcClosure::closed_start;
        bool end_in = closure_ == ArcClosure::closed || closure_ == ArcClosure::closed_end;
        if (start_ == end_) {
            // Either empty or a single point.
            return (start_in || end_in) && d == 0;
        }
        if (d == 0) return start_in;
        if (d == len) return end_in;
        return d < len;
    }

    // Open interior of this arc.
    Arc interior() const {
        if (full_) return *this;
        return Arc(start_, end_, ArcClosure::open);
    }
    Arc closure_arc() const {
        if (full_) return *this;
        return Arc(start_, end_, ArcClosure::closed);
    }

    friend bool operator==(const Arc& a, const Arc& b) {
        if (a.full_ || b.full_) return a.full_ == b.full_;
        return a.start_ == b.start_ && a.end_ == b.end_ && a.closure_ == b.closure_;
    }

    std::string str() const;

  private:
    bool full_;
    CirclePoint start_, end_;
    ArcClosure closure_;
};

inline Arc arc_between(const CirclePoint& a, const CirclePoint& b, ArcClosure closure) {
    return Arc(a, b, closure);
}

// u < v in I: the open anticlockwise arc (u,v) is contained in I.  Strict, so
// cyclic_less(u, u, I) is false.  Requires u, v in I and I a proper arc.
bool cyclic_less(const CirclePoint& u, const CirclePoint& v, const Arc& I);

std::string closure_name(ArcClosure c);

}  // namespace circlerev
