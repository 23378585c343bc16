#include "circlerev/circle.hpp"

namespace circlerev {

bool cyclic_less(const CirclePoint& u, const CirclePoint& v, const Arc& I) {
    if (I.is_full()) throw precondition_error("cyclic_less: arc must be proper");
    if (!I.contains(u)) throw precondition_error("cyclic_less: u not in arc");
    if (!I.contains(v)) throw precondition_error("cyclic_less: v not in arc");
    // Offsets along the arc from its start; (u,v) stays inside I exactly when
    // u sits strictly before v in that parametrization.
    return I.start().distance_to(u) < I.start().distance_to(v);
}

std::string closure_name(ArcClosure c) {
    switch (c) {
        case ArcClosure::open: return "open";
        case ArcClosure::closed: return "closed";
        case ArcClosure::closed_start: return "closed_start";
        case ArcClosure::closed_end: return "closed_end";
    }
    return "?";
}

std::string Arc::str() const {
    if (full_) return "S";
    const char* lb = (closure_ == ArcClosure::closed || closure_ == ArcClosure::closed_start) ? "[" : "(";
    const char* rb = (closure_ == ArcClosure::closed || closure_ == ArcClosure::closed_end) ? "]" : ")";
    return std::string(lb) + start_.str() + "," + end_.str() + rb;
}

}  // namespace circlerev
