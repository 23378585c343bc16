#include "circlerev/report.hpp"

#include <sstream>

namespace circlerev {

Json Report::to_json() const {
    Json j;
    j["format"] = "report/1";
    j["command"] = command;
    j["input_digest"] = input_digest;
    j["seed"] = seed;
    j["params"] = params;
    j["results"] = results;
    return j;
}

std::string render_word_human(const SignatureWord& w) {
    if (w.identity) return "identity";
    std::ostringstream os;
    for (const auto& b : w.blocks) {
        if (b.kind == BlockKind::point)
            os << "(" << b.geom.a.str() << ")";
        else
            os << "[" << b.geom.a.str() << "," << b.geom.b.str() << "]";
        os << (b.sign > 0 ? "+" : "-") << " ";
    }
    return os.str();
}

}  // namespace circlerev
