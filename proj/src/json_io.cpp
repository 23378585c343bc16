#include "circlerev/json_io.hpp"

namespace circlerev {

Json plmap_to_json(const PLMap& f) {
    Json j;
    j["format"] = "plmap/1";
    j["degree"] = f.degree();
    Json verts = Json::array();
    for (const auto& v : f.vertices())
        verts.push_back(Json::array({rat_to_string(v.x), rat_to_string(v.y)}));
    j["vertices"] = verts;
    return j;
}

PLMap plmap_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("degree") || !j.contains("vertices"))
        throw parse_error("map json: need degree and vertices");
    int degree = j.at("degree").get<int>();
    std::vector<PLVertex> vx;
    std::size_t idx = 0;
    for (const auto& v : j.at("vertices")) {
        if (!v.is_array() || v.size() != 2)
            throw parse_error("map json: vertex " + std::to_string(idx) + " must be [x, y]");
        vx.push_back(PLVertex{rat_from_string(v[0].get<std::string>()),
                              rat_from_string(v[1].get<std::string>())});
        ++idx;
    }
    return PLMap::from_vertices(degree, std::move(vx));
}

namespace {

Json point_json(const CirclePoint& p) { return rat_to_string(p.value()); }
CirclePoint point_from(const Json& j) { return CirclePoint(rat_from_string(j.get<std::string>())); }

Json span_json(const OpenSpan& s) {
    Json j;
    j["a"] = point_json(s.a);
    j["b"] = point_json(s.b);
    j["punctured"] = s.punctured;
    return j;
}

OpenSpan span_from(const Json& j) {
    OpenSpan s;
    s.a = point_from(j.at("a"));
    s.b = point_from(j.at("b"));
    s.punctured = j.at("punctured").get<bool>();
    return s;
}

Json affine_json(const AffineArcMap& m) {
    Json j;
    j["src_start"] = point_json(m.src_start);
    j["src_len"] = rat_to_string(m.src_len);
    j["dst_start"] = point_json(m.dst_start);
    j["dst_len"] = rat_to_string(m.dst_len);
    j["reversing"] = m.reversing;
    return j;
}

AffineArcMap affine_from(const Json& j) {
    AffineArcMap m;
    m.src_start = point_from(j.at("src_start"));
    m.src_len = rat_from_string(j.at("src_len").get<std::string>());
    m.dst_start = point_from(j.at("dst_start"));
    m.dst_len = rat_from_string(j.at("dst_len").get<std::string>());
    m.reversing = j.at("reversing").get<bool>();
    return m;
}

}  // namespace

Json eval_map_to_json_obj(const EvalMap& m) {
    const detail::EvalNode& n = m.node();
    Json j;
    switch (n.kind) {
        case detail::EvalNode::Kind::pl:
            j["op"] = "pl";
            j["map"] = plmap_to_json(*n.pl);
            return j;
        case detail::EvalNode::Kind::affine_arc:
            j["op"] = "affine";
            j["map"] = affine_json(*n.affine);
            return j;
        case detail::EvalNode::Kind::piecewise: {
            j["op"] = "piecewise";
            Json pieces = Json::array();
            for (const auto& [arc, sub] : n.pieces) {
                Json p;
                p["start"] = point_json(arc.start());
                p["end"] = point_json(arc.end());
                p["map"] = eval_map_to_json_obj(EvalMap::from_node(sub));
                pieces.push_back(std::move(p));
            }
            j["pieces"] = pieces;
            return j;
        }
        case detail::EvalNode::Kind::compose: {
            j["op"] = "compose";
            Json maps = Json::array();
            for (const auto& f : n.factors)
                maps.push_back(eval_map_to_json_obj(EvalMap::from_node(f)));
            j["maps"] = maps;
            return j;
        }
        case detail::EvalNode::Kind::inverse:
            j["op"] = "inverse";
            j["of"] = eval_map_to_json_obj(EvalMap::from_node(n.inner));
            return j;
        case detail::EvalNode::Kind::transport: {
            const detail::TransportData& t = *n.transport;
            j["op"] = "equivariant";
            j["fwd"] = plmap_to_json(t.fwd);
            j["tgt"] = plmap_to_json(t.tgt);
            j["src"] = span_json(t.src);
            j["dst"] = span_json(t.dst);
            j["img_a"] = point_json(t.img_a);
            j["img_b"] = point_json(t.img_b);
            j["x0"] = point_json(t.x0);
            j["k0"] = affine_json(t.k0);
            j["cap"] = t.cap;
            return j;
        }
    }
    throw parse_error("eval map json: bad node");
}

EvalMap eval_map_from_json_obj(const Json& j) {
    std::string op = j.at("op").get<std::string>();
    if (op == "pl") return EvalMap::pl(plmap_from_json(j.at("map")));
    if (op == "affine") return EvalMap::affine_arc(affine_from(j.at("map")));
    if (op == "piecewise") {
        std::vector<std::pair<Arc, EvalMap>> pieces;
        for (const auto& p : j.at("pieces"))
            pieces.emplace_back(
                Arc(point_from(p.at("start")), point_from(p.at("end")), ArcClosure::closed),
                eval_map_from_json_obj(p.at("map")));
        return EvalMap::piecewise(std::move(pieces));
    }
    if (op == "compose") {
        std::vector<EvalMap> maps;
        for (const auto& f : j.at("maps")) maps.push_back(eval_map_from_json_obj(f));
        return EvalMap::compose(std::move(maps));
    }
    if (op == "inverse") return EvalMap::inverse_of(eval_map_from_json_obj(j.at("of")));
    if (op == "equivariant") {
        detail::TransportData t;
        t.fwd = plmap_from_json(j.at("fwd"));
        t.fwd_inv = t.fwd.inverse();
        t.tgt = plmap_from_json(j.at("tgt"));
        t.tgt_inv = t.tgt.inverse();
        t.src = span_from(j.at("src"));
        t.dst = span_from(j.at("dst"));
        t.img_a = point_from(j.at("img_a"));
        t.img_b = point_from(j.at("img_b"));
        t.x0 = point_from(j.at("x0"));
        t.k0 = affine_from(j.at("k0"));
        t.cap = j.at("cap").get<std::int64_t>();
        return EvalMap::transport(std::move(t));
    }
    throw parse_error("eval map json: unknown op '" + op + "'");
}

std::string eval_map_to_json(const EvalMap& m) { return eval_map_to_json_obj(m).dump(); }
EvalMap eval_map_from_json(const std::string& text) {
    return eval_map_from_json_obj(Json::parse(text));
}

Json fixset_to_json(const FixSet& f) {
    Json j;
    if (f.full) {
        j["full_circle"] = true;
        return j;
    }
    Json comps = Json::array();
    for (const auto& c : f.comps) {
        Json e;
        e["kind"] = c.is_arc ? "arc" : "point";
        if (c.is_arc) {
            e["start"] = point_json(c.a);
            e["end"] = point_json(c.b);
        } else {
            e["at"] = point_json(c.a);
        }
        comps.push_back(std::move(e));
    }
    j["components"] = comps;
    return j;
}

Json word_to_json(const SignatureWord& w) {
    Json j;
    if (w.identity) {
        j["identity"] = true;
        return j;
    }
    Json blocks = Json::array();
    for (const auto& b : w.blocks) {
        Json e;
        e["kind"] = block_kind_name(b.kind);
        if (b.kind == BlockKind::arc) {
            e["start"] = point_json(b.geom.a);
            e["end"] = point_json(b.geom.b);
        } else {
            e["at"] = point_json(b.geom.a);
        }
        e["sign"] = b.sign > 0 ? "+" : "-";
        blocks.push_back(std::move(e));
    }
    j["blocks"] = blocks;
    return j;
}

Json rotation_to_json(const RotationNumberResult& r) {
    Json j;
    if (r.is_rational()) {
        j["kind"] = "rational";
        j["rho"] = rat_to_string(r.rho);
        j["witness"] = point_json(r.witness);
        j["minimal_period"] = r.period;
    } else {
        j["kind"] = "bracket";
        j["lo"] = rat_to_string(r.lo);
        j["hi"] = rat_to_string(r.hi);
        j["iterations"] = r.iterations;
    }
    return j;
}

Json matching_to_json(const ComponentMatching& m) {
    Json j;
    j["type"] = m.reversing ? "reflection" : "half_turn";
    if (m.reversing)
        j["axis"] = m.axis;
    else
        j["shift"] = m.shift;
    if (!m.pins.empty()) {
        Json pins = Json::array();
        for (const auto& [p, q] : m.pins)
            pins.push_back(Json::array({point_json(p), point_json(q)}));
        j["pins"] = pins;
    }
    return j;
}

Json verdict_to_json(const Verdict& v) {
    Json j;
    j["verdict"] = v.yes() ? "yes" : v.no() ? "no" : "unknown";
    j["group"] = v.group == Group::hplus ? "H+" : "H";
    j["reason"] = v.reason;
    if (v.rho) j["rho"] = rat_to_string(*v.rho);
    if (v.route) j["route"] = route_name(*v.route);
    if (v.plan) j["plan"] = matching_to_json(*v.plan);
    return j;
}

Json verification_to_json(const VerificationReport& r) {
    Json j;
    j["samples"] = r.samples;
    j["all_pass"] = r.all_pass;
    if (!r.all_pass) {
        j["failed_check"] = r.failed_check;
        if (r.failing_sample) j["failing_sample"] = point_json(*r.failing_sample);
    }
    j["max_denominator_bits"] = r.max_denominator_bits;
    j["unwind_steps"] = r.unwind_steps;
    return j;
}

Json witness_to_json(const Witness& w) {
    Json j;
    j["format"] = "witness/1";
    j["route"] = route_name(w.route);
    j["map"] = plmap_to_json(w.target);
    Json invs = Json::array();
    for (const auto& m : w.involutions) invs.push_back(eval_map_to_json_obj(m));
    j["involutions"] = invs;
    j["notes"] = w.notes;
    j["verification"] = verification_to_json(w.verification);
    return j;
}

Witness witness_from_json(const Json& j) {
    if (!j.contains("format") || j.at("format").get<std::string>() != "witness/1")
        throw parse_error("witness json: unsupported format");
    Witness w;
    std::string route = j.at("route").get<std::string>();
    if (route == "rot0")
        w.route = Route::rot0;
    else if (route == "two_i_reversing")
        w.route = Route::two_i_reversing;
    else if (route == "two_ii")
        w.route = Route::two_ii;
    else if (route == "two_minus")
        w.route = Route::two_minus;
    else if (route == "three_involutions")
        w.route = Route::three_involutions;
    else if (route == "rot_half_trivial")
        w.route = Route::rot_half_trivial;
    else
        throw parse_error("witness json: unknown route '" + route + "'");
    w.target = plmap_from_json(j.at("map"));
    for (const auto& m : j.at("involutions")) w.involutions.push_back(eval_map_from_json_obj(m));
    if (j.contains("notes")) w.notes = j.at("notes").get<std::string>();
    return w;
}

std::string digest_hex(const std::string& content) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : content) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

}  // namespace circlerev
