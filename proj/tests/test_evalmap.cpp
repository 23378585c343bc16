#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "circlerev/eval_map.hpp"
#include "circlerev/generator.hpp"
#include "circlerev/json_io.hpp"
#include "circlerev/sampling.hpp"

using namespace circlerev;

namespace {

Rat rat(const char* s) { return rat_from_string(s); }
CirclePoint pt(const char* s) { return CirclePoint(rat(s)); }

PLMap sawtooth() {
    return PLMap::from_vertices(1, {PLVertex{rat("0"), rat("0")}, PLVertex{rat("1/2"), rat("1/4")}});
}

PLMap push_up() {  // fixes only 0, moves points anticlockwise
    return PLMap::from_vertices(1, {PLVertex{rat("0"), rat("0")}, PLVertex{rat("1/2"), rat("3/4")}});
}

std::vector<CirclePoint> samples_excluding(const std::vector<CirclePoint>& exclude,
                                           std::uint64_t seed) {
    SamplePlan plan;
    plan.deterministic = 128;
    plan.random = 128;
    plan.seed = seed;
    return sample_points(plan, exclude);
}

}  // namespace

TEST_CASE("piecewise: cover validation, evaluation, rejection") {
    std::vector<std::pair<Arc, EvalMap>> pieces;
    pieces.emplace_back(Arc(pt("0"), pt("1/2"), ArcClosure::closed), EvalMap::identity());
    pieces.emplace_back(Arc(pt("1/2"), pt("0"), ArcClosure::closed), EvalMap::identity());
    EvalMap id2 = EvalMap::piecewise(pieces);
    CHECK(id2.eval(pt("1/3")) == pt("1/3"));
    CHECK(id2.eval(pt("1/2")) == pt("1/2"));
    CHECK(id2.eval(pt("0")) == pt("0"));

    // Endpoint values must agree exactly.
    std::vector<std::pair<Arc, EvalMap>> bad;
    bad.emplace_back(Arc(pt("0"), pt("1/2"), ArcClosure::closed), EvalMap::identity());
    bad.emplace_back(Arc(pt("1/2"), pt("0"), ArcClosure::closed),
                     EvalMap::pl(PLMap::rotation(rat("1/4"))));
    CHECK_THROWS_WITH_AS(EvalMap::piecewise(bad), doctest::Contains("disagree"),
                         precondition_error);

    // Gaps in the cover are rejected.
    std::vector<std::pair<Arc, EvalMap>> gap;
    gap.emplace_back(Arc(pt("0"), pt("1/4"), ArcClosure::closed), EvalMap::identity());
    gap.emplace_back(Arc(pt("1/2"), pt("0"), ArcClosure::closed), EvalMap::identity());
    EvalMap partial = EvalMap::piecewise(gap);  // a chain covering only part of S
    CHECK_THROWS_AS(partial.eval(pt("3/8")), precondition_error);
}

TEST_CASE("transport of the identity base map is the identity") {
    PLMap f = sawtooth();
    OpenSpan span = OpenSpan::punctured_circle(pt("0"));
    auto t = detail::make_transport(f, f, span, span, false, 1000000);
    EvalMap k = EvalMap::transport(t);

    EvalStats stats;
    CHECK(k.eval(pt("1/16"), &stats) == pt("1/16"));
    CHECK(stats.unwind_steps == 3);  // 1/16 -> 1/8 -> 1/4 -> 1/2 lands in the base domain

    for (const auto& x : samples_excluding({pt("0")}, 2)) CHECK(k.eval(x) == x);
}

TEST_CASE("transport iteration cap reports a diagnostic") {
    PLMap f = sawtooth();
    OpenSpan span = OpenSpan::punctured_circle(pt("0"));
    auto t = detail::make_transport(f, f, span, span, false, 4);
    EvalMap k = EvalMap::transport(t);
    Rat tiny(1, 1);
    for (int i = 0; i < 40; ++i) tiny /= 2;
    CHECK_THROWS_AS(k.eval(CirclePoint(tiny)), eval_limit_error);
}

TEST_CASE("reverse_on_arc yields an exact reversing involution") {
    for (int variant = 0; variant < 2; ++variant) {
        PLMap f = variant == 0 ? push_up() : sawtooth();
        OpenSpan span = OpenSpan::punctured_circle(pt("0"));
        EvalMap tau = reverse_on_arc(f, span);
        PLMap finv = f.inverse();
        auto pts = samples_excluding({pt("0")}, 3 + variant);
        for (const auto& x : pts) {
            CirclePoint tx = tau.eval(x);
            CHECK(tau.eval(tx) == x);
            CHECK(tau.eval(f(tau.eval(x))) == finv(x));
        }
        CHECK(tau.eval(pt("0")) == pt("0"));
    }
}

TEST_CASE("reverse_on_arc on a proper sub-arc and rejection with fixed points inside") {
    std::mt19937_64 rng(9);
    PLMap f = make_word_map(parse_word_pattern("P+P-"), rng);
    FixSet fx = fixed_points(f);
    OpenSpan span{fx.comps[0].a, fx.comps[1].a, false};
    EvalMap tau = reverse_on_arc(f, span);
    PLMap finv = f.inverse();
    int used = 0;
    for (const auto& x : samples_excluding({}, 4)) {
        if (!span.interior_contains(x)) continue;
        ++used;
        CirclePoint tx = tau.eval(x);
        CHECK(tau.eval(tx) == x);
        CHECK(tau.eval(f(tx)) == finv(x));
    }
    CHECK(used > 20);
    CHECK(tau.eval(span.a) == span.b);
    CHECK(tau.eval(span.b) == span.a);

    OpenSpan bad{fx.comps[0].a.advanced_by(rat("-1/64")), fx.comps[1].a, false};
    CHECK_THROWS_AS(reverse_on_arc(sawtooth(), bad), precondition_error);
}

TEST_CASE("equivariant conjugator: self-conjugacy commutes with the map") {
    PLMap f = sawtooth();
    EvalMap k = equivariant_conjugator(f, f, ComponentMatching{});
    for (const auto& x : samples_excluding({pt("0")}, 5)) {
        CHECK(k.eval(f(x)) == f(k.eval(x)));
    }
}

TEST_CASE("equivariant conjugator maps matched components onto each other") {
    PLMap f = sawtooth();
    PLMap r = PLMap::rotation(rat("1/2"));
    PLMap g = compose(r, compose(f, r.inverse()));  // word moves to 1/2
    EvalMap k = equivariant_conjugator(f, g, ComponentMatching{});
    CHECK(k.eval(pt("0")) == pt("1/2"));
    for (const auto& x : samples_excluding({pt("0")}, 6)) {
        CHECK(k.eval(f(x)) == g(k.eval(x)));
    }
}

TEST_CASE("equivariant conjugator rejects sign mismatches") {
    std::mt19937_64 rng(11);
    PLMap f = make_word_map(parse_word_pattern("P+P-"), rng);
    CHECK_THROWS_WITH_AS(equivariant_conjugator(f, f.inverse(), ComponentMatching{}),
                         doctest::Contains("sign mismatch"), precondition_error);
}

TEST_CASE("structural inversion round-trips pointwise") {
    std::mt19937_64 rng(13);
    PLMap f = make_word_map(parse_word_pattern("P+P-P+P-"), rng);
    PLMap r = PLMap::rotation(rat("1/3"));
    PLMap g = compose(r, compose(f, r.inverse()));
    // The base-point convention may rotate g's enumeration; find the shift
    // aligning block 0 with its rotated image.
    SignatureWord wf = signature(f);
    SignatureWord wg = signature(g);
    ComponentMatching match;
    for (long t = 0; t < (long)wg.size(); ++t)
        if (wg.blocks[t].geom.a == wf.blocks[0].geom.a.advanced_by(rat("1/3"))) match.shift = t;
    EvalMap k = equivariant_conjugator(f, g, match);
    EvalMap kinv = k.inverted();
    EvalMap wrapped = EvalMap::inverse_of(k);
    for (const auto& x : samples_excluding({}, 7)) {
        CirclePoint y = k.eval(x);
        CHECK(kinv.eval(y) == x);
        CHECK(wrapped.eval(y) == x);
        CHECK(k.eval(kinv.eval(x)) == x);
    }
}

TEST_CASE("arc conjugator intertwines the interval dynamics") {
    std::mt19937_64 rng(17);
    PLMap F = make_word_map(parse_word_pattern("P+P-"), rng);
    FixSet fx = fixed_points(F);
    Arc span(fx.comps[0].a, fx.comps[1].a, ArcClosure::closed);
    EvalMap k = arc_conjugator(F, F, span, span, false);
    for (const auto& x : samples_excluding({}, 8)) {
        if (!span.contains(x)) continue;
        CHECK(k.eval(F(x)) == F(k.eval(x)));
    }

    // Reversing variant against the inverse dynamics.
    EvalMap kr = arc_conjugator(F, F.inverse(), span, span, true);
    PLMap Finv = F.inverse();
    for (const auto& x : samples_excluding({}, 9)) {
        if (!span.contains(x)) continue;
        CHECK(kr.eval(F(x)) == Finv(kr.eval(x)));
    }
}

TEST_CASE("eval map json round trip is exact") {
    std::mt19937_64 rng(19);
    PLMap f = make_word_map(parse_word_pattern("P+P-"), rng);
    PLMap r = PLMap::rotation(rat("1/5"));
    PLMap g = compose(r, compose(f, r.inverse()));
    EvalMap k = equivariant_conjugator(f, g, ComponentMatching{});
    EvalMap tree = EvalMap::compose({EvalMap::inverse_of(k), EvalMap::pl(f), k});

    std::string text = eval_map_to_json(tree);
    EvalMap back = eval_map_from_json(text);
    CHECK(eval_map_to_json(back) == text);
    for (const auto& x : samples_excluding({}, 10)) CHECK(back.eval(x) == tree.eval(x));
}
