#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "circlerev/factorization.hpp"
#include "circlerev/generator.hpp"
#include "circlerev/json_io.hpp"

using namespace circlerev;

namespace {

Rat rat(const char* s) { return rat_from_string(s); }
CirclePoint pt(const char* s) { return CirclePoint(rat(s)); }

PLMap sawtooth() {
    return PLMap::from_vertices(1, {PLVertex{rat("0"), rat("0")}, PLVertex{rat("1/2"), rat("1/4")}});
}

FactorOptions quick_opts(std::uint64_t seed) {
    FactorOptions opt;
    opt.plan.deterministic = 96;
    opt.plan.random = 96;
    opt.plan.seed = seed;
    return opt;
}

Witness decide_and_factor(const PLMap& f, Group group, const FactorOptions& opt) {
    DecisionOptions dopt;
    dopt.max_period = opt.max_period;
    dopt.max_iterations = opt.max_iterations;
    Verdict v = group == Group::hplus ? decide_strongly_reversible_hplus(f, dopt)
                                      : decide_strongly_reversible_h(f, dopt);
    REQUIRE(v.yes());
    return factor_strongly_reversible(f, v, opt);
}

}  // namespace

TEST_CASE("rot0: half-turn words get preserving involutions") {
    std::mt19937_64 rng(3);
    const char* pats[] = {"P+P-", "A+A-", "P+A-P-A+", "P-P-P+P+"};
    int idx = 0;
    for (const char* p : pats) {
        PLMap f = make_word_map(parse_word_pattern(p), rng);
        Witness w = decide_and_factor(f, Group::hplus, quick_opts(10 + idx++));
        CHECK(w.route == Route::rot0);
        CHECK(w.verification.all_pass);
        REQUIRE(w.involutions.size() == 1);
        // Spot checks beyond the built-in verification.
        const EvalMap& mu = w.involutions[0];
        CHECK(mu.eval(pt("1/7")) != pt("1/7"));  // nontrivial involution
    }
}

TEST_CASE("rot0: identity map goes through the trivial route") {
    Witness w = factor_strongly_reversible(
        PLMap::identity(),
        decide_strongly_reversible_hplus(PLMap::identity(), DecisionOptions{}), quick_opts(1));
    CHECK(w.route == Route::rot_half_trivial);
    CHECK(w.verification.all_pass);
}

TEST_CASE("rot0 is not invoked without a plan") {
    std::mt19937_64 rng(5);
    PLMap f = make_word_map(parse_word_pattern("P-"), rng);
    Verdict v = decide_strongly_reversible_hplus(f, DecisionOptions{});
    CHECK(v.no());
}

TEST_CASE("two_i_reversing: reflection words get reversing involutions") {
    std::mt19937_64 rng(7);
    int idx = 0;
    const char* pats[] = {"P-", "P+", "A-", "P+P+P-", "A+P+A-"};
    for (const char* p : pats) {
        PLMap f = make_word_map(parse_word_pattern(p), rng);
        DecisionOptions dopt;
        Verdict v = decide_strongly_reversible_h(f, dopt);
        REQUIRE(v.yes());
        if (*v.route != Route::two_i_reversing) continue;  // some words admit half-turns first
        Witness w = factor_strongly_reversible(f, v, quick_opts(20 + idx++));
        CHECK(w.verification.all_pass);
    }
}

TEST_CASE("two_i_reversing: sawtooth example") {
    Witness w = decide_and_factor(sawtooth(), Group::h, quick_opts(31));
    CHECK(w.route == Route::two_i_reversing);
    CHECK(w.verification.all_pass);
    const EvalMap& mu = w.involutions[0];
    CHECK(mu.eval(pt("0")) == pt("0"));  // the lone fixed point is preserved
}

TEST_CASE("two_i_reversing: identity target uses a plain reflection") {
    FactorOptions opt = quick_opts(32);
    Witness w = reversing_involution_rot0(PLMap::identity(), ComponentMatching{}, opt);
    CHECK(w.verification.all_pass);
}

TEST_CASE("two_ii: rotations are reversed by reflections") {
    for (const char* r : {"1/4", "1/3", "2/5"}) {
        PLMap f = PLMap::rotation(rat(r));
        Witness w = decide_and_factor(f, Group::h, quick_opts(40));
        CHECK(w.route == Route::two_ii);
        CHECK(w.verification.all_pass);
    }
}

TEST_CASE("two_ii: nontrivial periodic models with consecutive ordering") {
    std::mt19937_64 rng(11);
    ModelPair mp = periodic_reversible_model(1, 2, rng);
    Witness w = decide_and_factor(mp.map, Group::h, quick_opts(41));
    CHECK(w.route == Route::two_ii);
    CHECK(w.verification.all_pass);
}

TEST_CASE("two_ii: rotation number 2/5 exercises the coprime-power transport") {
    std::mt19937_64 rng(13);
    ModelPair mp = periodic_reversible_model(2, 5, rng);
    RotationNumberResult r = rotation_number(mp.map);
    REQUIRE(r.is_rational());
    CHECK((r.rho == rat("2/5") || r.rho == rat("3/5")));
    Witness w = decide_and_factor(mp.map, Group::h, quick_opts(42));
    CHECK(w.route == Route::two_ii);
    CHECK(w.verification.all_pass);
    CHECK(w.notes.find("transported") != std::string::npos);
}

TEST_CASE("two_minus: reversing involutions take the fast path") {
    PLMap neg = PLMap::reflection(rat("0"));
    Witness w = decide_and_factor(neg, Group::h, quick_opts(50));
    CHECK(w.route == Route::rot_half_trivial);
    CHECK(w.verification.all_pass);
}

TEST_CASE("two_minus: composites of two involutions are recognized and witnessed") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 6; ++trial) {
        PLMap tau = random_reversing_involution(rng);
        PLMap sigma = random_preserving_involution(rng);
        PLMap f = compose(tau, sigma);
        if (f.degree() != -1) continue;
        if (f.is_involution()) continue;
        DecisionOptions dopt;
        Verdict v = decide_strongly_reversible_h(f, dopt);
        REQUIRE(v.yes());
        CHECK(*v.route == Route::two_minus);
        Witness w = factor_strongly_reversible(f, v, quick_opts(60 + trial));
        CHECK(w.verification.all_pass);
    }
}

TEST_CASE("two_minus: chiral squared words are refused") {
    std::mt19937_64 rng(19);
    std::vector<int> inner = {1, 1, -1, 1, -1, -1};
    for (int trial = 0; trial < 4; ++trial) {
        PLMap f = reversing_with_inner_word(inner, rng);
        REQUIRE(f.degree() == -1);
        REQUIRE_FALSE(f.is_involution());
        Verdict v = decide_strongly_reversible_h(f, DecisionOptions{});
        CHECK(v.no());
    }
}

TEST_CASE("three involutions: rotations") {
    Witness w = factor_three_involutions(PLMap::rotation(rat("1/3")), quick_opts(70));
    CHECK(w.route == Route::three_involutions);
    CHECK(w.verification.all_pass);
    REQUIRE(w.involutions.size() == 3);

    Witness wi = factor_three_involutions(PLMap::rotation(rat("1/2")), quick_opts(71));
    CHECK(wi.verification.all_pass);
    CHECK(wi.notes == "involution path");
}

TEST_CASE("three involutions: random property suite") {
    std::mt19937_64 rng(23);
    int done = 0;
    for (int trial = 0; trial < 12 && done < 8; ++trial) {
        GeneratorSpec spec;
        spec.seed = rng();
        spec.breakpoints = 2 + trial % 4;
        switch (trial % 3) {
            case 0: break;
            case 1: spec.rho = Rat(1, 2 + trial % 3); break;
            case 2: spec.word = trial % 2 ? "P+P-" : "P-P-"; break;
        }
        PLMap f = random_pl_homeo(spec).map;
        if (f.is_involution()) continue;
        Witness w = factor_three_involutions(f, quick_opts(80 + trial));
        CHECK(w.verification.all_pass);
        ++done;
    }
    CHECK(done >= 8);
}

TEST_CASE("periodic conjugator: rigid rotation commutes with itself") {
    PLMap f = PLMap::rotation(rat("1/3"));
    auto c = build_periodic_conjugator(f, f, 1);
    REQUIRE(c);
    std::vector<CirclePoint> pts = sample_points(SamplePlan{64, 64, 9});
    for (const auto& x : pts) CHECK(c->eval(f(x)) == f(c->eval(x)));
}

TEST_CASE("periodic conjugator: conjugates and refusals") {
    std::mt19937_64 rng(29);
    ModelPair mp = periodic_reversible_model(1, 3, rng);
    PLMap f = mp.map;
    if (f.degree() != 1) return;
    PLMap h = random_homeo(1, 3, rng);
    PLMap g = compose(h, compose(f, h.inverse()));
    auto c = build_periodic_conjugator(f, g, 1);
    REQUIRE(c);
    std::vector<CirclePoint> pts = sample_points(SamplePlan{48, 48, 10});
    for (const auto& x : pts) CHECK(c->eval(f(x)) == g(c->eval(x)));

    // Mismatched power words: a rigid rotation against a map whose cube has
    // nontrivial fixed structure.
    auto bad = build_periodic_conjugator(f, PLMap::rotation(rat("1/3")), 1);
    CHECK_FALSE(bad);
}

TEST_CASE("transport correctness: conjugated witnesses re-verify") {
    std::mt19937_64 rng(31);
    ModelPair mp = periodic_reversible_model(1, 2, rng);
    PLMap f = mp.map;
    if (f.degree() != 1) return;
    FactorOptions opt = quick_opts(90);
    Witness w = involution_two_ii(f, opt);
    PLMap h = random_homeo(1, 3, rng);
    PLMap g = compose(h, compose(f, h.inverse()));
    auto c = build_periodic_conjugator(f, g, 1);
    REQUIRE(c);
    Witness moved;
    moved.route = Route::two_ii;
    moved.target = g;
    moved.involutions = {EvalMap::compose({*c, w.involutions[0], c->inverted()})};
    VerificationReport rep = verify_witness(moved, opt.plan);
    CHECK(rep.all_pass);
}

TEST_CASE("interval involution: exact symbolic example") {
    EvalMap g = EvalMap::pl(PLMap::rotation(rat("1/2")));
    Arc J(pt("0"), pt("1/8"), ArcClosure::closed);
    Arc J2(pt("1/2"), pt("5/8"), ArcClosure::closed);
    EvalMap gamma = involution_between_intervals(g, J, J2);
    // gamma is x -> 5/8 - x on all of J.
    for (const char* s : {"0", "1/16", "1/8", "1/32", "3/32", "1/10"}) {
        CirclePoint x = pt(s);
        CHECK(gamma.eval(x) == CirclePoint(rat("5/8") - x.value()));
    }
    CHECK(gamma.eval(J.start()) == J2.end());
    CHECK(gamma.eval(J.end()) == J2.start());
    // gamma o g^{-1} o gamma = g on J.
    EvalMap ginv = g.inverted();
    for (const char* s : {"1/16", "1/32", "1/12", "1/9"}) {
        CirclePoint x = pt(s);
        CHECK(gamma.eval(ginv.eval(gamma.eval(x))) == g.eval(x));
    }
    CHECK_THROWS_AS(involution_between_intervals(
                        g, Arc(pt("0"), pt("1/8"), ArcClosure::closed),
                        Arc(pt("1/8"), pt("1/4"), ArcClosure::closed)),
                    precondition_error);
}

TEST_CASE("interval involution: order reversal and generic maps") {
    std::mt19937_64 rng(37);
    PLMap f = random_homeo(1, 4, rng);
    // Pick disjoint J, f(J) with f(J) not overlapping J.
    Arc J(pt("0"), pt("1/32"), ArcClosure::closed);
    Arc J2(f(J.start()), f(J.end()), ArcClosure::closed);
    if (J2.contains(J.start()) || J2.contains(J.end()) || J.contains(J2.start()) ||
        J.contains(J2.end()))
        return;
    EvalMap g = EvalMap::pl(f);
    EvalMap gamma = involution_between_intervals(g, J, J2);
    // Reverses the cyclic order of three points of J.
    CirclePoint a = pt("1/128"), b = pt("1/64"), c = pt("1/48");
    Rat da = J2.start().distance_to(gamma.eval(a));
    Rat db = J2.start().distance_to(gamma.eval(b));
    Rat dc = J2.start().distance_to(gamma.eval(c));
    CHECK(da > db);
    CHECK(db > dc);
    EvalMap ginv = g.inverted();
    for (const char* s : {"1/128", "1/50", "1/40"}) {
        CirclePoint x = pt(s);
        CHECK(gamma.eval(ginv.eval(gamma.eval(x))) == g.eval(x));
    }
}

TEST_CASE("verify_witness: corrupted witnesses fail with a sample") {
    std::mt19937_64 rng(41);
    PLMap f = make_word_map(parse_word_pattern("P+P-"), rng);
    Witness w = decide_and_factor(f, Group::hplus, quick_opts(100));
    REQUIRE(w.verification.all_pass);
    Witness bad = w;
    bad.involutions[0] = EvalMap::identity();
    VerificationReport rep = verify_witness(bad, quick_opts(100).plan);
    CHECK_FALSE(rep.all_pass);
    CHECK(rep.failing_sample.has_value());
    CHECK(rep.failed_check == "reversal law");

    // Identity target with identity witness passes.
    Witness triv{Route::rot_half_trivial, PLMap::identity(), {EvalMap::identity()}, {}, ""};
    CHECK(verify_witness(triv, quick_opts(101).plan).all_pass);
}

TEST_CASE("witness archives round trip and re-verify") {
    std::mt19937_64 rng(43);
    PLMap f = make_word_map(parse_word_pattern("P+P-"), rng);
    Witness w = decide_and_factor(f, Group::hplus, quick_opts(110));
    Json j = witness_to_json(w);
    Witness back = witness_from_json(j);
    CHECK(back.route == w.route);
    CHECK(back.target == w.target);
    VerificationReport rep = verify_witness(back, quick_opts(110).plan);
    CHECK(rep.all_pass);
    CHECK(witness_to_json(back).at("involutions") == j.at("involutions"));
}
