#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "circlerev/dynamics.hpp"
#include "circlerev/generator.hpp"
#include "circlerev/sampling.hpp"

using namespace circlerev;

namespace {

Rat rat(const char* s) { return rat_from_string(s); }
CirclePoint pt(const char* s) { return CirclePoint(rat(s)); }

PLMap sawtooth() {
    return PLMap::from_vertices(1, {PLVertex{rat("0"), rat("0")}, PLVertex{rat("1/2"), rat("1/4")}});
}

}  // namespace

TEST_CASE("fixed point sets") {
    CHECK(fixed_points(PLMap::identity()).full);

    FixSet fs = fixed_points(sawtooth());
    REQUIRE(fs.comps.size() == 1);
    CHECK_FALSE(fs.comps[0].is_arc);
    CHECK(fs.comps[0].a == pt("0"));

    FixSet fr = fixed_points(PLMap::reflection(rat("0")));
    REQUIRE(fr.comps.size() == 2);
    CHECK(fr.comps[0].a == pt("0"));
    CHECK(fr.comps[1].a == pt("1/2"));

    CHECK(fixed_points(PLMap::rotation(rat("1/3"))).empty());
}

TEST_CASE("orientation reversing maps fix exactly two points") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        PLMap f = random_homeo(-1, 2 + rng() % 5, rng);
        FixSet fs = fixed_points(f);
        REQUIRE(fs.comps.size() == 2);
        CHECK_FALSE(fs.comps[0].is_arc);
        CHECK_FALSE(fs.comps[1].is_arc);
        CHECK(f(fs.comps[0].a) == fs.comps[0].a);
        CHECK(f(fs.comps[1].a) == fs.comps[1].a);
    }
}

TEST_CASE("fixed arc components merge across segment boundaries") {
    // Identity on [3/4, 1/8] through 0, strictly above the diagonal elsewhere.
    PLMap f = PLMap::from_vertices(1, {PLVertex{rat("0"), rat("0")},
                                       PLVertex{rat("1/8"), rat("1/8")},
                                       PLVertex{rat("1/4"), rat("1/2")},
                                       PLVertex{rat("3/4"), rat("3/4")}});
    FixSet fs = fixed_points(f);
    REQUIRE(fs.comps.size() == 1);
    CHECK(fs.comps[0].is_arc);
    CHECK(fs.comps[0].a == pt("3/4"));
    CHECK(fs.comps[0].b == pt("1/8"));
    CHECK(fs.comps[0].contains(pt("0")));

    SignatureWord w = signature(f);
    REQUIRE(w.size() == 1);
    CHECK(w.blocks[0].kind == BlockKind::arc);
    CHECK(w.blocks[0].sign == 1);
}

TEST_CASE("signature words") {
    SignatureWord ws = signature(sawtooth());
    REQUIRE(ws.size() == 1);
    CHECK(ws.blocks[0].kind == BlockKind::point);
    CHECK(ws.blocks[0].geom.a == pt("0"));
    CHECK(ws.blocks[0].sign == -1);

    CHECK(signature(PLMap::identity()).identity);
    CHECK_THROWS_AS(signature(PLMap::rotation(rat("1/3"))), precondition_error);
    CHECK_THROWS_AS(signature(PLMap::reflection(rat("0"))), precondition_error);

    std::mt19937_64 rng(19);
    WordPattern pat;
    pat.kinds = {BlockKind::point, BlockKind::point};
    pat.signs = {1, -1};
    PLMap f = make_word_map(pat, rng);
    SignatureWord w = signature(f);
    REQUIRE(w.size() == 2);
    CHECK(w.blocks[0].sign == 1);
    CHECK(w.blocks[1].sign == -1);
}

TEST_CASE("generated word maps realize their patterns") {
    std::mt19937_64 rng(23);
    const char* specs[] = {"P+P-", "A+P-P+", "P-", "A-A+", "P+P+P-P+P-P-"};
    for (const char* sp : specs) {
        WordPattern pat = parse_word_pattern(sp);
        for (int trial = 0; trial < 5; ++trial) {
            PLMap f = make_word_map(pat, rng);
            SignatureWord w = signature(f);
            REQUIRE(w.size() == pat.kinds.size());
            for (std::size_t i = 0; i < pat.kinds.size(); ++i) {
                CHECK(w.blocks[i].kind == pat.kinds[i]);
                CHECK(w.blocks[i].sign == pat.signs[i]);
            }
        }
    }
}

TEST_CASE("delta evaluation matches the word") {
    PLMap f = sawtooth();
    FixSet fs = fixed_points(f);
    CHECK(delta_at(f, fs, pt("0")) == 0);
    CHECK(delta_at(f, fs, pt("1/3")) == -1);
    CHECK(delta_at(f, fs, pt("7/8")) == -1);
}

TEST_CASE("signature identities under conjugation and inversion") {
    std::vector<CirclePoint> samples = sample_points(SamplePlan{64, 64, 3});
    std::mt19937_64 rng(29);
    WordPattern pat = parse_word_pattern("P+P-");
    PLMap f = make_word_map(pat, rng);

    CHECK(signature_identities_check(f, PLMap::identity(), samples).pass);

    PLMap h = PLMap::rotation(rat("1/2"));
    CHECK(signature_identities_check(f, h, samples).pass);
    // The conjugated word is the original rotated by a half turn, up to the
    // base-point convention's cyclic re-enumeration.
    SignatureWord w = signature(f);
    SignatureWord wc = signature(compose(h, compose(f, h.inverse())));
    REQUIRE(wc.size() == w.size());
    std::size_t offset = wc.size();
    for (std::size_t i = 0; i < wc.size(); ++i)
        if (wc.blocks[i].geom.a == w.blocks[0].geom.a.antipode()) offset = i;
    REQUIRE(offset < wc.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const auto& img = wc.blocks[(offset + i) % wc.size()];
        CHECK(img.sign == w.blocks[i].sign);
        CHECK(img.geom.a == w.blocks[i].geom.a.antipode());
    }

    PLMap neg = PLMap::reflection(rat("0"));
    CHECK(signature_identities_check(f, neg, samples).pass);
    SignatureWord wn = signature(compose(neg, compose(f, neg.inverse())));
    // Reversing conjugation flips every sign globally.
    int plus_before = 0, plus_after = 0;
    for (const auto& b : w.blocks) plus_before += b.sign > 0;
    for (const auto& b : wn.blocks) plus_after += b.sign > 0;
    CHECK(plus_before + plus_after == (int)w.size());

    for (int trial = 0; trial < 10; ++trial) {
        PLMap g = make_word_map(parse_word_pattern(trial % 2 ? "P+P-P-" : "A-P+"), rng);
        PLMap hh = random_homeo(rng() % 2 ? 1 : -1, 2 + rng() % 4, rng);
        CHECK(signature_identities_check(g, hh, samples).pass);
    }
}

TEST_CASE("signature of the inverse flips every sign") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        PLMap f = make_word_map(parse_word_pattern(trial % 2 ? "P+P-P-" : "P-A+"), rng);
        SignatureWord w = signature(f);
        SignatureWord wi = signature(f.inverse());
        REQUIRE(wi.size() == w.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
            CHECK(wi.blocks[i].sign == -w.blocks[i].sign);
            CHECK(wi.blocks[i].kind == w.blocks[i].kind);
        }
    }
}

TEST_CASE("stern-brocot enumeration matches a naive scan") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 50; ++trial) {
        long d1 = 1 + (long)(rng() % 400), d2 = 1 + (long)(rng() % 400);
        Rat a((long)(rng() % (std::uint64_t)d1), d1), b((long)(rng() % (std::uint64_t)d2), d2);
        a.canonicalize();
        b.canonicalize();
        Rat lo = std::min(a, b), hi = std::max(a, b);
        long qmax = 1 + (long)(rng() % 40);
        std::vector<Rat> got = stern_brocot_candidates(lo, hi, qmax);
        std::vector<Rat> want;
        for (long q = 1; q <= qmax; ++q)
            for (long p = 0; p <= q; ++p) {
                if (std::gcd(p, q) != 1) continue;
                Rat c(p, q);
                c.canonicalize();
                if (lo <= c && c <= hi) want.push_back(c);
            }
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == want[i]);
    }
}

TEST_CASE("rotation numbers of rigid rotations certify exactly") {
    for (long q = 1; q <= 12; ++q) {
        for (long p = 0; p < q; ++p) {
            if (std::gcd(p, q) != 1) continue;
            Rat rho(p, q);
            rho.canonicalize();
            RotationNumberResult r = rotation_number(PLMap::rotation(rho), 64, 2000);
            REQUIRE(r.is_rational());
            CHECK(r.rho == rho);
            CHECK(r.period == (p == 0 ? 1 : q));
            // Witness is exactly periodic.
            PLMap fq = PLMap::rotation(rho).power(r.period);
            CHECK(fq(r.witness) == r.witness);
        }
    }
}

TEST_CASE("rotation number of a map with fixed points is zero") {
    RotationNumberResult r = rotation_number(sawtooth());
    REQUIRE(r.is_rational());
    CHECK(r.rho == 0);
    CHECK(r.period == 1);
    CHECK(r.witness == pt("0"));
    CHECK_THROWS_AS(rotation_number(PLMap::reflection(rat("0"))), precondition_error);
}

TEST_CASE("bracket results are rigorous and refine monotonically") {
    // Rotation by 2/5 scanned with max_period 3: never certifies, so the
    // bracket must close in on 2/5.
    PLMap f = PLMap::rotation(rat("2/5"));
    RotationNumberResult a = rotation_number(f, 3, 256);
    RotationNumberResult b = rotation_number(f, 3, 1024);
    REQUIRE_FALSE(a.is_rational());
    REQUIRE_FALSE(b.is_rational());
    CHECK(a.lo <= rat("2/5"));
    CHECK(rat("2/5") <= a.hi);
    CHECK(a.hi - a.lo <= rat("2/256") * 2);
    CHECK(a.hi - a.lo <= Rat(2, a.iterations));
    CHECK(b.hi - b.lo <= Rat(2, b.iterations));
    CHECK(a.lo <= b.lo);
    CHECK(b.hi <= a.hi);

    // A genuinely nonlinear non-certifying map.
    PLMap g = PLMap::from_vertices(
        1, {PLVertex{rat("0"), rat("13/31")}, PLVertex{rat("1/2"), rat("27/29")}});
    RotationNumberResult rg = rotation_number(g, 2, 512);
    if (!rg.is_rational()) {
        CHECK(rg.hi - rg.lo <= Rat(2, rg.iterations));
        RotationNumberResult rg2 = rotation_number(g, 2, 2048);
        if (!rg2.is_rational()) {
            CHECK(rg.lo <= rg2.lo);
            CHECK(rg2.hi <= rg.hi);
        }
    }
}

TEST_CASE("rotation number is a conjugacy invariant and additive on powers") {
    std::mt19937_64 rng(41);
    const char* rhos[] = {"1/3", "2/5", "1/2", "3/7"};
    for (const char* rs : rhos) {
        GeneratorSpec spec;
        spec.rho = rat(rs);
        spec.seed = rng();
        spec.breakpoints = 6;
        PLMap f = random_pl_homeo(spec).map;
        RotationNumberResult r = rotation_number(f, 16, 4000);
        REQUIRE(r.is_rational());
        CHECK(r.rho == rat(rs));

        PLMap h = random_homeo(1, 2 + rng() % 4, rng);
        RotationNumberResult rc = rotation_number(compose(h, compose(f, h.inverse())), 16, 4000);
        REQUIRE(rc.is_rational());
        CHECK(rc.rho == r.rho);

        for (long n = 2; n <= 5; ++n) {
            RotationNumberResult rn = rotation_number(f.power(n), 16, 4000);
            REQUIRE(rn.is_rational());
            CHECK(rn.rho == mod1(r.rho * n));
        }
    }
}

TEST_CASE("minimal periods") {
    CHECK(minimal_period(PLMap::rotation(rat("2/5"))).period == 5);
    CHECK(minimal_period(sawtooth()).period == 1);

    GeneratorSpec spec;
    spec.rho = rat("1/2");
    spec.seed = 7;
    GeneratedMap g = random_pl_homeo(spec);
    MinimalPeriod mp = minimal_period(g.map);
    CHECK(mp.period == 2);
    CHECK(compose(g.map, g.map)(mp.witness) == mp.witness);

    PLMap slow = PLMap::rotation(rat("2/5"));
    CHECK_THROWS_AS(minimal_period(slow, 3, 256), uncertified_error);
}
