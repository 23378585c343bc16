#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "circlerev/generator.hpp"
#include "circlerev/json_io.hpp"
#include "circlerev/pl_map.hpp"

using namespace circlerev;

namespace {

Rat rat(const char* s) { return rat_from_string(s); }
CirclePoint pt(const char* s) { return CirclePoint(rat(s)); }

PLMap sawtooth() {
    return PLMap::from_vertices(1, {PLVertex{rat("0"), rat("0")}, PLVertex{rat("1/2"), rat("1/4")}});
}

}  // namespace

TEST_CASE("evaluation: rotation, interpolation, reflection") {
    CHECK(PLMap::rotation(rat("1/3"))(pt("5/6")) == pt("1/6"));
    CHECK(sawtooth()(pt("1/4")) == pt("1/8"));
    CHECK(PLMap::reflection(rat("0"))(pt("1/3")) == pt("2/3"));
}

TEST_CASE("composition basics") {
    PLMap r13 = PLMap::rotation(rat("1/3"));
    CHECK(compose(r13, r13) == PLMap::rotation(rat("2/3")));
    PLMap f = sawtooth();
    CHECK(compose(f, f.inverse()).is_identity());
    PLMap neg = PLMap::reflection(rat("0"));
    CHECK(compose(neg, neg).is_identity());
}

TEST_CASE("inversion") {
    CHECK(PLMap::rotation(rat("1/3")).inverse() == PLMap::rotation(rat("2/3")));
    PLMap inv = sawtooth().inverse();
    PLMap expect =
        PLMap::from_vertices(1, {PLVertex{rat("0"), rat("0")}, PLVertex{rat("1/4"), rat("1/2")}});
    CHECK(inv == expect);
    CHECK(PLMap::identity().inverse().is_identity());
}

TEST_CASE("involution checks") {
    CHECK(PLMap::rotation(rat("1/2")).is_involution());
    CHECK_FALSE(PLMap::rotation(rat("1/3")).is_involution());
    CHECK(PLMap::reflection(rat("0")).is_involution());
    CHECK(PLMap::identity().is_involution());
}

TEST_CASE("algebraic laws on random maps") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        PLMap f = random_homeo(rng() % 2 ? 1 : -1, 2 + rng() % 4, rng);
        PLMap g = random_homeo(rng() % 2 ? 1 : -1, 2 + rng() % 4, rng);
        PLMap h = random_homeo(1, 2 + rng() % 4, rng);
        CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
        CHECK(compose(f, PLMap::identity()) == f);
        CHECK(compose(PLMap::identity(), f) == f);
        CHECK(f.inverse().inverse() == f);
        CHECK(compose(f, g).degree() == f.degree() * g.degree());
        CHECK(compose(f.inverse(), f).is_identity());
    }
}

TEST_CASE("lift relation F(x+1) = F(x) + degree") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 4; ++trial) {
        PLMap f = random_homeo(trial % 2 ? 1 : -1, 3 + rng() % 4, rng);
        for (int i = 0; i < 1000; ++i) {
            long den = 1 + (long)(rng() % 997);
            Rat x((long)(rng() % 2000) - 1000, den);
            x.canonicalize();
            CHECK(f.lift(x + 1) == f.lift(x) + f.degree());
        }
    }
}

TEST_CASE("evaluation respects the lift on canonical representatives") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        PLMap f = random_homeo(rng() % 2 ? 1 : -1, 2 + rng() % 5, rng);
        Rat x((long)(rng() % 64), 64);
        x.canonicalize();
        CHECK(f(CirclePoint(x)).value() == mod1(f.lift(x)));
    }
}

TEST_CASE("canonical form drops collinear vertices and pins a vertex at 0") {
    PLMap a = PLMap::from_vertices(
        1, {PLVertex{rat("0"), rat("1/3")}, PLVertex{rat("1/2"), rat("5/6")}});
    PLMap b = PLMap::from_vertices(1, {PLVertex{rat("1/4"), rat("7/12")}});
    CHECK(a == PLMap::rotation(rat("1/3")));
    CHECK(b == PLMap::rotation(rat("1/3")));
    PLMap c = PLMap::from_vertices(1, {PLVertex{rat("1/8"), rat("9/8")}});
    CHECK(c.vertices()[0].x == 0);
    CHECK(c == PLMap::rotation(rat("1")));
    CHECK(c.is_identity());
}

TEST_CASE("parser rejections name the offending vertex") {
    CHECK_THROWS_WITH_AS(
        PLMap::from_vertices(1, {PLVertex{rat("0"), rat("0")}, PLVertex{rat("0"), rat("1/2")}}),
        doctest::Contains("vertex 1"), parse_error);
    CHECK_THROWS_WITH_AS(
        PLMap::from_vertices(1, {PLVertex{rat("0"), rat("1/2")}, PLVertex{rat("1/2"), rat("1/4")}}),
        doctest::Contains("vertex 1"), parse_error);
    CHECK_THROWS_WITH_AS(PLMap::from_vertices(1, {PLVertex{rat("3/2"), rat("0")}}),
                         doctest::Contains("outside"), parse_error);
    CHECK_THROWS_AS(PLMap::from_vertices(2, {PLVertex{rat("0"), rat("0")}}), parse_error);
}

TEST_CASE("map json round trip") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        PLMap f = random_homeo(rng() % 2 ? 1 : -1, 2 + rng() % 5, rng);
        Json j = plmap_to_json(f);
        CHECK(plmap_from_json(j) == f);
        CHECK(plmap_to_json(plmap_from_json(j)).dump() == j.dump());
    }
    Json bad = Json::parse(R"({"degree":1,"vertices":[["0","0"],["1/2","1/4"],["1/4","1/8"]]})");
    CHECK_THROWS_WITH_AS(plmap_from_json(bad), doctest::Contains("vertex 2"), parse_error);
}
