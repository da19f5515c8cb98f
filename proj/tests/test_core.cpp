#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "tes/stream.hpp"

using namespace tes;
using th::ev;
using th::events_of;
using th::tes_of;

TEST_CASE("rational canonical form and arithmetic") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-1, -2) == Rational(1, 2));
    CHECK(Rational(1, -2) == Rational(-1, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(1, 2) * Rational(2, 3) == Rational(1, 3));
    CHECK(Rational(1) / Rational(4) == Rational(1, 4));
    CHECK(Rational(7, 2).floor() == 3);
    CHECK(Rational(-7, 2).floor() == -4);
    CHECK(Rational(3).floor() == 3);
    CHECK(Rational(3).is_integer());
    CHECK_FALSE(Rational(1, 2).is_integer());
    CHECK(Rational(3).str() == "3");
    CHECK(Rational(-5, 4).str() == "-5/4");
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1) < Rational(-1, 2));
}

TEST_CASE("event total order and serialization") {
    Event a = Event::named("a");
    Event n1 = Event::named("N", {std::int64_t{1}, std::string("p")});
    Event n2 = Event::named("N", {std::int64_t{2}, std::string("p")});
    Event pos = Event::position(Coord{Rational(3), Rational(0)}, 1);
    Event pos2 = Event::position(Coord{Rational(1), Rational(0)}, 2);

    // Named events sort before positions; names lexicographic; args
    // lexicographic after arity.
    CHECK(n1 < a);  // "N" < "a"
    CHECK(n1 < n2);
    CHECK(a < pos);
    CHECK(pos < pos2);  // object id dominates

    CHECK(event_str(a) == "a");
    CHECK(event_str(n1) == "N(1,p)");
    CHECK(event_str(pos) == "(3;0)_1");
    CHECK(event_str(Event::named("read", {std::int64_t{1}, Coord{Rational(3), Rational(0)}})) ==
          "read(1,(3;0))");
    CHECK(event_set_str({a, n1}) == "{N(1,p), a}");
    CHECK(event_set_str({}) == "{}");
    CHECK(atom_str(Atom{Rational(7, 2)}) == "7/2");
}

TEST_CASE("tes validation") {
    CHECK_THROWS_AS(Tes({Observation{{}, Rational(2)}, Observation{{}, Rational(1)}}, Rational(3)),
                    std::invalid_argument);
    CHECK_THROWS_AS(Tes({Observation{{}, Rational(1)}, Observation{{}, Rational(1)}}, Rational(3)),
                    std::invalid_argument);
    CHECK_THROWS_AS(Tes({Observation{{}, Rational(4)}}, Rational(3)), std::invalid_argument);
    CHECK_THROWS_AS(Tes({Observation{{}, Rational(-1)}}, Rational(3)), std::invalid_argument);
    CHECK_THROWS_AS(Tes({}, Rational(0)), std::invalid_argument);
    CHECK_NOTHROW(Tes({Observation{{}, Rational(0)}}, Rational(3)));  // stamp 0 allowed
}

TEST_CASE("tes at / domain / events") {
    Tes s = tes_of({{{"a"}, Rational(1)}, {{"a", "b"}, Rational(2)}}, Rational(3));
    CHECK(s.at(Rational(1)) == events_of({"a"}));
    CHECK(s.at(Rational(2)) == events_of({"a", "b"}));
    CHECK(s.at(Rational(3, 2)) == EventSet{});  // off-domain stamp reads as silent
    CHECK(s.domain() == std::set<Rational>{Rational(1), Rational(2)});
    CHECK(s.events() == events_of({"a", "b"}));
    CHECK(Tes::empty(Rational(3)).domain().empty());
}

TEST_CASE("tes pointwise containment") {
    Tes s = tes_of({{{"a"}, Rational(1)}}, Rational(2));
    Tes t = tes_of({{{"a", "b"}, Rational(1)}}, Rational(2));
    Tes u = tes_of({{{"a", "b"}, Rational(1)}, {{"b"}, Rational(2)}}, Rational(2));
    CHECK(tes_contained(s, t));
    CHECK_FALSE(tes_contained(t, s));
    // Same stamps are required, not just subset observables.
    CHECK_FALSE(tes_contained(s, u));
    CHECK_FALSE(tes_contained(u, t));
    CHECK(tes_contained(s, s));
    // Differing horizons are incomparable.
    Tes v = tes_of({{{"a"}, Rational(1)}}, Rational(3));
    CHECK_FALSE(tes_contained(s, v));
}

TEST_CASE("refinement is inclusion on both coordinates") {
    EventSet eab = events_of({"a", "b"});
    Tes s = tes_of({{{"a"}, Rational(1)}}, Rational(2));
    Tes t = tes_of({{{"b"}, Rational(1)}}, Rational(2));
    Component a(eab, {s, t}, Rational(2));
    Component b(events_of({"a"}), {s}, Rational(2));
    Component c(eab, {s}, Rational(2));
    CHECK(refines(b, a));
    CHECK(refines(c, a));
    CHECK(refines(a, a));
    CHECK_FALSE(refines(a, b));
    // Interface inclusion alone is not enough.
    Component d(events_of({"a"}), {tes_of({{{"a"}, Rational(2)}}, Rational(2))}, Rational(2));
    CHECK_FALSE(refines(d, a));
}

TEST_CASE("containment lifts pointwise containment existentially") {
    EventSet eab = events_of({"a", "b"});
    // A and B contain each other without being equal: containment is a
    // preorder, not a partial order.
    Tes sig = tes_of({{{"a", "b"}, Rational(1)}, {{"a", "b"}, Rational(2)}}, Rational(2));
    Tes tau = tes_of({{{"a"}, Rational(1)}, {{"a"}, Rational(2)}}, Rational(2));
    Component a(eab, {sig, tau}, Rational(2));
    Component b(eab, {sig}, Rational(2));
    CHECK(contained(a, b));
    CHECK(contained(b, a));
    CHECK_FALSE(a == b);
    // Interface must be included.
    Component c(events_of({"a"}), {tau}, Rational(2));
    CHECK(contained(c, a));
    CHECK_FALSE(contained(a, c));
    // Refinement implies containment.
    CHECK(contained(b, a));
}

TEST_CASE("silent insertion and closure") {
    Tes s = tes_of({{{"a"}, Rational(1)}}, Rational(2));
    auto ins = insert_silent(s, Rational(3, 2));
    REQUIRE(ins.has_value());
    CHECK(ins->at(Rational(3, 2)) == EventSet{});
    CHECK(ins->at(Rational(1)) == events_of({"a"}));
    CHECK_FALSE(insert_silent(s, Rational(1)).has_value());   // stamp collision
    CHECK_FALSE(insert_silent(s, Rational(3)).has_value());   // beyond horizon

    std::set<Rational> grid{Rational(1), Rational(2)};
    Behavior closed{s, *insert_silent(s, Rational(2))};
    Component c(events_of({"a"}), closed, Rational(2));
    CHECK(closed_under_silent_insertion(c, grid));
    Component open(events_of({"a"}), {s}, Rational(2));
    CHECK_FALSE(closed_under_silent_insertion(open, grid));
}

TEST_CASE("order properties on random components") {
    th::SmallGen gen(7);
    for (int i = 0; i < 100; ++i) {
        Component a = gen.random_component();
        Component b = gen.sub_component(a);
        Component c = gen.sub_component(b);
        CHECK(refines(a, a));
        CHECK(refines(b, a));
        CHECK(refines(c, a));  // transitivity instance
        if (refines(a, b)) CHECK(a == b);  // antisymmetry
        CHECK(contained(a, a));
        CHECK(contained(b, a));
        CHECK(contained(c, a));
    }
}
