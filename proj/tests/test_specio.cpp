#include <doctest.h>

#include <json.hpp>

#include "helpers.hpp"
#include "tes/specio.hpp"

using namespace tes;
using namespace tes::specio;
using th::events_of;
using th::tes_of;

namespace {

SpecDocument must_parse(const std::string& src) {
    ParseResult r = parse(src);
    if (!r.ok()) {
        for (const auto& d : r.diagnostics) FAIL(diagnostic_str(d));
    }
    REQUIRE(r.ok());
    return *r.document;
}

}  // namespace

TEST_CASE("parsing a minimal component declaration") {
    SpecDocument doc = must_parse(
        "component A {\n"
        "  interface {a, b}\n"
        "  horizon 2\n"
        "  tes { (1: a b), (2: a) }\n"
        "  tes {}\n"
        "}\n");
    REQUIRE(doc.components.size() == 1);
    const Component& a = doc.components[0].component;
    CHECK(doc.components[0].name == "A");
    CHECK(a.interface() == events_of({"a", "b"}));
    CHECK(a.horizon() == Rational(2));
    Behavior expected{tes_of({{{"a", "b"}, Rational(1)}, {{"a"}, Rational(2)}}, Rational(2)),
                      Tes::empty(Rational(2))};
    CHECK(a.behavior() == expected);
}

TEST_CASE("event syntax: arguments, coordinates, position events") {
    SpecDocument doc = must_parse(
        "component A {\n"
        "  interface {N(1,p), read(1,(3;0)), (3;0)_1, move(1,(1;0)), 0}\n"
        "  horizon 1\n"
        "  tes { (1/2: (3;0)_1 N(1,p)) }\n"
        "}\n");
    const Component& a = doc.components[0].component;
    CHECK(a.interface().count(Event::named("N", {std::int64_t{1}, std::string("p")})) == 1);
    CHECK(a.interface().count(Event::named(
              "read", {std::int64_t{1}, Coord{Rational(3), Rational(0)}})) == 1);
    CHECK(a.interface().count(Event::position(Coord{Rational(3), Rational(0)}, 1)) == 1);
    CHECK(a.interface().count(Event::named("0")) == 1);  // digit-named event
    const Tes& s = *a.behavior().begin();
    CHECK(s.at(Rational(1, 2)).size() == 2);

    // Byte adjacency decides whether "(" opens an argument list: with a
    // space, "a (3;0)_1" is two events.
    SpecDocument doc2 = must_parse(
        "component B {\n"
        "  interface {a, (3;0)_1}\n"
        "  horizon 1\n"
        "  tes { (1: a (3;0)_1) }\n"
        "}\n");
    const Tes& s2 = *doc2.components[0].component.behavior().begin();
    CHECK(s2.at(Rational(1)) ==
          EventSet{Event::named("a"), Event::position(Coord{Rational(3), Rational(0)}, 1)});
}

TEST_CASE("numeric atoms: integers, fractions, decimals") {
    SpecDocument doc = must_parse(
        "component A {\n"
        "  interface {f(2), g(2/1), h(0.5), k(-3)}\n"
        "  horizon 3.5\n"
        "}\n");
    const EventSet& e = doc.components[0].component.interface();
    CHECK(e.count(Event::named("f", {std::int64_t{2}})) == 1);
    CHECK(e.count(Event::named("g", {Rational(2)})) == 1);  // kept rational
    CHECK(e.count(Event::named("h", {Rational(1, 2)})) == 1);
    CHECK(e.count(Event::named("k", {std::int64_t{-3}})) == 1);
    CHECK(doc.components[0].component.horizon() == Rational(7, 2));
}

TEST_CASE("universe and query declarations") {
    SpecDocument doc = must_parse(
        "component A { interface {a} horizon 2 }\n"
        "component B { interface {a} horizon 2 }\n"
        "universe U { interface {b} grid 1 .. 2 step 1/2 maxobs 1 }\n"
        "product A B under sync as AB\n"
        "divide A by B under rf(1/2) over U choose theorem1\n"
        "conform A to B under sync over U choose greatest\n"
        "laws sync on {A, B}\n"
        "scenario update horizon 10 period 1\n");
    CHECK(doc.universes.size() == 1);
    CHECK(doc.universes[0].grid_step == Rational(1, 2));
    REQUIRE(doc.queries.size() == 5);
    auto* d = std::get_if<QueryDivide>(&doc.queries[1]);
    REQUIRE(d != nullptr);
    CHECK(d->sig == SigRef{"rf", Rational(1, 2)});
    CHECK(d->choice == Choice::theorem1_lower_bound);
    auto* s = std::get_if<QueryScenario>(&doc.queries[4]);
    REQUIRE(s != nullptr);
    CHECK(s->which == "update");
    CHECK(s->params ==
          std::vector<std::pair<std::string, Rational>>{{"horizon", Rational(10)},
                                                        {"period", Rational(1)}});
}

TEST_CASE("diagnostics carry location and context") {
    ParseResult dup = parse("component A { interface {} horizon 1 }\ncomponent A { interface {} horizon 1 }\n");
    REQUIRE_FALSE(dup.ok());
    CHECK(dup.diagnostics[0].line == 2);
    CHECK(dup.diagnostics[0].message.find("duplicate") != std::string::npos);

    ParseResult unknown = parse("product A B under sync\n");
    REQUIRE_FALSE(unknown.ok());
    CHECK(unknown.diagnostics[0].message.find("unknown component") != std::string::npos);

    // Semantic stream errors are located at the offending declaration.
    ParseResult bad = parse("component A { interface {a} horizon 1 tes { (2: a) } }\n");
    REQUIRE_FALSE(bad.ok());
    CHECK(bad.diagnostics[0].line == 1);

    ParseResult badsig = parse("component A { interface {} horizon 1 }\nlaws magic on {A}\n");
    REQUIRE_FALSE(badsig.ok());
    REQUIRE(badsig.diagnostics[0].hint.has_value());
}

TEST_CASE("serialization round-trips through the parser") {
    std::string src =
        "component A {\n"
        "  interface {N(1,p), a, (3;0)_1, q(1/2)}\n"
        "  horizon 5/2\n"
        "  tes { (1: a), (2: N(1,p) (3;0)_1) }\n"
        "  tes {}\n"
        "}\n"
        "universe U { interface {a} grid 0 .. 2 step 1/2 maxobs 2 }\n"
        "product A A under sync as AA\n"
        "divide A by A under sync over U choose first\n"
        "laws rf(3/2) on {A}\n"
        "scenario sort period 1\n";
    SpecDocument doc = must_parse(src);
    std::string canon = serialize_document(doc);
    SpecDocument doc2 = must_parse(canon);
    CHECK(doc2 == doc);
    // Canonical text is a fixpoint.
    CHECK(serialize_document(doc2) == canon);
}

TEST_CASE("result rendering is canonical") {
    Component empty(events_of({"a"}), {}, Rational(1));
    CHECK(render_component(empty) ==
          "interface: {a}\nhorizon: 1\nbehavior: {}\n");
    Component one(events_of({"a"}), {Tes::empty(Rational(1)), tes_of({{{"a"}, Rational(1)}}, Rational(1))},
                  Rational(1));
    CHECK(render_component(one) ==
          "interface: {a}\n"
          "horizon: 1\n"
          "behavior (2):\n"
          "  tes: <>\n"
          "  tes:\n"
          "    1: {a}\n");
    CHECK(render_tes(Tes::empty(Rational(1))) == "<>\n");
}

TEST_CASE("executing documents: text, json, and exit codes") {
    SpecDocument doc = must_parse(
        "component A { interface {a, b} horizon 1 tes { (1: a b) } }\n"
        "component B { interface {a} horizon 1 tes { (1: a) } }\n"
        "universe U { interface {b} grid 1 .. 1 step 1 maxobs 1 }\n"
        "product A B under sync\n"
        "divide A by B under sync over U choose theorem1\n"
        "laws sync on {A, B}\n");
    ExecOptions opt;
    ExecOutcome out = run_document(doc, opt);
    CHECK(out.exit_code == 0);
    CHECK(out.output.find("== product A B ==") != std::string::npos);
    CHECK(out.output.find("divisible: true") != std::string::npos);
    CHECK(out.output.find("1: {b}") != std::string::npos);
    CHECK(out.output.find("law commutative: pass") != std::string::npos);

    opt.json = true;
    ExecOutcome jout = run_document(doc, opt);
    auto j = nlohmann::json::parse(jout.output);
    CHECK(j["schema"] == 1);
    CHECK(j["results"].size() == 3);
    CHECK(j["results"][1]["quotients"] == 1);

    // Indivisible query: exit code 1 with a diagnostic.
    SpecDocument bad = must_parse(
        "component A { interface {a, b} horizon 1 tes { (1: a b) } }\n"
        "component B { interface {a} horizon 1 tes {} }\n"
        "universe U { interface {b} grid 1 .. 1 step 1 maxobs 1 }\n"
        "divide A by B under sync over U choose theorem1\n");
    ExecOutcome bout = run_document(bad, ExecOptions{});
    CHECK(bout.exit_code == 1);
    REQUIRE_FALSE(bout.diagnostics.empty());

    // Oversized universe: exit code 2 with a hint naming the flag.
    SpecDocument big = must_parse(
        "component A { interface {a, b} horizon 1 tes { (1: a b) } }\n"
        "component B { interface {a} horizon 1 tes { (1: a) } }\n"
        "universe U { interface {b} grid 1 .. 1 step 1 maxobs 1 }\n"
        "divide A by B under sync over U choose theorem1\n");
    ExecOptions tight;
    tight.max_universe = 2;
    ExecOutcome tout = run_document(big, tight);
    CHECK(tout.exit_code == 2);
    REQUIRE_FALSE(tout.diagnostics.empty());
    REQUIRE(tout.diagnostics[0].hint.has_value());
    CHECK(tout.diagnostics[0].hint->find("--max-universe") != std::string::npos);
}

TEST_CASE("round-trip holds on randomly generated documents") {
    th::SmallGen gen(23);
    for (int i = 0; i < 50; ++i) {
        SpecDocument doc;
        int nc = gen.pick(1, 3);
        for (int c = 0; c < nc; ++c)
            doc.components.push_back(ComponentDecl{"c" + std::to_string(c),
                                                   gen.random_component()});
        UniverseDecl u;
        u.name = "u0";
        u.interface = events_of({"b"});
        u.grid_lo = Rational(1);
        u.grid_hi = Rational(2);
        u.grid_step = Rational(1, gen.pick(1, 3));
        u.max_obs = static_cast<std::size_t>(gen.pick(0, 2));
        doc.universes.push_back(u);
        doc.queries.push_back(QueryProduct{"c0", "c0", SigRef{"sync", Rational(1)},
                                           std::nullopt});
        doc.queries.push_back(QueryDivide{"c0", "c0", SigRef{"rf", Rational(gen.pick(1, 3))},
                                          "u0", Choice::cost_ranked});
        SpecDocument again = must_parse(serialize_document(doc));
        CHECK(again == doc);
    }
}
