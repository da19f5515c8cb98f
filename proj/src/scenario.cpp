#include "tes/scenario.hpp"

#include <algorithm>
#include <functional>

#include "tes/algebra.hpp"
#include "tes/signature.hpp"

namespace tes::scenario {

namespace {

Event direction_event(const std::string& d, std::int64_t id, const Rational& power) {
    return Event::named(d, {id, power});
}

Event read_event(std::int64_t id, std::int64_t x, std::int64_t y) {
    return Event::named("read", {id, Coord{Rational(x), Rational(y)}});
}

const std::vector<std::string>& direction_names() {
    static const std::vector<std::string> names{"N", "S", "W", "E"};
    return names;
}

std::int64_t step_count(const Rational& horizon, const Rational& period) {
    // Largest k with k * period <= horizon.
    Rational q = horizon / period;
    std::int64_t k = q.floor();
    return k < 0 ? 0 : k;
}

}  // namespace

EventSet robot_interface(const RobotSpec& spec) {
    EventSet e;
    for (const auto& d : direction_names()) e.insert(direction_event(d, spec.id, spec.move_power));
    if (spec.reads_enabled) {
        for (std::int64_t x = spec.min_x; x <= spec.max_x; ++x)
            for (std::int64_t y = spec.min_y; y <= spec.max_y; ++y)
                e.insert(read_event(spec.id, x, y));
    }
    return e;
}

Component gen_robot(const RobotSpec& spec) {
    if (!(spec.period > Rational(0))) throw std::invalid_argument("gen_robot: period must be positive");
    std::vector<Event> moves;
    for (const auto& d : direction_names()) moves.push_back(direction_event(d, spec.id, spec.move_power));
    std::vector<Event> reads;
    if (spec.reads_enabled) {
        for (std::int64_t x = spec.min_x; x <= spec.max_x; ++x)
            for (std::int64_t y = spec.min_y; y <= spec.max_y; ++y)
                reads.push_back(read_event(spec.id, x, y));
    }

    std::int64_t steps = step_count(spec.horizon, spec.period);
    Behavior out;
    std::vector<Observation> prefix;

    // state: number of actions so far and whether the trailing action was a
    // read (relevant to moves_then_read, which admits at most one final read).
    std::function<void(std::int64_t, std::size_t, bool)> rec = [&](std::int64_t k,
                                                                   std::size_t actions,
                                                                   bool read_taken) {
        if (k > steps) {
            out.insert(Tes(prefix, spec.horizon));
            if (out.size() > spec.max_behavior)
                throw BehaviorBoundExceeded("gen_robot: behavior exceeds bound");
            return;
        }
        Rational t = Rational(k) * spec.period;
        // Stay silent at this stamp.
        rec(k + 1, actions, read_taken);

        bool move_legal = true, read_legal = true;
        switch (spec.alternation) {
            case Alternation::free:
                break;
            case Alternation::move_read_alternating:
                read_legal = actions % 2 == 0;
                move_legal = actions % 2 == 1;
                break;
            case Alternation::moves_then_read:
                move_legal = !read_taken;
                read_legal = !read_taken;
                break;
        }
        if (move_legal) {
            for (const auto& m : moves) {
                prefix.push_back(Observation{{m}, t});
                rec(k + 1, actions + 1, false);
                prefix.pop_back();
            }
        }
        if (read_legal) {
            for (const auto& r : reads) {
                prefix.push_back(Observation{{r}, t});
                rec(k + 1, actions + 1, true);
                prefix.pop_back();
            }
        }
    };
    rec(1, 0, false);
    return Component(robot_interface(spec), std::move(out), spec.horizon);
}

Component strategy_component(const RobotSpec& spec, const std::vector<Action>& word,
                             const std::vector<std::int64_t>& start_offsets) {
    std::int64_t steps = step_count(spec.horizon, spec.period);
    Behavior out;
    for (std::int64_t o : start_offsets) {
        if (o < 0 || o + static_cast<std::int64_t>(word.size()) - 1 > steps)
            throw std::invalid_argument("strategy_component: word does not fit at offset");
        std::vector<Observation> obs;
        for (std::size_t j = 0; j < word.size(); ++j) {
            Rational t = Rational(o + static_cast<std::int64_t>(j)) * spec.period;
            Event e = word[j].read_coord
                          ? Event::named("read", {spec.id, *word[j].read_coord})
                          : direction_event(word[j].direction, spec.id, spec.move_power);
            obs.push_back(Observation{{e}, t});
        }
        out.insert(Tes(std::move(obs), spec.horizon));
    }
    return Component(robot_interface(spec), std::move(out), spec.horizon);
}

EventSet grid_interface(const FieldSpec& spec) {
    EventSet e;
    for (std::int64_t id : spec.objects) {
        for (std::int64_t x = spec.min_x; x <= spec.max_x; ++x)
            for (std::int64_t y = spec.min_y; y <= spec.max_y; ++y)
                e.insert(Event::position(Coord{Rational(x), Rational(y)}, id));
        for (const auto& d : direction_names())
            e.insert(Event::named("move", {id, velocity_of(d, spec.move_power, spec.period)}));
    }
    return e;
}

namespace {

struct Move {
    std::int64_t id;
    std::string direction;
    Rational power;
};

// Resolve one stamp of simultaneous moves over current positions. Vacating
// chains succeed; blocked chains and cycles fail in place. Two movers
// targeting the same cell reject the whole schedule (returns false).
bool resolve_moves(const FieldSpec& spec, std::map<std::int64_t, Cell>& pos,
                   const std::vector<Move>& moves) {
    struct Pending {
        std::int64_t id;
        Cell target;
        bool resolved = false;
        bool success = false;
    };
    std::vector<Pending> pending;
    std::set<Cell> targets;
    for (const auto& m : moves) {
        Coord v = velocity_of(m.direction, m.power, spec.period);
        Rational dx = v.x * spec.period, dy = v.y * spec.period;
        if (!dx.is_integer() || !dy.is_integer()) return false;
        Cell from = pos.at(m.id);
        Cell to{from.first + dx.floor(), from.second + dy.floor()};
        if (to == from) continue;  // zero power: stays put, no conflict
        if (!targets.insert(to).second) return false;  // same-target collision
        bool in_bounds = to.first >= spec.min_x && to.first <= spec.max_x &&
                         to.second >= spec.min_y && to.second <= spec.max_y &&
                         !spec.obstacles.count(to);
        pending.push_back(Pending{m.id, to, !in_bounds, false});
    }
    auto occupant = [&](const Cell& c) -> std::optional<std::int64_t> {
        for (const auto& [id, p] : pos)
            if (p == c) return id;
        return std::nullopt;
    };
    bool progress = true;
    while (progress) {
        progress = false;
        for (auto& p : pending) {
            if (p.resolved) continue;
            auto occ = occupant(p.target);
            if (!occ) {
                p.resolved = p.success = true;
            } else {
                auto it = std::find_if(pending.begin(), pending.end(),
                                       [&](const Pending& q) { return q.id == *occ; });
                if (it == pending.end() || (it->resolved && !it->success)) {
                    p.resolved = true;  // blocked by a stayer or a failed mover
                } else if (it->resolved && it->success) {
                    p.resolved = p.success = true;  // occupant vacates
                } else {
                    continue;  // occupant still unresolved
                }
            }
            progress = true;
        }
    }
    // Unresolved movers form cycles: everyone in the cycle stays.
    for (const auto& p : pending)
        if (p.success) pos[p.id] = p.target;
    return true;
}

}  // namespace

Component gen_grid(const FieldSpec& spec, const Component& drivers) {
    std::int64_t steps = step_count(spec.horizon, spec.period);
    Behavior out;
    for (const Tes& sigma : drivers.behavior()) {
        // Collect the move schedule; skip drivers with off-grid stamps.
        std::map<std::int64_t, std::vector<Move>> schedule;
        bool ok = true;
        for (const auto& o : sigma.observations()) {
            Rational q = o.time / spec.period;
            bool has_move = false;
            std::vector<Move> at;
            for (const auto& ev : o.observable) {
                if (ev.is_position()) continue;
                const std::string& n = ev.name();
                if (n != "N" && n != "S" && n != "W" && n != "E") continue;
                has_move = true;
                if (ev.args().size() != 2) { ok = false; break; }
                auto* id = std::get_if<std::int64_t>(&ev.args()[0]);
                if (!id) { ok = false; break; }
                Rational p(1);
                if (auto* pr = std::get_if<Rational>(&ev.args()[1])) p = *pr;
                else if (auto* pi = std::get_if<std::int64_t>(&ev.args()[1])) p = Rational(*pi);
                at.push_back(Move{*id, n, p});
            }
            if (!ok) break;
            if (has_move) {
                if (!q.is_integer()) { ok = false; break; }
                auto& dst = schedule[q.floor()];
                dst.insert(dst.end(), at.begin(), at.end());
            }
        }
        if (!ok) continue;

        std::map<std::int64_t, Cell> pos = spec.initial;
        std::vector<Observation> obs;
        bool rejected = false;
        for (std::int64_t k = 0; k <= steps; ++k) {
            EventSet display;
            for (const auto& [id, c] : pos)
                display.insert(Event::position(Coord{Rational(c.first), Rational(c.second)}, id));
            auto it = schedule.find(k);
            if (it != schedule.end()) {
                for (const auto& m : it->second)
                    display.insert(Event::named(
                        "move", {m.id, velocity_of(m.direction, m.power, spec.period)}));
                if (!resolve_moves(spec, pos, it->second)) { rejected = true; break; }
            }
            obs.push_back(Observation{std::move(display), Rational(k) * spec.period});
        }
        if (!rejected) out.insert(Tes(std::move(obs), spec.horizon));
    }
    return Component(grid_interface(spec), std::move(out), spec.horizon);
}

Component gen_swap(std::int64_t i, std::int64_t j, const Atom& power, const Rational& period,
                   const Rational& horizon) {
    EventSet e;
    for (const auto& d : direction_names()) {
        e.insert(Event::named(d, {i, power}));
        e.insert(Event::named(d, {j, power}));
    }
    std::int64_t steps = step_count(horizon, period);
    Behavior out;
    for (std::int64_t k1 = 1; k1 <= steps; ++k1)
        for (std::int64_t k2 = k1 + 1; k2 <= steps; ++k2)
            for (std::int64_t k3 = k2 + 1; k3 <= steps; ++k3) {
                std::vector<Observation> obs{
                    Observation{{Event::named("N", {i, power})}, Rational(k1) * period},
                    Observation{{Event::named("W", {i, power}), Event::named("E", {j, power})},
                                Rational(k2) * period},
                    Observation{{Event::named("S", {i, power})}, Rational(k3) * period},
                };
                out.insert(Tes(std::move(obs), horizon));
            }
    return Component(std::move(e), std::move(out), horizon);
}

Tes project(const Tes& sigma, const EventSet& events) {
    std::vector<Observation> obs;
    for (const auto& o : sigma.observations()) {
        EventSet keep;
        for (const auto& ev : o.observable)
            if (events.count(ev)) keep.insert(ev);
        if (!keep.empty()) obs.push_back(Observation{std::move(keep), o.time});
    }
    return Tes(std::move(obs), sigma.horizon());
}

std::vector<Tes> projection_pool(const Component& c, const EventSet& events) {
    Behavior seen;
    for (const auto& sigma : c.behavior()) seen.insert(project(sigma, events));
    return {seen.begin(), seen.end()};
}

Component sorted_property(const std::vector<std::int64_t>& ids, const Component& universe) {
    Behavior out;
    for (const auto& sigma : universe.behavior()) {
        bool hit = false;
        for (const auto& o : sigma.observations()) {
            bool all = true;
            for (std::int64_t id : ids) {
                if (!o.observable.count(Event::position(Coord{Rational(id), Rational(0)}, id))) {
                    all = false;
                    break;
                }
            }
            if (all) { hit = true; break; }
        }
        if (hit) out.insert(sigma);
    }
    return Component(universe.interface(), std::move(out), universe.horizon());
}

namespace {

Component merge_behaviors(const Component& a, const Component& b) {
    Behavior l = a.behavior();
    l.insert(b.behavior().begin(), b.behavior().end());
    return Component(a.interface(), std::move(l), a.horizon());
}

Action mv(std::string d) { return Action{std::move(d), std::nullopt}; }
Action rd(std::int64_t x, std::int64_t y) { return Action{"", Coord{Rational(x), Rational(y)}}; }

}  // namespace

CaseReport run_case_grid_division() {
    CaseReport report;
    report.name = "grid-division";
    Rational h(2);
    Event p1 = Event::position(Coord{Rational(1), Rational(0)}, 1);
    Event p32 = Event::position(Coord{Rational(3, 2), Rational(0)}, 1);
    Event p2 = Event::position(Coord{Rational(2), Rational(0)}, 1);
    Event mv_e = Event::named("move", {std::int64_t{1}, Coord{Rational(1), Rational(0)}});
    EventSet ef{p1, p32, p2, mv_e};
    EventSet eg{p1, p2, mv_e};

    // The field observed at sample stamps {1, 3/2, 2}: either the object
    // stays at (1;0), or an eastward move at stamp 1 carries it through
    // (3/2;0) to (2;0). Every subset of the sample stamps may be reported.
    std::vector<Rational> stamps{Rational(1), Rational(3, 2), Rational(2)};
    Behavior field;
    for (int moved = 0; moved < 2; ++moved) {
        std::map<Rational, Event> at;
        at[Rational(1)] = p1;
        at[Rational(3, 2)] = moved ? p32 : p1;
        at[Rational(2)] = moved ? p2 : p1;
        for (unsigned mask = 0; mask < 8; ++mask) {
            std::map<Rational, EventSet> obs;
            for (std::size_t i = 0; i < stamps.size(); ++i)
                if (mask & (1u << i)) obs[stamps[i]].insert(at.at(stamps[i]));
            if (moved) obs[Rational(1)].insert(mv_e);
            std::vector<Observation> v;
            for (auto& [t, o] : obs) v.push_back(Observation{std::move(o), t});
            field.insert(Tes(std::move(v), h));
        }
    }
    Component f(ef, field, h);

    std::vector<Tes> pool = projection_pool(f, eg);
    std::size_t honest = pool.size();
    Tes junk({Observation{{p2}, Rational(1)}}, h);  // claims motion that never happened
    pool.push_back(junk);

    CandidateUniverse u;
    u.interface = eg;
    u.horizon = h;
    u.explicit_pool = pool;

    QuotientQuery q{f, f, sync_signature(), u, Side::commutative, 1000000, 20};
    auto res = enumerate_quotients(q);
    report.checks.push_back({"division-succeeds", res.divisible && !res.quotients.empty()});
    bool checks_ok = res.divisible && !res.quotients.empty();
    if (checks_ok) {
        Component g = divide(q, Choice::theorem1_lower_bound);
        report.checks.push_back({"grid-below-field", contained(g, f)});
        report.checks.push_back({"responses-nonempty", !g.behavior().empty()});
        report.checks.push_back(
            {"untruthful-response-excluded",
             !g.behavior().count(junk) && g.behavior().size() < pool.size()});
        bool no_frac = true;
        for (const auto& sigma : g.behavior())
            if (sigma.events().count(p32)) no_frac = false;
        report.checks.push_back({"integer-positions-only", no_frac});
        report.checks.push_back({"product-recovers-field", product(g, f, sync_signature()) == f});
        report.details = "pool=" + std::to_string(pool.size()) +
                         " honest=" + std::to_string(honest) +
                         " response-behavior=" + std::to_string(g.behavior().size()) +
                         " quotients=" + std::to_string(res.quotients.size());
    }
    return report;
}

CaseReport run_case_update(Rational period, Rational horizon) {
    CaseReport report;
    report.name = "update";
    RobotSpec s1{1, period, Rational(1), Rational(1), horizon, 1, 3, 0, 1, true,
                 Alternation::move_read_alternating};
    RobotSpec s2{2, period, Rational(1), Rational(1), horizon, 1, 3, 0, 1, true,
                 Alternation::move_read_alternating};
    RobotSpec s3{3, period, Rational(1), Rational(1), horizon, 1, 3, 0, 1, true,
                 Alternation::move_read_alternating};

    // Rotation strategies: each robot alternates truthful reads with moves
    // that walk the column (3;0),(2;0),(1;0) around the free 3x2 block.
    std::vector<Action> sigma{rd(3, 0), mv("N"), rd(3, 1), mv("W"), rd(2, 1),
                              mv("W"), rd(1, 1), mv("S"), rd(1, 0)};
    // A strategy that pushes west along the bottom row and reports the cells
    // it hoped to reach. Under every joint schedule either a neighbour still
    // occupies the target (blocked, so a read lies) or two objects aim at
    // the same cell (the field rejects the schedule), so no field response
    // composes with it.
    std::vector<Action> eta{rd(3, 0), mv("W"), rd(2, 0), mv("W"), rd(1, 0)};
    std::vector<Action> tau{rd(2, 0), mv("N"), rd(2, 1), mv("W"), rd(1, 1),
                            mv("S"), rd(1, 0), mv("E"), rd(2, 0)};
    std::vector<Action> delta{rd(1, 0), mv("E"), rd(2, 0), mv("E"), rd(3, 0)};

    std::vector<std::int64_t> offsets{1, 2};
    Component r1 = merge_behaviors(strategy_component(s1, sigma, offsets),
                                   strategy_component(s1, eta, offsets));
    Component r2 = strategy_component(s2, tau, offsets);
    Component r3 = strategy_component(s3, delta, offsets);
    Component good1 = strategy_component(s1, sigma, offsets);

    Component rc = product(product(r1, r2, sync_signature()), r3, sync_signature());
    FieldSpec fs{{1, 2, 3},
                 {{1, {3, 0}}, {2, {2, 0}}, {3, {1, 0}}},
                 1, 3, 0, 1,
                 {},
                 period,
                 horizon,
                 Rational(1)};
    Component grid = gen_grid(fs, rc);
    InteractionSignature rf = rf_signature(period);
    Component plant = product(rc, grid, rf);

    CandidateUniverse u;
    u.interface = r1.interface();
    u.horizon = horizon;
    u.explicit_pool = std::vector<Tes>(r1.behavior().begin(), r1.behavior().end());

    QuotientQuery q{plant, plant, rf, u, Side::commutative, 1000000, 20};
    auto res = enumerate_quotients(q);
    report.checks.push_back({"plant-nonempty", !plant.behavior().empty()});
    report.checks.push_back({"divisible", res.divisible});
    if (res.divisible) {
        Component refined = divide(q, Choice::theorem1_lower_bound);
        bool kept = true;
        for (const auto& t : good1.behavior()) kept = kept && refined.behavior().count(t) > 0;
        report.checks.push_back({"rotation-strategies-kept", kept});
        bool dropped = true;
        Component bad1 = strategy_component(s1, eta, offsets);
        for (const auto& t : bad1.behavior()) dropped = dropped && !refined.behavior().count(t);
        report.checks.push_back({"off-grid-strategy-dropped", dropped});
        report.checks.push_back(
            {"quotient-recovers-plant", product(plant, refined, rf) == plant});
        Component rc2 = product(product(refined, r2, sync_signature()), r3, sync_signature());
        report.checks.push_back(
            {"substitution-preserves-plant", product(rc2, grid, rf) == plant});
        report.details = "plant=" + std::to_string(plant.behavior().size()) +
                         " refined=" + std::to_string(refined.behavior().size()) + "/" +
                         std::to_string(r1.behavior().size()) +
                         " vacuous=" + std::to_string(res.vacuous_count);
    }
    return report;
}

CaseReport run_case_sort(Rational period, Rational horizon) {
    CaseReport report;
    report.name = "sort";
    RobotSpec s1{1, period, Rational(1), Rational(1), horizon, 1, 3, 0, 1, false,
                 Alternation::moves_then_read};
    RobotSpec s2{2, period, Rational(1), Rational(1), horizon, 1, 3, 0, 1, false,
                 Alternation::moves_then_read};
    RobotSpec s3{3, period, Rational(1), Rational(1), horizon, 1, 3, 0, 1, false,
                 Alternation::moves_then_read};

    Component r1 = strategy_component(s1, {mv("N"), mv("W"), mv("W"), mv("S")}, {1, 2});
    Component r2 = strategy_component(s2, {mv("N"), mv("W"), mv("S"), mv("E")}, {1, 2, 3});
    Component r3 = strategy_component(s3, {mv("E"), mv("E")}, {1});

    Component rc = product(product(r1, r2, sync_signature()), r3, sync_signature());
    FieldSpec fs{{1, 2, 3},
                 {{1, {3, 0}}, {2, {2, 0}}, {3, {1, 0}}},
                 1, 3, 0, 1,
                 {},
                 period,
                 horizon,
                 Rational(1)};
    Component grid = gen_grid(fs, rc);
    InteractionSignature rf = rf_signature(period);
    InteractionSignature sync = sync_signature();
    Component plant = product(rc, grid, rf);
    Component sorted = sorted_property({1, 2, 3}, plant);

    report.checks.push_back({"plant-nonempty", !plant.behavior().empty()});
    report.checks.push_back(
        {"property-proper-subset",
         !sorted.behavior().empty() && sorted.behavior().size() < plant.behavior().size()});

    // No coordinator exists over robot 1 alone: its timing cannot separate
    // sorted runs from unsorted ones.
    CandidateUniverse u1;
    u1.interface = r1.interface();
    u1.horizon = horizon;
    u1.explicit_pool = projection_pool(plant, r1.interface());
    ConformanceQuery c1{sorted, plant, sync, u1, Side::commutative, 1000000, 20};
    auto res1 = enumerate_coordinators(c1);
    report.checks.push_back(
        {"no-coordinator-over-single-robot", !res1.greatest && res1.coordinators.empty()});

    // Adding one observation of robot 2 (its first move) is enough.
    EventSet e12 = r1.interface();
    e12.insert(Event::named("N", {std::int64_t{2}, Rational(1)}));
    CandidateUniverse u12;
    u12.interface = e12;
    u12.horizon = horizon;
    u12.explicit_pool = projection_pool(plant, e12);
    ConformanceQuery c2{sorted, plant, sync, u12, Side::commutative, 1000000, 20};
    auto res2 = enumerate_coordinators(c2);
    report.checks.push_back(
        {"coordinator-over-extended-interface", res2.greatest.has_value()});

    // The protocol "robot 1 starts strictly after robot 2": keep only pool
    // elements where every N(1,.) stamp follows every N(2,.) stamp.
    Behavior protocol;
    for (const auto& sigma : *u12.explicit_pool) {
        std::optional<Rational> first1, last2;
        for (const auto& o : sigma.observations()) {
            for (const auto& ev : o.observable) {
                if (ev.is_position() || ev.name() != "N" || ev.args().empty()) continue;
                auto* id = std::get_if<std::int64_t>(&ev.args()[0]);
                if (!id) continue;
                if (*id == 1 && !first1) first1 = o.time;
                if (*id == 2) last2 = o.time;
            }
        }
        if (first1 && last2 && *last2 < *first1) protocol.insert(sigma);
    }
    Component c12(e12, protocol, horizon);
    bool sound12 = !protocol.empty();
    if (res2.greatest) {
        for (const auto& sigma : protocol)
            sound12 = sound12 && res2.greatest->behavior().count(sigma) > 0;
    }
    report.checks.push_back({"protocol-inside-greatest", sound12});

    Component coordinated = product(plant, c12, sync);
    report.checks.push_back({"protocol-coordinates",
                             !coordinated.behavior().empty() && refines(coordinated, sorted)});

    bool terminal = false;
    for (const auto& sigma : coordinated.behavior()) {
        for (const auto& o : sigma.observations()) {
            bool all = true;
            for (std::int64_t id : {1, 2, 3})
                all = all && o.observable.count(
                                 Event::position(Coord{Rational(id), Rational(0)}, id)) > 0;
            if (all) terminal = true;
        }
    }
    report.checks.push_back({"sorted-positions-displayed", terminal});
    report.details = "plant=" + std::to_string(plant.behavior().size()) +
                     " sorted=" + std::to_string(sorted.behavior().size()) +
                     " coordinators-over-extension=" + std::to_string(res2.coordinators.size());
    return report;
}

}  // namespace tes::scenario
