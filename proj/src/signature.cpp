#include "tes/signature.hpp"

#include <algorithm>
#include <stdexcept>

namespace tes {

namespace {

EventSet intersect(const EventSet& a, const EventSet& b) {
    EventSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::inserter(out, out.begin()));
    return out;
}

std::set<Rational> domain_union(const Tes& sigma, const Tes& tau) {
    auto d = sigma.domain();
    auto d2 = tau.domain();
    d.insert(d2.begin(), d2.end());
    return d;
}

}  // namespace

bool sync_composable(const Tes& sigma, const Tes& tau, const EventSet& e1, const EventSet& e2) {
    for (const auto& t : domain_union(sigma, tau)) {
        if (intersect(sigma.at(t), e2) != intersect(tau.at(t), e1)) return false;
    }
    return true;
}

Tes union_compose(const Tes& sigma, const Tes& tau) {
    if (sigma.horizon() != tau.horizon())
        throw std::invalid_argument("union_compose: horizon mismatch");
    std::vector<Observation> out;
    for (const auto& t : domain_union(sigma, tau)) {
        EventSet o = sigma.at(t);
        EventSet o2 = tau.at(t);
        o.insert(o2.begin(), o2.end());
        out.push_back(Observation{std::move(o), t});
    }
    return Tes(std::move(out), sigma.horizon());
}

Coord velocity_of(const std::string& direction, const Rational& power, const Rational& period) {
    if (!(period > Rational(0))) throw std::invalid_argument("period must be positive");
    if (power == Rational(0)) return Coord{Rational(0), Rational(0)};
    Rational u = Rational(1) / period;
    if (direction == "N") return Coord{Rational(0), u};
    if (direction == "S") return Coord{Rational(0), -u};
    if (direction == "W") return Coord{-u, Rational(0)};
    if (direction == "E") return Coord{u, Rational(0)};
    throw std::invalid_argument("unknown direction: " + direction);
}

namespace {

bool is_direction_name(const std::string& n) {
    return n == "N" || n == "S" || n == "W" || n == "E";
}

bool robot_shaped(const EventSet& e) {
    bool has_robot_event = false;
    for (const auto& ev : e) {
        if (ev.is_position()) return false;
        if (ev.name() == "move") return false;
        if (ev.name() == "read" || is_direction_name(ev.name())) has_robot_event = true;
    }
    return has_robot_event;
}

bool interface_has_positions_of(const EventSet& e, std::int64_t id) {
    for (const auto& ev : e)
        if (ev.is_position() && ev.object_id() == id) return true;
    return false;
}

bool interface_has_directions_of(const EventSet& e, std::int64_t id) {
    for (const auto& ev : e) {
        if (ev.is_position() || !is_direction_name(ev.name())) continue;
        if (ev.args().empty()) continue;
        if (auto* i = std::get_if<std::int64_t>(&ev.args()[0]); i && *i == id) return true;
    }
    return false;
}

// One orientation of R_RF: reads must match a displayed position via floor,
// moves and direction events are pairwise synchronous. Positions alone do
// not force reads. Each requirement binds only when the opposite interface
// can express the counterpart event; the relation constrains observables
// relative to the interface pair, so events outside the partner's alphabet
// are unconstrained.
bool rf_check(const Tes& robot, const Tes& field, const EventSet& er, const EventSet& ef,
              const Rational& period) {
    for (const auto& t : domain_union(robot, field)) {
        EventSet ro = robot.at(t);
        EventSet fo = field.at(t);
        for (const auto& ev : ro) {
            if (ev.is_position()) continue;
            if (ev.name() == "read") {
                if (ev.args().size() != 2) return false;
                auto* id = std::get_if<std::int64_t>(&ev.args()[0]);
                auto* c = std::get_if<Coord>(&ev.args()[1]);
                if (!id || !c) return false;
                if (!interface_has_positions_of(ef, *id)) continue;
                bool matched = false;
                for (const auto& fe : fo) {
                    if (fe.is_position() && fe.object_id() == *id &&
                        Rational(fe.coord().x.floor()) == c->x &&
                        Rational(fe.coord().y.floor()) == c->y) {
                        matched = true;
                        break;
                    }
                }
                if (!matched) return false;
            } else if (is_direction_name(ev.name())) {
                if (ev.args().size() != 2) return false;
                auto* id = std::get_if<std::int64_t>(&ev.args()[0]);
                if (!id) return false;
                Rational p(1);
                if (auto* pr = std::get_if<Rational>(&ev.args()[1])) p = *pr;
                else if (auto* pi = std::get_if<std::int64_t>(&ev.args()[1])) p = Rational(*pi);
                Coord v = velocity_of(ev.name(), p, period);
                Event mv = Event::named("move", {*id, v});
                if (!ef.count(mv)) continue;
                if (!fo.count(mv)) return false;
            }
        }
        // Every move on the field side must pair with a direction event,
        // provided the robot side speaks for that object at all.
        for (const auto& fe : fo) {
            if (fe.is_position() || fe.name() != "move") continue;
            if (fe.args().size() != 2) return false;
            auto* id = std::get_if<std::int64_t>(&fe.args()[0]);
            auto* v = std::get_if<Coord>(&fe.args()[1]);
            if (!id || !v) return false;
            if (!interface_has_directions_of(er, *id)) continue;
            bool matched = false;
            for (const auto& ev : ro) {
                if (ev.is_position() || !is_direction_name(ev.name())) continue;
                if (ev.args().size() != 2) continue;
                auto* rid = std::get_if<std::int64_t>(&ev.args()[0]);
                if (!rid || *rid != *id) continue;
                Rational p(1);
                if (auto* pr = std::get_if<Rational>(&ev.args()[1])) p = *pr;
                else if (auto* pi = std::get_if<std::int64_t>(&ev.args()[1])) p = Rational(*pi);
                if (velocity_of(ev.name(), p, period) == *v) { matched = true; break; }
            }
            if (!matched) return false;
        }
    }
    return true;
}

}  // namespace

bool rf_composable(const Tes& a, const Tes& b, const EventSet& ea, const EventSet& eb,
                   const Rational& period) {
    // Smallest symmetric relation: orient by event shape.
    if (robot_shaped(ea) && !robot_shaped(eb)) return rf_check(a, b, ea, eb, period);
    if (robot_shaped(eb) && !robot_shaped(ea)) return rf_check(b, a, eb, ea, period);
    return rf_check(a, b, ea, eb, period) || rf_check(b, a, eb, ea, period);
}

InteractionSignature sync_signature() {
    return InteractionSignature{
        "sync",
        [](const Tes& s, const Tes& t, const EventSet& e1, const EventSet& e2) {
            return sync_composable(s, t, e1, e2);
        },
        [](const Tes& s, const Tes& t) { return union_compose(s, t); }};
}

InteractionSignature rf_signature(const Rational& period) {
    return InteractionSignature{
        "rf",
        [period](const Tes& s, const Tes& t, const EventSet& e1, const EventSet& e2) {
            return rf_composable(s, t, e1, e2, period);
        },
        [](const Tes& s, const Tes& t) { return union_compose(s, t); }};
}

InteractionSignature pointwise_signature(
    std::string name,
    std::function<bool(const EventSet&, const EventSet&, const EventSet&, const EventSet&)> ok,
    std::function<EventSet(const EventSet&, const EventSet&)> merge) {
    return InteractionSignature{
        std::move(name),
        [ok](const Tes& s, const Tes& t, const EventSet& e1, const EventSet& e2) {
            for (const auto& stamp : s.domain()) {
                if (!ok(s.at(stamp), t.at(stamp), e1, e2)) return false;
            }
            for (const auto& stamp : t.domain()) {
                if (!ok(s.at(stamp), t.at(stamp), e1, e2)) return false;
            }
            return true;
        },
        [merge](const Tes& s, const Tes& t) {
            if (s.horizon() != t.horizon())
                throw std::invalid_argument("compose: horizon mismatch");
            std::set<Rational> dom = s.domain();
            auto d2 = t.domain();
            dom.insert(d2.begin(), d2.end());
            std::vector<Observation> out;
            for (const auto& stamp : dom)
                out.push_back(Observation{merge(s.at(stamp), t.at(stamp)), stamp});
            return Tes(std::move(out), s.horizon());
        }};
}

}  // namespace tes
