#pragma once

#include <random>
#include <string>
#include <vector>

#include "tes/algebra.hpp"
#include "tes/stream.hpp"

namespace th {

using namespace tes;

inline Event ev(const std::string& name) { return Event::named(name); }

inline Tes tes_of(std::vector<std::pair<std::vector<std::string>, Rational>> obs,
                  Rational horizon) {
    std::vector<Observation> v;
    for (auto& [names, t] : obs) {
        EventSet o;
        for (auto& n : names) o.insert(Event::named(n));
        v.push_back(Observation{std::move(o), t});
    }
    return Tes(std::move(v), horizon);
}

inline EventSet events_of(std::initializer_list<std::string> names) {
    EventSet out;
    for (const auto& n : names) out.insert(Event::named(n));
    return out;
}

// Random component generator used by order/law property tests. Observables
// are always nonempty: with explicit silent observations, A ⋈ A can contain
// stamp-merged variants outside L_A, so idempotence is only claimed on
// silent-free witnesses.
struct SmallGen {
    std::mt19937 rng;
    std::vector<std::string> pool{"a", "b", "c"};

    explicit SmallGen(unsigned seed) : rng(seed) {}

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

    EventSet random_interface() {
        EventSet out;
        int n = pick(1, 3);
        for (int i = 0; i < n; ++i) out.insert(Event::named(pool[pick(0, 2)]));
        return out;
    }

    Tes random_tes(const EventSet& interface, Rational horizon) {
        std::vector<Event> events(interface.begin(), interface.end());
        std::vector<Observation> obs;
        for (std::int64_t t = 1; t <= 3; ++t) {
            if (Rational(t) > horizon) break;
            if (pick(0, 1) == 0) continue;
            EventSet o;
            int n = pick(1, static_cast<int>(events.size()));
            for (int i = 0; i < n; ++i) o.insert(events[pick(0, static_cast<int>(events.size()) - 1)]);
            obs.push_back(Observation{std::move(o), Rational(t)});
        }
        return Tes(std::move(obs), horizon);
    }

    Component random_component(Rational horizon = Rational(3)) {
        EventSet interface = random_interface();
        Behavior behavior;
        int n = pick(0, 4);
        for (int i = 0; i < n; ++i) behavior.insert(random_tes(interface, horizon));
        return Component(std::move(interface), std::move(behavior), horizon);
    }

    // A component refining `a`: same interface, a subset of the behavior.
    Component sub_component(const Component& a) {
        Behavior sub;
        for (const auto& t : a.behavior())
            if (pick(0, 1) == 0) sub.insert(t);
        return Component(a.interface(), std::move(sub), a.horizon());
    }
};

}  // namespace th
