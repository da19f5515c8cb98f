#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "tes/event.hpp"
#include "tes/rational.hpp"

namespace tes {

// A pair of an observable (possibly empty event set) and a time stamp.
// (∅, t) is a silent observation.
struct Observation {
    EventSet observable;
    Rational time;

    friend bool operator==(const Observation&, const Observation&) = default;
    friend bool operator<(const Observation& a, const Observation& b) {
        if (a.time != b.time) return a.time < b.time;
        return a.observable < b.observable;
    }
};

// Finite-horizon timed-event stream: observations with strictly increasing
// nonnegative stamps, all within the horizon.
class Tes {
public:
    Tes() = default;
    Tes(std::vector<Observation> obs, Rational horizon)
        : observations_(std::move(obs)), horizon_(horizon) {
        if (!(horizon_ > Rational(0))) throw std::invalid_argument("horizon must be positive");
        Rational prev(-1);
        for (const auto& o : observations_) {
            if (o.time < Rational(0)) throw std::invalid_argument("negative time stamp");
            if (!(prev < o.time)) throw std::invalid_argument("time stamps must strictly increase");
            if (o.time > horizon_) throw std::invalid_argument("time stamp beyond horizon");
            prev = o.time;
        }
    }

    static Tes empty(Rational horizon) { return Tes({}, horizon); }

    const std::vector<Observation>& observations() const { return observations_; }
    Rational horizon() const { return horizon_; }
    std::size_t size() const { return observations_.size(); }

    // dom(σ): the set of observable time stamps.
    std::set<Rational> domain() const {
        std::set<Rational> d;
        for (const auto& o : observations_) d.insert(o.time);
        return d;
    }

    // σ(t): the observable at stamp t, or ∅ when t ∉ dom(σ).
    EventSet at(Rational t) const {
        for (const auto& o : observations_) {
            if (o.time == t) return o.observable;
            if (o.time > t) break;
        }
        return {};
    }

    // All events occurring in some observable.
    EventSet events() const {
        EventSet out;
        for (const auto& o : observations_)
            out.insert(o.observable.begin(), o.observable.end());
        return out;
    }

    friend bool operator==(const Tes& a, const Tes& b) {
        return a.horizon_ == b.horizon_ && a.observations_ == b.observations_;
    }
    friend bool operator<(const Tes& a, const Tes& b) {
        if (a.horizon_ != b.horizon_) return a.horizon_ < b.horizon_;
        return a.observations_ < b.observations_;
    }

private:
    std::vector<Observation> observations_;
    Rational horizon_{1};
};

// σ ≤ τ: same stamps pointwise, each observable of σ a subset of τ's.
bool tes_contained(const Tes& sigma, const Tes& tau);

using Behavior = std::set<Tes>;

// A component (E, L): an interface of events and a finite behavior of TESs
// over E, all sharing the component horizon.
class Component {
public:
    Component() = default;
    Component(EventSet interface, Behavior behavior, Rational horizon)
        : interface_(std::move(interface)), behavior_(std::move(behavior)), horizon_(horizon) {
        if (!(horizon_ > Rational(0))) throw std::invalid_argument("horizon must be positive");
        for (const auto& t : behavior_) {
            if (t.horizon() != horizon_)
                throw std::invalid_argument("behavior element horizon differs from component horizon");
            for (const auto& e : t.events()) {
                if (!interface_.count(e))
                    throw std::invalid_argument("behavior uses event outside the interface: " + event_str(e));
            }
        }
    }

    const EventSet& interface() const { return interface_; }
    const Behavior& behavior() const { return behavior_; }
    Rational horizon() const { return horizon_; }

    friend bool operator==(const Component&, const Component&) = default;

private:
    EventSet interface_;
    Behavior behavior_;
    Rational horizon_{1};
};

// B ⊑ A: interface inclusion and behavior-set inclusion.
bool refines(const Component& b, const Component& a);

// A ≤ B: interface inclusion; every σ:A is pointwise contained in some τ:B.
bool contained(const Component& a, const Component& b);

// Whether every insertion of a silent observation at a grid point between,
// before, or after existing stamps (within horizon) stays in the behavior.
bool closed_under_silent_insertion(const Component& a, const std::set<Rational>& grid);

// The behavior with (∅,t) inserted into sigma, or nullopt when t collides
// with an existing stamp or exceeds the horizon.
std::optional<Tes> insert_silent(const Tes& sigma, Rational t);

}  // namespace tes
