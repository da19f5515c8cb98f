#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tes/rational.hpp"

namespace tes {

// Coordinate pair (x;y) with exact rational components.
struct Coord {
    Rational x;
    Rational y;

    friend bool operator==(const Coord&, const Coord&) = default;
    friend bool operator<(const Coord& a, const Coord& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    }
};

// An argument of an event term: integer, rational, identifier, or coordinate.
using Atom = std::variant<std::int64_t, Rational, std::string, Coord>;

inline bool atom_less(const Atom& a, const Atom& b) {
    if (a.index() != b.index()) return a.index() < b.index();
    return std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            return x < std::get<T>(b);
        },
        a);
}

// An observable action. Two shapes exist: a named term like N(1,p) or
// read(1,(3;0)), and a position event (x;y)_i displaying the location of
// object i. Events are totally ordered so event sets have a canonical
// serialization.
class Event {
public:
    static Event named(std::string name, std::vector<Atom> args = {}) {
        Event e;
        e.position_ = false;
        e.name_ = std::move(name);
        e.args_ = std::move(args);
        return e;
    }

    static Event position(Coord c, std::int64_t object_id) {
        Event e;
        e.position_ = true;
        e.coord_ = c;
        e.object_id_ = object_id;
        return e;
    }

    bool is_position() const { return position_; }
    const std::string& name() const { return name_; }
    const std::vector<Atom>& args() const { return args_; }
    const Coord& coord() const { return coord_; }
    std::int64_t object_id() const { return object_id_; }

    friend bool operator==(const Event& a, const Event& b) {
        if (a.position_ != b.position_) return false;
        if (a.position_) return a.coord_ == b.coord_ && a.object_id_ == b.object_id_;
        return a.name_ == b.name_ && a.args_ == b.args_;
    }
    friend bool operator!=(const Event& a, const Event& b) { return !(a == b); }

    // Named events sort before position events; within a shape the order is
    // lexicographic on (name, args) resp. (id, coord).
    friend bool operator<(const Event& a, const Event& b) {
        if (a.position_ != b.position_) return !a.position_;
        if (a.position_) {
            if (a.object_id_ != b.object_id_) return a.object_id_ < b.object_id_;
            return a.coord_ < b.coord_;
        }
        if (a.name_ != b.name_) return a.name_ < b.name_;
        if (a.args_.size() != b.args_.size()) return a.args_.size() < b.args_.size();
        for (std::size_t i = 0; i < a.args_.size(); ++i) {
            if (!(a.args_[i] == b.args_[i])) return atom_less(a.args_[i], b.args_[i]);
        }
        return false;
    }

private:
    bool position_ = false;
    std::string name_;
    std::vector<Atom> args_;
    Coord coord_{};
    std::int64_t object_id_ = 0;
};

using EventSet = std::set<Event>;

std::string atom_str(const Atom& a);
std::string event_str(const Event& e);
std::string event_set_str(const EventSet& s);

}  // namespace tes
