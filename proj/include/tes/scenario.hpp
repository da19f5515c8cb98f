#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tes/decomposition.hpp"
#include "tes/stream.hpp"

namespace tes::scenario {

struct BehaviorBoundExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Alternation { free, move_read_alternating, moves_then_read };

struct RobotSpec {
    std::int64_t id = 1;
    Rational period{1};
    Rational power_cap{1};
    Rational move_power{1};
    Rational horizon{4};
    // Coordinate bounds for read events; empty ranges disable reads.
    std::int64_t min_x = -20, max_x = 20, min_y = -20, max_y = 20;
    bool reads_enabled = true;
    Alternation alternation = Alternation::free;
    std::size_t max_behavior = 200000;
};

// The robot interface E_R(i,P): direction events over the fixed power plus
// (when enabled) reads over the coordinate bounds.
EventSet robot_interface(const RobotSpec& spec);

// All alternation-legal single-action sequences stamped at multiples of the
// period within the horizon. Throws BehaviorBoundExceeded above the bound.
Component gen_robot(const RobotSpec& spec);

// One step of a scripted strategy word: either a cardinal move or a read
// of a fixed coordinate.
struct Action {
    std::string direction;           // "N","S","W","E"; empty for a read
    std::optional<Coord> read_coord;
};

// A robot component whose behavior is the word instantiated at each start
// offset (consecutive period stamps). Interface is the full E_R(i,P).
Component strategy_component(const RobotSpec& spec, const std::vector<Action>& word,
                             const std::vector<std::int64_t>& start_offsets);

using Cell = std::pair<std::int64_t, std::int64_t>;

struct FieldSpec {
    std::vector<std::int64_t> objects;       // mobile ids
    std::map<std::int64_t, Cell> initial;    // integer start positions
    std::int64_t min_x = 1, max_x = 3, min_y = 0, max_y = 1;  // free rectangle
    std::set<Cell> obstacles;
    Rational period{1};
    Rational horizon{6};
    Rational move_power{1};
};

// The grid interface E_G(I): integer positions inside the rectangle plus
// the four move velocities per mobile object.
EventSet grid_interface(const FieldSpec& spec);

// Integer-position grid responses to the move schedules occurring in the
// driver component. Simultaneous moves resolve with vacating chains;
// blocked moves leave the position unchanged; two movers targeting the
// same cell reject the whole schedule.
Component gen_grid(const FieldSpec& spec, const Component& drivers);

// The swap(i,j) pattern: N(i), then {W(i),E(j)} together, then S(i), at
// every increasing stamp assignment within the horizon.
Component gen_swap(std::int64_t i, std::int64_t j, const Atom& power, const Rational& period,
                   const Rational& horizon);

// Restriction of a TES to an event set, dropping emptied observations.
Tes project(const Tes& sigma, const EventSet& events);

// Distinct projections of a behavior onto an event set, as a candidate pool.
std::vector<Tes> projection_pool(const Component& c, const EventSet& events);

// The sort property over a finite composite universe: elements with some
// observation displaying (i;0)_i for every id.
Component sorted_property(const std::vector<std::int64_t>& ids, const Component& universe);

struct CaseCheck {
    std::string name;
    bool passed = false;
};

struct CaseReport {
    std::string name;
    std::vector<CaseCheck> checks;
    std::string details;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

CaseReport run_case_grid_division();
CaseReport run_case_update(Rational period = Rational(1), Rational horizon = Rational(10));
CaseReport run_case_sort(Rational period = Rational(1), Rational horizon = Rational(6));

}  // namespace tes::scenario
