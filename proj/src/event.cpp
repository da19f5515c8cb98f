#include "tes/event.hpp"

#include <sstream>

namespace tes {

std::string atom_str(const Atom& a) {
    struct V {
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(const Rational& r) const { return r.str(); }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(const Coord& c) const {
            return "(" + c.x.str() + ";" + c.y.str() + ")";
        }
    };
    return std::visit(V{}, a);
}

std::string event_str(const Event& e) {
    if (e.is_position()) {
        return "(" + e.coord().x.str() + ";" + e.coord().y.str() + ")_" +
               std::to_string(e.object_id());
    }
    if (e.args().empty()) return e.name();
    std::ostringstream out;
    out << e.name() << "(";
    bool first = true;
    for (const auto& a : e.args()) {
        if (!first) out << ",";
        first = false;
        out << atom_str(a);
    }
    out << ")";
    return out.str();
}

std::string event_set_str(const EventSet& s) {
    std::ostringstream out;
    out << "{";
    bool first = true;
    for (const auto& e : s) {
        if (!first) out << ", ";
        first = false;
        out << event_str(e);
    }
    out << "}";
    return out.str();
}

}  // namespace tes
