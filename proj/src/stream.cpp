#include "tes/stream.hpp"

#include <algorithm>

namespace tes {

bool tes_contained(const Tes& sigma, const Tes& tau) {
    if (sigma.size() != tau.size()) return false;
    if (sigma.horizon() != tau.horizon()) return false;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        const auto& so = sigma.observations()[i];
        const auto& to = tau.observations()[i];
        if (so.time != to.time) return false;
        if (!std::includes(to.observable.begin(), to.observable.end(),
                           so.observable.begin(), so.observable.end()))
            return false;
    }
    return true;
}

bool refines(const Component& b, const Component& a) {
    if (!std::includes(a.interface().begin(), a.interface().end(),
                       b.interface().begin(), b.interface().end()))
        return false;
    return std::includes(a.behavior().begin(), a.behavior().end(),
                         b.behavior().begin(), b.behavior().end());
}

bool contained(const Component& a, const Component& b) {
    if (!std::includes(b.interface().begin(), b.interface().end(),
                       a.interface().begin(), a.interface().end()))
        return false;
    for (const auto& sigma : a.behavior()) {
        bool found = false;
        for (const auto& tau : b.behavior()) {
            if (tes_contained(sigma, tau)) { found = true; break; }
        }
        if (!found) return false;
    }
    return true;
}

std::optional<Tes> insert_silent(const Tes& sigma, Rational t) {
    if (t < Rational(0) || t > sigma.horizon()) return std::nullopt;
    std::vector<Observation> obs = sigma.observations();
    auto it = std::find_if(obs.begin(), obs.end(),
                           [&](const Observation& o) { return o.time >= t; });
    if (it != obs.end() && it->time == t) return std::nullopt;
    obs.insert(it, Observation{{}, t});
    return Tes(std::move(obs), sigma.horizon());
}

bool closed_under_silent_insertion(const Component& a, const std::set<Rational>& grid) {
    for (const auto& sigma : a.behavior()) {
        for (const auto& t : grid) {
            auto inserted = insert_silent(sigma, t);
            if (!inserted) continue;  // stamp collision: nothing to insert
            if (!a.behavior().count(*inserted)) return false;
        }
    }
    return true;
}

}  // namespace tes
