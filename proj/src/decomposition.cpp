#include "tes/decomposition.hpp"

#include <algorithm>

namespace tes {

namespace {

unsigned long long sat_mul(unsigned long long a, unsigned long long b, unsigned long long cap) {
    if (a == 0 || b == 0) return 0;
    if (a > cap / b) return cap;
    return a * b;
}

// All subsets of `events` of size <= max_size, empty set included.
std::vector<EventSet> small_subsets(const EventSet& events, std::size_t max_size) {
    std::vector<Event> items(events.begin(), events.end());
    std::vector<EventSet> out{{}};
    for (const auto& e : items) {
        std::size_t n = out.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (out[i].size() < max_size) {
                EventSet ext = out[i];
                ext.insert(e);
                out.push_back(std::move(ext));
            }
        }
    }
    return out;
}

}  // namespace

unsigned long long CandidateUniverse::cardinality(unsigned long long cap) const {
    if (explicit_pool) return explicit_pool->size();
    unsigned long long per_stamp = 1;  // the stamp absent
    // Count observables of size <= max_obs_size over the interface.
    std::size_t n = interface.size();
    std::size_t m = std::min(max_obs_size, n);
    unsigned long long binom = 1;
    for (std::size_t k = 0; k <= m; ++k) {
        per_stamp = per_stamp > cap - binom ? cap : per_stamp + binom;
        if (k < m) binom = sat_mul(binom, n - k, cap) / (k + 1);
    }
    unsigned long long total = 1;
    for (std::size_t i = 0; i < grid.size(); ++i) total = sat_mul(total, per_stamp, cap);
    return total;
}

std::vector<Tes> CandidateUniverse::enumerate(unsigned long long max_candidates) const {
    unsigned long long card = cardinality();
    if (card > max_candidates)
        throw UniverseTooLarge("candidate universe has " + std::to_string(card) +
                               " elements, above the bound " + std::to_string(max_candidates));
    if (explicit_pool) return *explicit_pool;

    std::vector<Rational> stamps(grid.begin(), grid.end());
    std::vector<EventSet> observables = small_subsets(interface, max_obs_size);
    std::vector<Tes> out;
    std::vector<Observation> current;
    auto recurse = [&](auto&& self, std::size_t i) -> void {
        if (i == stamps.size()) {
            out.push_back(Tes(current, horizon));
            return;
        }
        self(self, i + 1);  // stamp absent
        for (const auto& o : observables) {
            current.push_back(Observation{o, stamps[i]});
            self(self, i + 1);
            current.pop_back();
        }
    };
    recurse(recurse, 0);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Composability/composition oriented by the query side. For the right
// quotient B × C = A the divisor is the left operand.
bool side_composable(const InteractionSignature& sig, Side side, const Tes& divisor_tes,
                     const Tes& cand, const EventSet& divisor_if, const EventSet& cand_if) {
    if (side == Side::left) return sig.composable(cand, divisor_tes, cand_if, divisor_if);
    return sig.composable(divisor_tes, cand, divisor_if, cand_if);
}

Tes side_compose(const InteractionSignature& sig, Side side, const Tes& divisor_tes,
                 const Tes& cand) {
    if (side == Side::left) return sig.compose(cand, divisor_tes);
    return sig.compose(divisor_tes, cand);
}

Component side_product(const InteractionSignature& sig, Side side, const Component& divisor,
                       const Component& cand) {
    if (side == Side::left) return product(cand, divisor, sig);
    return product(divisor, cand, sig);
}

std::vector<Tes> sound_one_side(const Component& a, const Component& b,
                                const InteractionSignature& sig,
                                const std::vector<Tes>& universe, Side side,
                                const EventSet& cand_if) {
    std::vector<Tes> out;
    for (const auto& cand : universe) {
        bool sound = true;
        for (const auto& tau : b.behavior()) {
            if (!side_composable(sig, side, tau, cand, b.interface(), cand_if)) continue;
            if (!a.behavior().count(side_compose(sig, side, tau, cand))) {
                sound = false;
                break;
            }
        }
        if (sound) out.push_back(cand);
    }
    return out;
}

}  // namespace

std::vector<Tes> sound_maximal_set(const Component& a, const Component& b,
                                   const InteractionSignature& sig, const CandidateUniverse& u,
                                   Side side, unsigned long long max_universe) {
    if (a.horizon() != b.horizon() || a.horizon() != u.horizon)
        throw std::invalid_argument("sound_maximal_set: horizon mismatch");
    std::vector<Tes> universe = u.enumerate(max_universe);
    if (side == Side::commutative) {
        // Commutative queries run both orientations and require agreement.
        auto right = sound_one_side(a, b, sig, universe, Side::right, u.interface);
        auto left = sound_one_side(a, b, sig, universe, Side::left, u.interface);
        if (right != left)
            throw std::logic_error("signature declared commutative but left/right sound sets differ");
        return right;
    }
    return sound_one_side(a, b, sig, universe, side, u.interface);
}

QuotientResult enumerate_quotients(const QuotientQuery& q) {
    QuotientResult result;
    result.sound_maximal =
        sound_maximal_set(q.dividend, q.divisor, q.sig, q.universe, q.side, q.max_universe);
    // Interfaces must union to the dividend's, otherwise no subset can work.
    EventSet union_if = q.divisor.interface();
    union_if.insert(q.universe.interface.begin(), q.universe.interface.end());
    if (union_if != q.dividend.interface()) {
        result.divisible = false;
        return result;
    }

    Side eval_side = q.side == Side::left ? Side::left : Side::right;
    // Every candidate contributes an independent slice of the product
    // behavior, so subset products reduce to unions of slices. Candidates
    // with an empty slice are split off as vacuous.
    std::vector<Behavior> slices;
    for (const auto& cand : result.sound_maximal) {
        Behavior slice;
        for (const auto& tau : q.divisor.behavior()) {
            if (side_composable(q.sig, eval_side, tau, cand, q.divisor.interface(),
                                q.universe.interface))
                slice.insert(side_compose(q.sig, eval_side, tau, cand));
        }
        if (slice.empty()) {
            ++result.vacuous_count;
        } else {
            result.contributing.push_back(cand);
            slices.push_back(std::move(slice));
        }
    }

    const std::size_t n = result.contributing.size();
    if (n > q.max_subset_base)
        throw SubsetBoundExceeded("contributing sound set has " + std::to_string(n) +
                                  " elements, above the subset base bound " +
                                  std::to_string(q.max_subset_base));
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
        Behavior covered;
        Behavior members;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::size_t(1) << i)) {
                covered.insert(slices[i].begin(), slices[i].end());
                members.insert(result.contributing[i]);
            }
        }
        if (covered != q.dividend.behavior()) continue;
        Component cand(q.universe.interface, std::move(members), q.dividend.horizon());
        // Soundness is never trusted from construction.
        if (!(side_product(q.sig, eval_side, q.divisor, cand) == q.dividend)) continue;
        result.quotients.push_back(std::move(cand));
    }
    result.divisible = !result.quotients.empty();

    if (result.divisible) {
        Component bound = product_fold(result.quotients, q.sig);
        bool is_quotient =
            std::any_of(result.quotients.begin(), result.quotients.end(),
                        [&](const Component& c) { return c == bound; });
        if (!is_quotient &&
            side_product(q.sig, eval_side, q.divisor, bound) == q.dividend)
            is_quotient = true;
        bool below_all = std::all_of(result.quotients.begin(), result.quotients.end(),
                                     [&](const Component& c) { return contained(bound, c); });
        if (is_quotient && below_all) result.lower_bound = std::move(bound);
    }
    return result;
}

Component divide(const QuotientQuery& q, Choice choice) {
    QuotientResult result = enumerate_quotients(q);
    if (!result.divisible)
        throw NotDivisible("no quotient exists at the requested interface");
    switch (choice) {
        case Choice::theorem1_lower_bound: {
            if (!result.lower_bound)
                throw std::logic_error("fold-product of quotients is not a lower-bound quotient");
            return *result.lower_bound;
        }
        case Choice::pick_first_canonical:
            return result.quotients.front();
        case Choice::cost_ranked: {
            auto best = std::min_element(
                result.quotients.begin(), result.quotients.end(),
                [](const Component& a, const Component& b) {
                    if (a.behavior().size() != b.behavior().size())
                        return a.behavior().size() < b.behavior().size();
                    return a.behavior() < b.behavior();
                });
            return *best;
        }
        default:
            throw std::invalid_argument("choice not applicable to division");
    }
}

ConformanceResult enumerate_coordinators(const ConformanceQuery& q) {
    ConformanceResult result;
    // C × B ⊑ A needs E ∪ E_B ⊆ E_A; otherwise no coordinator exists.
    EventSet union_if = q.plant.interface();
    union_if.insert(q.universe.interface.begin(), q.universe.interface.end());
    if (!std::includes(q.spec.interface().begin(), q.spec.interface().end(), union_if.begin(),
                       union_if.end()))
        return result;

    result.sound_maximal =
        sound_maximal_set(q.spec, q.plant, q.sig, q.universe, q.side, q.max_universe);
    const auto& s = result.sound_maximal;
    if (s.empty()) return result;

    Side eval_side = q.side == Side::left ? Side::left : Side::right;
    Component greatest(q.universe.interface, Behavior(s.begin(), s.end()), q.spec.horizon());
    if (!refines(side_product(q.sig, eval_side, q.plant, greatest), q.spec))
        throw std::logic_error("greatest candidate failed conformance re-verification");
    result.greatest = greatest;

    if (s.size() <= q.max_subset_base) {
        const std::size_t n = s.size();
        for (std::size_t mask = 1; mask < (std::size_t(1) << n); ++mask) {
            Behavior members;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (std::size_t(1) << i)) members.insert(s[i]);
            result.coordinators.push_back(
                Component(q.universe.interface, std::move(members), q.spec.horizon()));
        }
        result.enumerated = true;
    } else {
        result.coordinators.push_back(greatest);
        result.enumerated = false;
    }
    return result;
}

Component principal_coordinator(const ConformanceQuery& q, Choice choice) {
    ConformanceResult result = enumerate_coordinators(q);
    if (!result.greatest)
        throw NoCoordinator("no coordinator exists at the requested interface");
    switch (choice) {
        case Choice::theorem2_union: {
            Behavior all;
            for (const auto& c : result.coordinators)
                all.insert(c.behavior().begin(), c.behavior().end());
            Component bound(q.universe.interface, std::move(all), q.spec.horizon());
            Side eval_side = q.side == Side::left ? Side::left : Side::right;
            if (!refines(side_product(q.sig, eval_side, q.plant, bound), q.spec))
                throw std::logic_error("union of coordinators failed conformance re-verification");
            return bound;
        }
        case Choice::greatest:
            return *result.greatest;
        case Choice::pick_first_canonical:
            return result.coordinators.front();
        default:
            throw std::invalid_argument("choice not applicable to conformance");
    }
}

std::optional<Component> lower_bound_member(const std::vector<Component>& quotients) {
    for (const auto& candidate : quotients) {
        bool below_all = std::all_of(quotients.begin(), quotients.end(), [&](const Component& c) {
            return contained(candidate, c);
        });
        if (below_all) return candidate;
    }
    return std::nullopt;
}

std::vector<InterfaceRank> rank_interfaces(const std::vector<EventSet>& candidates,
                                           const Component& b) {
    std::vector<InterfaceRank> out;
    out.reserve(candidates.size());
    for (const auto& e : candidates) {
        EventSet shared;
        std::set_intersection(e.begin(), e.end(), b.interface().begin(), b.interface().end(),
                              std::inserter(shared, shared.begin()));
        out.push_back(InterfaceRank{e, shared.size()});
    }
    std::sort(out.begin(), out.end(), [](const InterfaceRank& x, const InterfaceRank& y) {
        if (x.shared_with_divisor != y.shared_with_divisor)
            return x.shared_with_divisor < y.shared_with_divisor;
        if (x.interface.size() != y.interface.size())
            return x.interface.size() < y.interface.size();
        return x.interface < y.interface;
    });
    return out;
}

}  // namespace tes
