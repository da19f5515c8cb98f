#include "tes/algebra.hpp"

#include <stdexcept>

namespace tes {

Component product(const Component& a, const Component& b, const InteractionSignature& sig) {
    if (a.horizon() != b.horizon())
        throw std::invalid_argument("product: horizon mismatch");
    EventSet interface = a.interface();
    interface.insert(b.interface().begin(), b.interface().end());
    Behavior behavior;
    for (const auto& sigma : a.behavior()) {
        for (const auto& tau : b.behavior()) {
            if (sig.composable(sigma, tau, a.interface(), b.interface()))
                behavior.insert(sig.compose(sigma, tau));
        }
    }
    return Component(std::move(interface), std::move(behavior), a.horizon());
}

Component product_fold(const std::vector<Component>& parts, const InteractionSignature& sig) {
    if (parts.empty()) throw std::invalid_argument("product_fold: empty operand list");
    Component acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = product(acc, parts[i], sig);
    return acc;
}

Component unit_component(const std::set<Rational>& grid, Rational horizon) {
    if (grid.size() > 20)
        throw std::invalid_argument("unit_component: grid too large to enumerate");
    std::vector<Rational> stamps(grid.begin(), grid.end());
    Behavior behavior;
    const std::size_t n = stamps.size();
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
        std::vector<Observation> obs;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::size_t(1) << i)) obs.push_back(Observation{{}, stamps[i]});
        }
        behavior.insert(Tes(std::move(obs), horizon));
    }
    return Component({}, std::move(behavior), horizon);
}

Component zero_component(Rational horizon) { return Component({}, {}, horizon); }

std::string law_name(Law law) {
    switch (law) {
        case Law::commutative: return "commutative";
        case Law::associative: return "associative";
        case Law::idempotent: return "idempotent";
        case Law::monotonic: return "monotonic";
    }
    return "?";
}

ProductLawReport check_law(Law law, const InteractionSignature& sig,
                           const std::vector<Component>& witnesses) {
    ProductLawReport report{law, 0, std::nullopt};
    switch (law) {
        case Law::commutative:
            for (const auto& a : witnesses) {
                for (const auto& b : witnesses) {
                    ++report.witnesses_checked;
                    if (!(product(a, b, sig) == product(b, a, sig))) {
                        report.counterexample = {{a, b}};
                        return report;
                    }
                }
            }
            break;
        case Law::associative:
            for (const auto& a : witnesses) {
                for (const auto& b : witnesses) {
                    for (const auto& c : witnesses) {
                        ++report.witnesses_checked;
                        if (!(product(product(a, b, sig), c, sig) ==
                              product(a, product(b, c, sig), sig))) {
                            report.counterexample = {{a, b, c}};
                            return report;
                        }
                    }
                }
            }
            break;
        case Law::idempotent:
            for (const auto& a : witnesses) {
                ++report.witnesses_checked;
                if (!(product(a, a, sig) == a)) {
                    report.counterexample = {{a}};
                    return report;
                }
            }
            break;
        case Law::monotonic:
            for (const auto& a : witnesses) {
                for (const auto& b : witnesses) {
                    if (!refines(b, a)) continue;
                    for (const auto& c : witnesses) {
                        ++report.witnesses_checked;
                        if (!refines(product(b, c, sig), product(a, c, sig))) {
                            report.counterexample = {{b, a, c}};
                            return report;
                        }
                    }
                }
            }
            break;
    }
    return report;
}

}  // namespace tes
