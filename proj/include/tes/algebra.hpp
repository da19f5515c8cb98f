#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tes/signature.hpp"
#include "tes/stream.hpp"

namespace tes {

// A ×_Σ B: interface union, behavior the composable pair merges.
Component product(const Component& a, const Component& b, const InteractionSignature& sig);

// Left fold of product over a nonempty list.
Component product_fold(const std::vector<Component>& parts, const InteractionSignature& sig);

// 1 restricted to a time grid: all silent TESs with stamps from the grid.
Component unit_component(const std::set<Rational>& grid, Rational horizon);

// 0 = (∅, ∅).
Component zero_component(Rational horizon);

enum class Law { commutative, associative, idempotent, monotonic };

std::string law_name(Law law);

struct ProductLawReport {
    Law law;
    std::size_t witnesses_checked = 0;
    std::optional<std::vector<Component>> counterexample;

    bool passed() const { return !counterexample.has_value(); }
};

// Evaluate a law over all tuples drawn from the witness set. Witness-based:
// certifies the law on the supplied components only, no universal claim.
ProductLawReport check_law(Law law, const InteractionSignature& sig,
                           const std::vector<Component>& witnesses);

}  // namespace tes
