#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "tes/algebra.hpp"
#include "tes/signature.hpp"
#include "tes/stream.hpp"

namespace tes {

struct UniverseTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SubsetBoundExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotDivisible : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoCoordinator : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Finite search space standing in for "all components over E": every TES
// with stamps drawn from the grid and observables of size <= max_obs_size
// (empty observables included), or an explicit pool when given.
struct CandidateUniverse {
    EventSet interface;
    std::set<Rational> grid;
    std::size_t max_obs_size = 1;
    Rational horizon{1};
    std::optional<std::vector<Tes>> explicit_pool;

    // Number of candidate TESs; saturates at the cap on overflow.
    unsigned long long cardinality(unsigned long long cap = ~0ull) const;

    // Materializes the universe; throws UniverseTooLarge above max_candidates.
    std::vector<Tes> enumerate(unsigned long long max_candidates) const;
};

enum class Side { left, right, commutative };

enum class Choice {
    theorem1_lower_bound,
    theorem2_union,
    greatest,
    pick_first_canonical,
    cost_ranked,
};

struct QuotientQuery {
    Component dividend;  // A
    Component divisor;   // B
    InteractionSignature sig;
    CandidateUniverse universe;
    Side side = Side::commutative;
    unsigned long long max_universe = 1000000;
    std::size_t max_subset_base = 20;
};

struct QuotientResult {
    std::vector<Tes> sound_maximal;
    // Sound candidates that compose with at least one divisor element.
    // Candidates composable with nothing are sound vacuously; they can be
    // added to any quotient without changing the product, so enumeration
    // runs over the contributing ones and reports the vacuous count.
    std::vector<Tes> contributing;
    std::size_t vacuous_count = 0;
    std::vector<Component> quotients;
    std::optional<Component> lower_bound;
    bool divisible = false;
};

struct ConformanceQuery {
    Component spec;   // A
    Component plant;  // B
    InteractionSignature sig;
    CandidateUniverse universe;
    Side side = Side::commutative;
    unsigned long long max_universe = 1000000;
    std::size_t max_subset_base = 20;
};

struct ConformanceResult {
    std::vector<Tes> sound_maximal;
    std::vector<Component> coordinators;  // enumerated only when bounded
    bool enumerated = false;
    std::optional<Component> greatest;
};

// { σ ∈ U : every τ:B composable with σ composes into L_A }. Constructive
// core of both quotient and coordinator search.
std::vector<Tes> sound_maximal_set(const Component& a, const Component& b,
                                   const InteractionSignature& sig, const CandidateUniverse& u,
                                   Side side = Side::commutative,
                                   unsigned long long max_universe = 1000000);

QuotientResult enumerate_quotients(const QuotientQuery& q);

Component divide(const QuotientQuery& q, Choice choice);

ConformanceResult enumerate_coordinators(const ConformanceQuery& q);

Component principal_coordinator(const ConformanceQuery& q, Choice choice);

// A member of `quotients` that is ≤-below every other member, if one
// exists. Across differing interfaces there is in general none.
std::optional<Component> lower_bound_member(const std::vector<Component>& quotients);

struct InterfaceRank {
    EventSet interface;
    std::size_t shared_with_divisor;
};

// Ascending by |E ∩ E_B| (less shared means less coordination), then by
// |E|, then by canonical serialization.
std::vector<InterfaceRank> rank_interfaces(const std::vector<EventSet>& candidates,
                                           const Component& b);

}  // namespace tes
