#pragma once

#include <functional>
#include <string>

#include "tes/stream.hpp"

namespace tes {

// Interaction signature Σ = (R, ⊕): a composability relation over TES pairs
// plus a composition function merging a composable pair.
struct InteractionSignature {
    std::string name;
    std::function<bool(const Tes&, const Tes&, const EventSet&, const EventSet&)> composable;
    std::function<Tes(const Tes&, const Tes&)> compose;
};

// R_sync: at every stamp in dom(σ) ∪ dom(τ), the shared-event projections
// agree, σ(t) ∩ E2 = τ(t) ∩ E1.
bool sync_composable(const Tes& sigma, const Tes& tau, const EventSet& e1, const EventSet& e2);

// (σ ∪ τ)(t) = σ(t) ∪ τ(t) over dom(σ) ∪ dom(τ).
Tes union_compose(const Tes& sigma, const Tes& tau);

// The direction/power -> velocity map: N (0,1/T), S (0,-1/T), W (-1/T,0),
// E (1/T,0); zero power stops the robot. Throws on unknown direction.
Coord velocity_of(const std::string& direction, const Rational& power, const Rational& period);

// R_RF: reads synchronize with position events via the floor of the
// coordinates, and moves d(i,p) synchronize with move(i, v(d,p)). The
// relation is symmetric; the robot-shaped operand is found by event-shape
// inspection.
bool rf_composable(const Tes& a, const Tes& b, const EventSet& ea, const EventSet& eb,
                   const Rational& period);

InteractionSignature sync_signature();
InteractionSignature rf_signature(const Rational& period);

// Lift a pointwise observation predicate and merge to TES level by
// quantifying over dom(σ) ∪ dom(τ). Entry point for user-defined
// signatures.
InteractionSignature pointwise_signature(
    std::string name,
    std::function<bool(const EventSet&, const EventSet&, const EventSet&, const EventSet&)> ok,
    std::function<EventSet(const EventSet&, const EventSet&)> merge);

}  // namespace tes
