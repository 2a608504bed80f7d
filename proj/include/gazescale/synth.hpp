#pragma once

#include "gazescale/config.hpp"
#include "gazescale/trace.hpp"

namespace gazescale {

/// Generates one trial with a scripted participant.
///
/// The actor runs closed-loop against the engine: it waits for the mode
/// changes it caused, reads I_0 off the scaling mode-in, and solves for the
/// input that lands exactly on the target scale. For the pinch-assisted
/// techniques it also picks I_0 so that both I_0 and the target input sit
/// symmetrically around the middle of the clamp range.
///
/// Throws InfeasibleTarget if the target input falls outside the clamp range.
Trace synthesize_trial(const TrialSpec& spec, const ActorParams& actor, Technique technique,
                       const EngineConfig& cfg = {});

/// I_0 the actor aims for when it chooses the initial input itself
/// (push-pull and bimanual); the clamp midpoint otherwise.
double planned_initial_input(Technique technique, double target_scale, const EngineConfig& cfg);

}  // namespace gazescale
