#ifndef REARR_SMOOTHING_HPP
#define REARR_SMOOTHING_HPP

#include "rearr/hypergraph.hpp"
#include "rearr/plan.hpp"

namespace rearr {

// Phase 1: consecutive moves of the same object are fused; the intervening
// retract-to-safe and reach-from-safe segments are deleted and the carries
// joined into one continuous transfer.
ManipulationPlan smooth_phase1(const ManipulationPlan& plan);

// Phase 2: deterministic coarse-to-fine shortcutting of waypoint
// subsequences within each segment, respecting the arrangement in force.
// With whole_trajectory set, consecutive retract+reach transit corridors
// are additionally shortcut across the safe-configuration visit.
ManipulationPlan smooth_phase2(const ManipulationPlan& plan,
                               const SceneSpec& scene,
                               bool whole_trajectory = false);

// Phase 3: an object parked at an intermediate pose and later moved on is
// rerouted directly to its eventual destination when a conflict-free path
// exists and every intervening move stays collision-free with the object at
// its new pose.
ManipulationPlan smooth_phase3(const ManipulationPlan& plan,
                               const SceneSpec& scene,
                               const Roadmap& roadmap);

// passes x (Phase 1 -> 2 -> 3), then a final Phase 2 over the whole
// trajectory. Output replays valid; length is non-increasing per phase.
ManipulationPlan smooth(const ManipulationPlan& plan, const SceneSpec& scene,
                        const Roadmap& roadmap, int passes = 1);

}  // namespace rearr

#endif
