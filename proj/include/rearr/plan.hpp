#ifndef REARR_PLAN_HPP
#define REARR_PLAN_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rearr/roadmap.hpp"

namespace rearr {

enum class Action { Reach, Carry, Retract };

struct PlanSegment {
    Mode mode = Mode::Transit;
    Action action = Action::Reach;
    std::vector<Point> waypoints;
    // Present on Carry segments: which pose the displaced object leaves and
    // where it ends up.
    std::optional<std::pair<PoseId, PoseId>> moved;

    double length() const;
};

// Alternating transit/transfer output of the planner: repeating
// reach/carry/retract triples, mode changes only at grasps.
struct ManipulationPlan {
    std::vector<PlanSegment> segments;

    double length() const;
    bool empty() const { return segments.empty(); }
};

std::string save_plan(const ManipulationPlan& plan);
ManipulationPlan load_plan(const std::string& content);

struct ValidationResult {
    bool ok = true;
    int segment = -1;
    std::string message;
};

// Simulates the plan against the scene geometry and the evolving
// arrangement: collision-free sweeps, mode alternation through grasps only,
// per-move pickup/placement legality, goal arrangement reached. Reports the
// first violation.
ValidationResult validate_plan(const SceneSpec& scene,
                               const ManipulationPlan& plan);

// World context for checking one swept leg of a plan segment; shared by the
// validator and the smoother so both apply identical rules.
struct SweepContext {
    const SceneSpec* scene = nullptr;
    double radius = 0.0;
    std::vector<Point> objects;  // object disc centers in force
    // Grasp exemptions: a sweep may overlap the departed object's footprint
    // only while monotonically receding from it within the standoff, and
    // the approached object's footprint only while monotonically nearing it
    // within the standoff.
    std::optional<Point> depart_grasp;
    std::optional<Point> approach_grasp;
};

bool sweep_leg_clear(const SweepContext& ctx, Point a, Point b);

// Number of times each plan-induced object is grasped (one per Carry
// segment), keyed by the object's start pose.
std::map<PoseId, int> grasp_counts(const SceneSpec& scene,
                                   const ManipulationPlan& plan);
int max_grasps_per_object(const SceneSpec& scene,
                          const ManipulationPlan& plan);

}  // namespace rearr

#endif
