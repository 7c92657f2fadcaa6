#ifndef REARR_SCENEGEN_HPP
#define REARR_SCENEGEN_HPP

#include "rearr/scene.hpp"

namespace rearr {

// Desk-scale random problem generator used by the benchmark harness and the
// end-to-end test suites.
struct SceneGenParams {
    Rect workspace{0.0, 0.0, 1.0, 1.0};
    int obstacle_count = 2;
    double object_radius = 0.035;
    double gripper_radius = 0.045;
    int pose_count = 14;
    int k = 3;
    // Goal differs from start by exactly one object moved to a free pose.
    bool single_transfer = false;
};

// Random scene with rectangular clutter, a sampled pose library, a clear
// safe configuration and valid start/goal arrangements. The result
// round-trips through the scene validator. Deterministic given seed. Throws
// SceneError if no valid scene is found within the attempt budget.
SceneSpec generate_scene(const SceneGenParams& params, std::uint64_t seed);

}  // namespace rearr

#endif
