#ifndef REARR_SCENE_HPP
#define REARR_SCENE_HPP

#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rearr/geometry.hpp"

namespace rearr {

using PoseId = int;
using Arrangement = std::set<PoseId>;

// A stable placement slot for an object. Orientation is carried through the
// file format but not used by planning.
struct Pose {
    PoseId id = 0;
    Point position;
    double theta = 0.0;
};

struct Rect {
    double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;
    bool contains_disc(Point c, double radius) const {
        return c.x >= xmin + radius && c.x <= xmax - radius &&
               c.y >= ymin + radius && c.y <= ymax - radius;
    }
};

struct SceneError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A well-formed scene whose start or goal arrangement is itself in
// collision: the problem is provably unsolvable, distinct from a malformed
// file.
struct InfeasibleError : SceneError {
    using SceneError::SceneError;
};

struct SceneSpec {
    Rect workspace;
    std::vector<Polygon> obstacles;
    double object_radius = 0.0;
    double gripper_radius = 0.0;
    std::vector<Pose> pose_library;  // sorted by id
    Point safe_config;
    Arrangement start;
    Arrangement goal;
    int k = 0;

    const Pose& pose(PoseId id) const;
    bool has_pose(PoseId id) const;

    // Footprint radius of the gripper while carrying an object.
    double carry_radius() const;
    // Reach/retract standoff distance from a grasped pose.
    double standoff() const;

    // A single pose is admissible: object disc inside bounds, not
    // penetrating any obstacle.
    bool pose_placement_free(Point position) const;

    // True iff no two object discs overlap and none penetrates an obstacle.
    // Throws SceneError on an unknown pose id.
    bool is_valid_arrangement(const Arrangement& a) const;

    // Canonical serialization; load_scene(serialize()) round-trips.
    std::string serialize() const;
    // Hash of the canonical serialization; used to pair roadmap caches with
    // the scene they were built for.
    std::uint64_t hash() const;
};

// Parses and validates a scene file. Throws SceneError with a field/line
// description on parse failure or the violated invariant on validation
// failure.
SceneSpec load_scene(const std::string& text);
SceneSpec load_scene_file(const std::string& path);

// Samples `count` individually collision-free poses (ids 0..count-1).
// Sampled poses may pairwise overlap; pumped arrangements filter later.
// Deterministic given seed. Throws SceneError after 1000*count failed
// attempts.
std::vector<Pose> sample_pose_library(const Rect& bounds,
                                      const std::vector<Polygon>& obstacles,
                                      double object_radius, int count,
                                      std::uint64_t seed);

}  // namespace rearr

#endif
