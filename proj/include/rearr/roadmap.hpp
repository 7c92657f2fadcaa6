#ifndef REARR_ROADMAP_HPP
#define REARR_ROADMAP_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rearr/scene.hpp"

namespace rearr {

enum class Mode { Transit, Transfer };

enum class NodeKind { Safe, Sample, Transition, Approach };

struct RoadmapNode {
    int id = 0;
    Point config;
    Mode mode = Mode::Transit;
    NodeKind kind = NodeKind::Sample;
    // Present iff this is a transition or approach node for that pose.
    std::optional<PoseId> anchor_pose;
};

struct RoadmapEdge {
    int a = 0;
    int b = 0;
    double length = 0.0;
    // Library poses whose object footprint the swept edge motion overlaps,
    // excluding the anchor poses of its own endpoints.
    std::set<PoseId> conflicts;
    // Transition edges link the Transit and Transfer node of one grasp.
    bool transition = false;
};

struct TransitionPair {
    int transit_node = -1;
    int transfer_node = -1;
    int approach_node = -1;
};

struct Roadmap {
    std::vector<RoadmapNode> nodes;
    std::vector<RoadmapEdge> edges;
    int safe_node = -1;
    std::map<PoseId, TransitionPair> transitions;
    std::set<PoseId> unreachable;       // poses whose grasp placement collides
    std::vector<std::vector<int>> adj;  // node id -> incident edge indices
    std::uint64_t scene_hash = 0;

    bool pose_reachable(PoseId id) const { return transitions.count(id) > 0; }
};

struct RoadmapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Offline roadmap construction. For each library pose a transition pair
// (grasp config in both modes) plus an approach Transit node at standoff is
// attempted; sampled nodes are added per mode and each node connects to its
// nearest same-mode neighbors when the swept motion clears the static
// geometry. Deterministic given seed. Poses whose grasp placement collides
// are recorded as unreachable, not fatal. Edges arrive conflict-annotated.
Roadmap build_roadmap(const SceneSpec& scene, int samples_per_mode,
                      int connection_neighbors, std::uint64_t seed);

// Fills every edge's conflict set from a fresh sweep against an object disc
// placed at each library pose. Transfer and transition edges use the
// gripper+object footprint.
void annotate_conflicts(Roadmap& roadmap, const SceneSpec& scene);

// Footprint radius swept by an edge, by mode.
double edge_sweep_radius(const SceneSpec& scene, const RoadmapEdge& e,
                         const Roadmap& roadmap);

// Oracle-style recheck used by annotation and its tests: does this edge,
// swept with the proper footprint, hit an object placed at pose `p`?
bool edge_sweeps_pose(const Roadmap& roadmap, const SceneSpec& scene,
                      const RoadmapEdge& e, PoseId p);

// Versioned JSON cache keyed by the scene hash.
std::string save_roadmap(const Roadmap& roadmap);
Roadmap load_roadmap(const std::string& content, const SceneSpec& scene);

}  // namespace rearr

#endif
