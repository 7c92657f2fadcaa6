#ifndef REARR_RPG_HPP
#define REARR_RPG_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "rearr/minconflict.hpp"

namespace rearr {

using PosePair = std::pair<PoseId, PoseId>;  // ordered (min, max)

// k + b pairwise non-overlapping library poses.
struct PumpedArrangement {
    std::set<PoseId> poses;
    int k = 0;
    int b = 0;
};

struct RpgEdge {
    PosePair poses;
    // Path computed first -> second; replayed reversed for the other
    // direction (the conflict set is direction independent).
    SegmentedPath path;
};

struct ConstrainedEdge {
    PosePair poses;
    SegmentedPath path;
    std::set<PoseId> constraints;  // nonempty, subset of nodes \ {p, p'}
};

struct Rpg {
    int id = 0;
    PumpedArrangement nodes;
    std::vector<RpgEdge> edges;
    // Component indices are assigned by smallest contained pose id, so
    // signatures compare positionally across arrangements of one RPG.
    std::map<PoseId, int> component_of;
    int component_count = 0;

    const RpgEdge* find_edge(PoseId a, PoseId b) const;
    std::vector<std::set<PoseId>> components() const;
    std::vector<int> component_sizes() const;
};

struct RpgError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Draws k + b pairwise non-overlapping poses from the library, containing
// the seed arrangement when given. Deterministic given seed. Throws
// RpgError on exhaustion.
PumpedArrangement sample_pumped_arrangement(
    const SceneSpec& scene, int k, int b,
    const std::optional<Arrangement>& seed_arrangement, std::uint64_t seed);

// Algorithm: for every unordered pose pair run the minimum-conflict search
// with candidates = pumped \ {p, p'}; an empty conflict set yields an RPG
// edge, a nonempty one a constrained edge, and NoPath drops the pair.
std::pair<Rpg, std::vector<ConstrainedEdge>> create_rpg(
    const Roadmap& roadmap, const PumpedArrangement& pumped);

}  // namespace rearr

#endif
