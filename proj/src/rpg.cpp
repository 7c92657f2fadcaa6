#include "rearr/rpg.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>

namespace rearr {

const RpgEdge* Rpg::find_edge(PoseId a, PoseId b) const {
    const PosePair key{std::min(a, b), std::max(a, b)};
    for (const RpgEdge& e : edges) {
        if (e.poses == key) {
            return &e;
        }
    }
    return nullptr;
}

std::vector<std::set<PoseId>> Rpg::components() const {
    std::vector<std::set<PoseId>> out(component_count);
    for (const auto& [pose, comp] : component_of) {
        out[comp].insert(pose);
    }
    return out;
}

std::vector<int> Rpg::component_sizes() const {
    std::vector<int> sizes(component_count, 0);
    for (const auto& [pose, comp] : component_of) {
        ++sizes[comp];
    }
    return sizes;
}

PumpedArrangement sample_pumped_arrangement(
    const SceneSpec& scene, int k, int b,
    const std::optional<Arrangement>& seed_arrangement, std::uint64_t seed) {
    if (k < 1 || b < 1) {
        throw RpgError("pumped arrangement needs k >= 1 and b >= 1");
    }
    PumpedArrangement out;
    out.k = k;
    out.b = b;
    const int n = k + b;

    if (seed_arrangement) {
        if (static_cast<int>(seed_arrangement->size()) != k) {
            throw RpgError("seed arrangement must have size k");
        }
        out.poses = *seed_arrangement;
    }

    auto compatible = [&](PoseId id) {
        if (out.poses.count(id)) {
            return false;
        }
        const Point c = scene.pose(id).position;
        for (PoseId other : out.poses) {
            if (disc_disc_overlap({c, scene.object_radius},
                                  {scene.pose(other).position,
                                   scene.object_radius})) {
                return false;
            }
        }
        return true;
    };

    std::mt19937_64 rng(seed);
    std::vector<PoseId> pool;
    for (const Pose& p : scene.pose_library) {
        pool.push_back(p.id);
    }
    const long budget = 1000L * n;
    long attempts = 0;
    while (static_cast<int>(out.poses.size()) < n) {
        if (pool.empty() || attempts++ >= budget) {
            throw RpgError("pumped arrangement sampling exhausted");
        }
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        const std::size_t i = pick(rng);
        const PoseId id = pool[i];
        if (compatible(id)) {
            out.poses.insert(id);
        } else if (out.poses.count(id)) {
            // Already chosen; drop from the pool so attempts make progress.
            pool.erase(pool.begin() + static_cast<long>(i));
        }
    }
    return out;
}

std::pair<Rpg, std::vector<ConstrainedEdge>> create_rpg(
    const Roadmap& roadmap, const PumpedArrangement& pumped) {
    Rpg rpg;
    rpg.nodes = pumped;
    std::vector<ConstrainedEdge> constrained;

    const std::vector<PoseId> poses(pumped.poses.begin(), pumped.poses.end());
    for (std::size_t i = 0; i < poses.size(); ++i) {
        for (std::size_t j = i + 1; j < poses.size(); ++j) {
            std::set<PoseId> candidates = pumped.poses;
            candidates.erase(poses[i]);
            candidates.erase(poses[j]);
            MinConflictResult res =
                min_conflict_path(roadmap, poses[i], poses[j], candidates);
            if (res.status == PathStatus::UnreachablePose) {
                throw RpgError("pumped arrangement contains an unreachable pose");
            }
            if (res.status == PathStatus::NoPath) {
                continue;
            }
            if (res.path.conflict_set.empty()) {
                rpg.edges.push_back({{poses[i], poses[j]}, res.path});
            } else {
                constrained.push_back(
                    {{poses[i], poses[j]}, res.path, res.path.conflict_set});
            }
        }
    }

    // Union-find over RPG edges; component indices ordered by smallest
    // contained pose id.
    std::map<PoseId, PoseId> parent;
    for (PoseId p : poses) {
        parent[p] = p;
    }
    std::function<PoseId(PoseId)> find = [&](PoseId x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const RpgEdge& e : rpg.edges) {
        const PoseId ra = find(e.poses.first);
        const PoseId rb = find(e.poses.second);
        if (ra != rb) {
            parent[std::max(ra, rb)] = std::min(ra, rb);
        }
    }
    std::map<PoseId, int> root_index;
    for (PoseId p : poses) {  // ascending ids
        const PoseId r = find(p);
        if (!root_index.count(r)) {
            const int idx = static_cast<int>(root_index.size());
            root_index[r] = idx;
        }
        rpg.component_of[p] = root_index[r];
    }
    rpg.component_count = static_cast<int>(root_index.size());
    return {rpg, constrained};
}

}  // namespace rearr
