#include "rearr/minconflict.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <queue>
#include <stdexcept>

namespace rearr {

namespace {

struct Label {
    int node = -1;
    int phase = 0;  // 0 reach (transit), 1 transfer, 2 retract (transit)
    std::uint64_t mask = 0;
    double length = 0.0;
    int parent = -1;
};

struct QueueEntry {
    int conflicts;
    double length;
    int label;
    bool operator>(const QueueEntry& o) const {
        if (conflicts != o.conflicts) return conflicts > o.conflicts;
        if (length != o.length) return length > o.length;
        return label > o.label;
    }
};

}  // namespace

MinConflictResult min_conflict_path(const Roadmap& roadmap, PoseId p,
                                    PoseId p_target,
                                    const std::set<PoseId>& candidates) {
    MinConflictResult result;
    if (candidates.count(p) || candidates.count(p_target)) {
        throw std::invalid_argument(
            "candidate set must exclude the manipulated poses");
    }
    if (candidates.size() > 64) {
        throw std::invalid_argument("candidate set capped at 64 poses");
    }
    if (!roadmap.pose_reachable(p) || !roadmap.pose_reachable(p_target)) {
        result.status = PathStatus::UnreachablePose;
        return result;
    }
    const std::vector<PoseId> cand(candidates.begin(), candidates.end());
    auto conflict_mask = [&](const RoadmapEdge& e) {
        std::uint64_t m = 0;
        for (std::size_t i = 0; i < cand.size(); ++i) {
            if (e.conflicts.count(cand[i])) {
                m |= (1ULL << i);
            }
        }
        return m;
    };

    const TransitionPair& tp = roadmap.transitions.at(p);
    const TransitionPair& tt = roadmap.transitions.at(p_target);
    const Point p_pos = roadmap.nodes[tp.transit_node].config;
    const Point t_pos = roadmap.nodes[tt.transit_node].config;
    const double standoff_p =
        tp.approach_node >= 0
            ? distance(roadmap.nodes[tp.approach_node].config, p_pos)
            : 0.0;
    const double standoff_t =
        tt.approach_node >= 0
            ? distance(roadmap.nodes[tt.approach_node].config, t_pos)
            : 0.0;

    // An object occupies p throughout the reach and p_target throughout the
    // retract. Legs swept over either one (or hugging its grasp structure)
    // are legal only as a monotone entry into, or exit out of, the standoff
    // footprint -- the same exemption the replay validator grants.
    auto leg_allowed = [&](const RoadmapEdge& e, int u, int v, int phase) {
        if (phase == 1) {
            return true;  // both endpoint poses are empty during the carry
        }
        const PoseId x = phase == 0 ? p : p_target;
        const RoadmapNode& nu = roadmap.nodes[u];
        const RoadmapNode& nv = roadmap.nodes[v];
        const bool anchored = (nu.anchor_pose && *nu.anchor_pose == x) ||
                              (nv.anchor_pose && *nv.anchor_pose == x);
        if (!anchored && !e.conflicts.count(x)) {
            return true;
        }
        const Point& xp = phase == 0 ? p_pos : t_pos;
        const double so = phase == 0 ? standoff_p : standoff_t;
        const double du = distance(nu.config, xp);
        const double dv = distance(nv.config, xp);
        if (phase == 0) {
            return dv <= so + 1e-9 && du >= dv - 1e-9;
        }
        return du <= so + 1e-9 && dv >= du - 1e-9;
    };

    // Grasp structures of other poses are off limits: routing through them
    // would collide with any object they hold, which the anchor-exclusion
    // rule keeps out of the edge annotations.
    auto node_allowed = [&](int id, int phase) {
        const RoadmapNode& n = roadmap.nodes[id];
        const Mode want = phase == 1 ? Mode::Transfer : Mode::Transit;
        if (n.mode != want) {
            return false;
        }
        if (n.anchor_pose && *n.anchor_pose != p && *n.anchor_pose != p_target) {
            return false;
        }
        return true;
    };

    std::vector<Label> arena;
    // Nondominated labels per (node, phase).
    std::vector<std::vector<int>> frontier(roadmap.nodes.size() * 3);
    std::priority_queue<QueueEntry, std::vector<QueueEntry>,
                        std::greater<QueueEntry>>
        open;

    auto try_insert = [&](int node, int phase, std::uint64_t mask,
                          double length, int parent) {
        auto& bucket = frontier[node * 3 + phase];
        for (int idx : bucket) {
            const Label& l = arena[idx];
            if ((l.mask & ~mask) == 0 && l.length <= length + 1e-12) {
                return;  // dominated
            }
        }
        std::erase_if(bucket, [&](int idx) {
            const Label& l = arena[idx];
            return (mask & ~l.mask) == 0 && length <= l.length;
        });
        arena.push_back({node, phase, mask, length, parent});
        const int id = static_cast<int>(arena.size()) - 1;
        bucket.push_back(id);
        open.push({std::popcount(mask), length, id});
    };

    try_insert(roadmap.safe_node, 0, 0, 0.0, -1);

    int best_goal = -1;
    while (!open.empty()) {
        const QueueEntry top = open.top();
        open.pop();
        const Label cur = arena[top.label];
        // Skip labels removed from the frontier by later dominators.
        const auto& bucket = frontier[cur.node * 3 + cur.phase];
        if (std::find(bucket.begin(), bucket.end(), top.label) ==
            bucket.end()) {
            continue;
        }
        if (cur.node == roadmap.safe_node && cur.phase == 2) {
            best_goal = top.label;
            break;  // first goal pop is optimal under (conflicts, length)
        }
        for (int ei : roadmap.adj[cur.node]) {
            const RoadmapEdge& e = roadmap.edges[ei];
            const int other = e.a == cur.node ? e.b : e.a;
            if (e.transition) {
                // Mode switch, only at the manipulated poses.
                int next_phase = -1;
                if (cur.phase == 0 && cur.node == tp.transit_node) {
                    next_phase = 1;
                } else if (cur.phase == 1 && cur.node == tt.transfer_node) {
                    next_phase = 2;
                }
                if (next_phase < 0 || !node_allowed(other, next_phase)) {
                    continue;
                }
                try_insert(other, next_phase, cur.mask | conflict_mask(e),
                           cur.length + e.length, top.label);
            } else {
                if (!node_allowed(other, cur.phase) ||
                    !leg_allowed(e, cur.node, other, cur.phase)) {
                    continue;
                }
                try_insert(other, cur.phase, cur.mask | conflict_mask(e),
                           cur.length + e.length, top.label);
            }
        }
    }

    if (best_goal < 0) {
        result.status = PathStatus::NoPath;
        return result;
    }

    std::vector<std::pair<int, int>> chain;  // (node, phase), reversed
    for (int idx = best_goal; idx >= 0; idx = arena[idx].parent) {
        chain.push_back({arena[idx].node, arena[idx].phase});
    }
    std::reverse(chain.begin(), chain.end());

    SegmentedPath path;
    for (const auto& [node, phase] : chain) {
        (phase == 0 ? path.reach : phase == 1 ? path.transfer : path.retract)
            .push_back(node);
    }
    path.total_length = arena[best_goal].length;
    const std::uint64_t mask = arena[best_goal].mask;
    for (std::size_t i = 0; i < cand.size(); ++i) {
        if (mask & (1ULL << i)) {
            path.conflict_set.insert(cand[i]);
        }
    }
    result.status = PathStatus::Ok;
    result.path = std::move(path);
    return result;
}

}  // namespace rearr
