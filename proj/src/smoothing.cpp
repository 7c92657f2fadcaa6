#include "rearr/smoothing.hpp"

#include <algorithm>
#include <limits>

namespace rearr {

namespace {

// Occupied arrangement before each reach/carry/retract triple.
std::vector<Arrangement> timeline(const SceneSpec& scene,
                                  const ManipulationPlan& plan) {
    std::vector<Arrangement> out;
    Arrangement cur = scene.start;
    for (std::size_t t = 0; t + 3 <= plan.segments.size(); t += 3) {
        out.push_back(cur);
        const auto& moved = plan.segments[t + 1].moved;
        cur.erase(moved->first);
        cur.insert(moved->second);
    }
    return out;
}

std::vector<Point> object_points(const SceneSpec& scene, const Arrangement& a) {
    std::vector<Point> pts;
    pts.reserve(a.size());
    for (PoseId p : a) {
        pts.push_back(scene.pose(p).position);
    }
    return pts;
}

SweepContext segment_context(const SceneSpec& scene, const PlanSegment& seg,
                             const Arrangement& before) {
    SweepContext ctx;
    ctx.scene = &scene;
    const auto [from, to] = *seg.moved;
    switch (seg.action) {
        case Action::Reach:
            ctx.radius = scene.gripper_radius;
            ctx.objects = object_points(scene, before);
            ctx.approach_grasp = scene.pose(from).position;
            break;
        case Action::Carry: {
            ctx.radius = scene.carry_radius();
            Arrangement world = before;
            world.erase(from);
            ctx.objects = object_points(scene, world);
            break;
        }
        case Action::Retract: {
            ctx.radius = scene.gripper_radius;
            Arrangement world = before;
            world.erase(from);
            world.insert(to);
            ctx.objects = object_points(scene, world);
            ctx.depart_grasp = scene.pose(to).position;
            break;
        }
    }
    return ctx;
}

bool polyline_clear(const SweepContext& ctx, const std::vector<Point>& w) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        if (!sweep_leg_clear(ctx, w[i], w[i + 1])) {
            return false;
        }
    }
    return true;
}

// Greedy coarse-to-fine shortcutting; deterministic sweep order.
void shortcut(std::vector<Point>& w, const SweepContext& ctx) {
    std::size_t i = 0;
    while (i + 2 < w.size()) {
        for (std::size_t j = w.size() - 1; j >= i + 2; --j) {
            if (sweep_leg_clear(ctx, w[i], w[j])) {
                w.erase(w.begin() + static_cast<long>(i) + 1,
                        w.begin() + static_cast<long>(j));
                break;
            }
        }
        ++i;
    }
}

struct Triple {
    PlanSegment reach, carry, retract;
};

std::vector<Triple> to_triples(const ManipulationPlan& plan) {
    std::vector<Triple> out;
    for (std::size_t t = 0; t + 3 <= plan.segments.size(); t += 3) {
        out.push_back({plan.segments[t], plan.segments[t + 1],
                       plan.segments[t + 2]});
    }
    return out;
}

ManipulationPlan from_triples(const std::vector<Triple>& triples) {
    ManipulationPlan plan;
    for (const Triple& t : triples) {
        plan.segments.push_back(t.reach);
        plan.segments.push_back(t.carry);
        plan.segments.push_back(t.retract);
    }
    return plan;
}

// Copies moved bookkeeping onto all three segments of a triple; the carry
// is authoritative, reach/retract carry it for context reconstruction.
void stamp_moved(Triple& t) {
    t.reach.moved = t.carry.moved;
    t.retract.moved = t.carry.moved;
}

}  // namespace

ManipulationPlan smooth_phase1(const ManipulationPlan& plan) {
    std::vector<Triple> triples = to_triples(plan);
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t i = 0; i + 1 < triples.size(); ++i) {
            const auto [f, t1] = *triples[i].carry.moved;
            const auto [t1b, u] = *triples[i + 1].carry.moved;
            if (t1 != t1b) {
                continue;  // the next pickup is a different object
            }
            if (u == f) {
                // The fused move is a no-op cycle (A -> B -> A): delete both
                // triples. Each triple is flanked by safe visits, so the
                // surrounding trajectory stays continuous.
                triples.erase(triples.begin() + static_cast<long>(i),
                              triples.begin() + static_cast<long>(i) + 2);
                merged = true;
                break;
            }
            // Same object grasped consecutively: drop the safe round trip
            // and the place-then-regrasp waypoint pair.
            Triple joined = triples[i];
            std::vector<Point>& w = joined.carry.waypoints;
            const std::vector<Point>& w2 = triples[i + 1].carry.waypoints;
            w.insert(w.end(), w2.begin() + 1, w2.end());
            joined.carry.moved = {{f, u}};
            joined.retract = triples[i + 1].retract;
            stamp_moved(joined);
            triples[i] = std::move(joined);
            triples.erase(triples.begin() + static_cast<long>(i) + 1);
            merged = true;
            break;
        }
    }
    return from_triples(triples);
}

ManipulationPlan smooth_phase2(const ManipulationPlan& plan,
                               const SceneSpec& scene, bool whole_trajectory) {
    std::vector<Triple> triples = to_triples(plan);
    const std::vector<Arrangement> occ = timeline(scene, plan);
    for (std::size_t i = 0; i < triples.size(); ++i) {
        Triple& t = triples[i];
        stamp_moved(t);
        shortcut(t.reach.waypoints, segment_context(scene, t.reach, occ[i]));
        shortcut(t.carry.waypoints, segment_context(scene, t.carry, occ[i]));
        shortcut(t.retract.waypoints,
                 segment_context(scene, t.retract, occ[i]));
    }
    if (!whole_trajectory) {
        return from_triples(triples);
    }

    // Shortcut the transit corridor between consecutive moves across the
    // safe-configuration visit.
    for (std::size_t i = 0; i + 1 < triples.size(); ++i) {
        PlanSegment& ret = triples[i].retract;
        PlanSegment& reach = triples[i + 1].reach;
        const Point depart = scene.pose(triples[i].carry.moved->second).position;
        const Point approach =
            scene.pose(triples[i + 1].carry.moved->first).position;
        Arrangement world = occ[i + 1];  // arrangement between the moves

        SweepContext ctx;
        ctx.scene = &scene;
        ctx.radius = scene.gripper_radius;
        ctx.objects = object_points(scene, world);
        ctx.depart_grasp = depart;
        ctx.approach_grasp = approach;

        std::vector<Point> combined = ret.waypoints;
        combined.insert(combined.end(), reach.waypoints.begin() + 1,
                        reach.waypoints.end());
        const double before_len = ret.length() + reach.length();
        shortcut(combined, ctx);
        if (combined.size() == 2) {
            combined.insert(combined.begin() + 1,
                            0.5 * (combined[0] + combined[1]));
        }
        // Split back at the waypoint closest to the old junction, then keep
        // the result only if both halves pass their single-exemption
        // checks (the validator applies exemptions per segment).
        const Point junction = ret.waypoints.back();
        std::size_t split = 1;
        double best = std::numeric_limits<double>::max();
        for (std::size_t j = 1; j + 1 < combined.size(); ++j) {
            const double d = distance(combined[j], junction);
            if (d < best) {
                best = d;
                split = j;
            }
        }
        std::vector<Point> new_ret(combined.begin(),
                                   combined.begin() + static_cast<long>(split) +
                                       1);
        std::vector<Point> new_reach(
            combined.begin() + static_cast<long>(split), combined.end());

        SweepContext ret_ctx = ctx;
        ret_ctx.approach_grasp.reset();
        SweepContext reach_ctx = ctx;
        reach_ctx.depart_grasp.reset();
        double after_len = 0.0;
        for (std::size_t j = 0; j + 1 < combined.size(); ++j) {
            after_len += distance(combined[j], combined[j + 1]);
        }
        if (after_len <= before_len + 1e-12 &&
            polyline_clear(ret_ctx, new_ret) &&
            polyline_clear(reach_ctx, new_reach)) {
            ret.waypoints = std::move(new_ret);
            reach.waypoints = std::move(new_reach);
        }
    }
    return from_triples(triples);
}

ManipulationPlan smooth_phase3(const ManipulationPlan& plan,
                               const SceneSpec& scene,
                               const Roadmap& roadmap) {
    std::vector<Triple> triples = to_triples(plan);
    bool changed = true;
    while (changed) {
        changed = false;
        const ManipulationPlan cur = from_triples(triples);
        const std::vector<Arrangement> occ = timeline(scene, cur);
        for (std::size_t s = 0; s < triples.size() && !changed; ++s) {
            const auto [f, t1] = *triples[s].carry.moved;
            // Nearest later move of the same object: the object parked at t1
            // stays there until the first later pickup from t1.
            std::size_t r = triples.size();
            for (std::size_t q = s + 1; q < triples.size(); ++q) {
                if (triples[q].carry.moved->first == t1) {
                    r = q;
                    break;
                }
            }
            if (r >= triples.size() || r == s + 1) {
                continue;  // no intermediate placement (phase 1 handles r==s+1)
            }
            const PoseId t2 = triples[r].carry.moved->second;
            if (t2 == f) {
                continue;
            }
            bool t2_free = !occ[s].count(t2);
            for (std::size_t q = s + 1; q < r && t2_free; ++q) {
                if (triples[q].carry.moved->first == t2 ||
                    triples[q].carry.moved->second == t2) {
                    t2_free = false;
                }
            }
            if (!t2_free) {
                continue;
            }
            // (I) a conflict-free direct manipulation path f -> t2 under the
            // world state at move s.
            std::set<PoseId> candidates = occ[s];
            candidates.erase(f);
            const MinConflictResult direct =
                min_conflict_path(roadmap, f, t2, candidates);
            if (direct.status != PathStatus::Ok ||
                !direct.path.conflict_set.empty()) {
                continue;
            }
            // (II) every intervening move stays collision-free with the
            // object at t2 instead of t1.
            bool intervening_ok = true;
            for (std::size_t q = s + 1; q < r && intervening_ok; ++q) {
                Arrangement world = occ[q];
                world.erase(t1);
                world.insert(t2);
                Triple probe = triples[q];
                stamp_moved(probe);
                intervening_ok =
                    polyline_clear(segment_context(scene, probe.reach, world),
                                   probe.reach.waypoints) &&
                    polyline_clear(segment_context(scene, probe.carry, world),
                                   probe.carry.waypoints) &&
                    polyline_clear(
                        segment_context(scene, probe.retract, world),
                        probe.retract.waypoints);
            }
            if (!intervening_ok) {
                continue;
            }
            ManipulationPlan replacement;
            append_move_segments(replacement, roadmap, direct.path,
                                 /*reversed=*/false, f, t2);
            std::vector<Triple> rebuilt = triples;
            rebuilt[s] = to_triples(replacement)[0];
            stamp_moved(rebuilt[s]);
            rebuilt.erase(rebuilt.begin() + static_cast<long>(r));
            if (from_triples(rebuilt).length() <=
                from_triples(triples).length() + 1e-12) {
                triples = std::move(rebuilt);
                changed = true;
            }
        }
    }
    return from_triples(triples);
}

ManipulationPlan smooth(const ManipulationPlan& plan, const SceneSpec& scene,
                        const Roadmap& roadmap, int passes) {
    ManipulationPlan cur = plan;
    for (int pass = 0; pass < std::max(passes, 1); ++pass) {
        cur = smooth_phase1(cur);
        cur = smooth_phase2(cur, scene);
        cur = smooth_phase3(cur, scene, roadmap);
    }
    cur = smooth_phase1(cur);  // phase 3 can create adjacent same-object moves
    return smooth_phase2(cur, scene, /*whole_trajectory=*/true);
}

}  // namespace rearr
