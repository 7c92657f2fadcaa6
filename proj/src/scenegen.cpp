#include "rearr/scenegen.hpp"

#include <algorithm>
#include <optional>

namespace rearr {

namespace {

// Picks a k-subset of library poses forming a valid arrangement, by seeded
// shuffle and greedy compatibility. Occupied poses additionally keep grasp
// clearance from each other (a pair closer than gripper + object radius is
// mutually ungraspable — a deadlock no planner can undo). Returns nullopt
// when the shuffle order cannot complete k picks.
std::optional<Arrangement> draw_arrangement(const SceneSpec& scene, int k,
                                            std::mt19937_64& rng) {
    const double min_sep =
        std::max(scene.standoff(),
                 scene.carry_radius() + scene.object_radius) +
        1e-6;
    std::vector<PoseId> order;
    order.reserve(scene.pose_library.size());
    for (const Pose& p : scene.pose_library) {
        order.push_back(p.id);
    }
    std::shuffle(order.begin(), order.end(), rng);
    Arrangement picked;
    for (PoseId id : order) {
        bool compatible = true;
        for (PoseId other : picked) {
            if (distance(scene.pose(id).position,
                         scene.pose(other).position) < min_sep) {
                compatible = false;
                break;
            }
        }
        if (compatible) {
            picked.insert(id);
            if (static_cast<int>(picked.size()) == k) {
                return picked;
            }
        }
    }
    return std::nullopt;
}

Polygon rect_obstacle(Point center, double hx, double hy) {
    Polygon poly;
    poly.vertices = {{center.x - hx, center.y - hy},
                     {center.x + hx, center.y - hy},
                     {center.x + hx, center.y + hy},
                     {center.x - hx, center.y + hy}};
    poly.normalize();
    return poly;
}

}  // namespace

SceneSpec generate_scene(const SceneGenParams& params, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Rect& w = params.workspace;
    const double width = w.xmax - w.xmin;
    const double height = w.ymax - w.ymin;

    for (int attempt = 0; attempt < 100; ++attempt) {
        SceneSpec s;
        s.workspace = w;
        s.object_radius = params.object_radius;
        s.gripper_radius = params.gripper_radius;
        s.k = params.k;

        // Clutter kept off the walls so the boundary stays navigable.
        std::uniform_real_distribution<double> ucx(w.xmin + 0.25 * width,
                                                   w.xmax - 0.25 * width);
        std::uniform_real_distribution<double> ucy(w.ymin + 0.25 * height,
                                                   w.ymax - 0.25 * height);
        std::uniform_real_distribution<double> uhalf(0.03 * width,
                                                     0.08 * width);
        for (int i = 0; i < params.obstacle_count; ++i) {
            s.obstacles.push_back(
                rect_obstacle({ucx(rng), ucy(rng)}, uhalf(rng), uhalf(rng)));
        }

        // Poses are sampled with grasp clearance (the carrying footprint,
        // which dominates the bare object), so every library pose is
        // roadmap-reachable by construction.
        std::uniform_real_distribution<double> ux(w.xmin, w.xmax);
        std::uniform_real_distribution<double> uy(w.ymin, w.ymax);
        const double grasp_radius = std::max(params.object_radius,
                                             params.gripper_radius) +
                                    1e-6;
        bool library_ok = true;
        for (int tries = 0;
             static_cast<int>(s.pose_library.size()) < params.pose_count;
             ++tries) {
            if (tries >= 1000 * params.pose_count) {
                library_ok = false;
                break;
            }
            Point c{ux(rng), uy(rng)};
            if (!w.contains_disc(c, grasp_radius)) {
                continue;
            }
            bool clear = true;
            for (const Polygon& obs : s.obstacles) {
                if (disc_hits_polygon(c, grasp_radius, obs)) {
                    clear = false;
                    break;
                }
            }
            if (clear) {
                s.pose_library.push_back(
                    {static_cast<PoseId>(s.pose_library.size()), c, 0.0});
            }
        }
        if (!library_ok) {
            continue;  // clutter too dense for the library; redraw
        }
        bool safe_found = false;
        for (int i = 0; i < 2000 && !safe_found; ++i) {
            Point c{ux(rng), uy(rng)};
            if (!w.contains_disc(c, s.gripper_radius)) {
                continue;
            }
            bool clear = true;
            for (const Polygon& obs : s.obstacles) {
                if (disc_hits_polygon(c, s.gripper_radius, obs)) {
                    clear = false;
                    break;
                }
            }
            for (const Pose& p : s.pose_library) {
                if (clear &&
                    disc_disc_overlap({c, s.gripper_radius},
                                      {p.position, s.object_radius})) {
                    clear = false;
                }
            }
            if (clear) {
                s.safe_config = c;
                safe_found = true;
            }
        }
        if (!safe_found) {
            continue;
        }

        const auto start = draw_arrangement(s, params.k, rng);
        if (!start) {
            continue;
        }
        s.start = *start;

        if (params.single_transfer) {
            // Move one object to a pose compatible with the k-1 that stay.
            std::vector<PoseId> from(s.start.begin(), s.start.end());
            std::shuffle(from.begin(), from.end(), rng);
            std::vector<PoseId> to;
            for (const Pose& p : s.pose_library) {
                if (!s.start.count(p.id)) {
                    to.push_back(p.id);
                }
            }
            std::shuffle(to.begin(), to.end(), rng);
            for (PoseId f : from) {
                for (PoseId t : to) {
                    Arrangement goal = s.start;
                    goal.erase(f);
                    goal.insert(t);
                    if (s.is_valid_arrangement(goal)) {
                        s.goal = goal;
                        break;
                    }
                }
                if (!s.goal.empty()) {
                    break;
                }
            }
            if (s.goal.empty()) {
                continue;
            }
        } else {
            const auto goal = draw_arrangement(s, params.k, rng);
            if (!goal) {
                continue;
            }
            s.goal = *goal;
        }

        try {
            return load_scene(s.serialize());  // full-validator round trip
        } catch (const SceneError&) {
            continue;
        }
    }
    throw SceneError("scene generation exhausted its attempt budget");
}

}  // namespace rearr
