#include "rearr/roadmap.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

namespace rearr {

namespace {

using json = nlohmann::ordered_json;

bool sweep_clear_static(const SceneSpec& scene, Point a, Point b,
                        double radius) {
    if (!scene.workspace.contains_disc(a, radius) ||
        !scene.workspace.contains_disc(b, radius)) {
        return false;
    }
    for (const Polygon& obs : scene.obstacles) {
        if (swept_disc_hits_polygon(a, b, radius, obs)) {
            return false;
        }
    }
    return true;
}

double node_radius(const SceneSpec& scene, const RoadmapNode& n) {
    return n.mode == Mode::Transfer ? scene.carry_radius()
                                    : scene.gripper_radius;
}

void add_edge(Roadmap& r, int a, int b, bool transition) {
    RoadmapEdge e;
    e.a = a;
    e.b = b;
    e.length = distance(r.nodes[a].config, r.nodes[b].config);
    e.transition = transition;
    r.edges.push_back(e);
}

void build_adjacency(Roadmap& r) {
    r.adj.assign(r.nodes.size(), {});
    for (std::size_t i = 0; i < r.edges.size(); ++i) {
        r.adj[r.edges[i].a].push_back(static_cast<int>(i));
        r.adj[r.edges[i].b].push_back(static_cast<int>(i));
    }
}

}  // namespace

double edge_sweep_radius(const SceneSpec& scene, const RoadmapEdge& e,
                         const Roadmap& roadmap) {
    if (e.transition) {
        return scene.carry_radius();
    }
    return node_radius(scene, roadmap.nodes[e.a]);
}

bool edge_sweeps_pose(const Roadmap& roadmap, const SceneSpec& scene,
                      const RoadmapEdge& e, PoseId p) {
    const double radius = edge_sweep_radius(scene, e, roadmap);
    const Disc object{scene.pose(p).position, scene.object_radius};
    return swept_disc_hits_disc(roadmap.nodes[e.a].config,
                                roadmap.nodes[e.b].config, radius, object);
}

Roadmap build_roadmap(const SceneSpec& scene, int samples_per_mode,
                      int connection_neighbors, std::uint64_t seed) {
    if (samples_per_mode < 0 || connection_neighbors < 1) {
        throw RoadmapError("invalid roadmap parameters");
    }
    Roadmap r;
    r.scene_hash = scene.hash();

    auto push_node = [&](Point config, Mode mode, NodeKind kind,
                         std::optional<PoseId> anchor) {
        RoadmapNode n;
        n.id = static_cast<int>(r.nodes.size());
        n.config = config;
        n.mode = mode;
        n.kind = kind;
        n.anchor_pose = anchor;
        r.nodes.push_back(n);
        return n.id;
    };

    r.safe_node =
        push_node(scene.safe_config, Mode::Transit, NodeKind::Safe, {});

    // Transition pairs: one canonical grasp per pose, gripper centered on the
    // pose, approached from the direction of the safe configuration.
    for (const Pose& p : scene.pose_library) {
        const bool transit_ok = sweep_clear_static(
            scene, p.position, p.position, scene.gripper_radius);
        const bool transfer_ok = sweep_clear_static(
            scene, p.position, p.position, scene.carry_radius());
        if (!transit_ok || !transfer_ok) {
            r.unreachable.insert(p.id);
            continue;
        }
        TransitionPair pair;
        pair.transit_node =
            push_node(p.position, Mode::Transit, NodeKind::Transition, p.id);
        pair.transfer_node =
            push_node(p.position, Mode::Transfer, NodeKind::Transition, p.id);
        add_edge(r, pair.transit_node, pair.transfer_node, true);

        Point dir = scene.safe_config - p.position;
        const double len = norm(dir);
        dir = (len > kGeomEps) ? (1.0 / len) * dir : Point{0.0, -1.0};
        const Point approach = p.position + scene.standoff() * dir;
        if (sweep_clear_static(scene, approach, approach,
                               scene.gripper_radius)) {
            pair.approach_node =
                push_node(approach, Mode::Transit, NodeKind::Approach, p.id);
            if (sweep_clear_static(scene, approach, p.position,
                                   scene.gripper_radius)) {
                add_edge(r, pair.approach_node, pair.transit_node, false);
            }
        }
        r.transitions[p.id] = pair;
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(scene.workspace.xmin,
                                              scene.workspace.xmax);
    std::uniform_real_distribution<double> uy(scene.workspace.ymin,
                                              scene.workspace.ymax);
    for (Mode mode : {Mode::Transit, Mode::Transfer}) {
        const double radius = mode == Mode::Transfer ? scene.carry_radius()
                                                     : scene.gripper_radius;
        int placed = 0;
        long attempts = 0;
        const long budget = 200L * std::max(samples_per_mode, 1);
        while (placed < samples_per_mode && attempts++ < budget) {
            Point c{ux(rng), uy(rng)};
            if (sweep_clear_static(scene, c, c, radius)) {
                push_node(c, mode, NodeKind::Sample, {});
                ++placed;
            }
        }
    }

    // k-nearest connection within each mode.
    std::set<std::pair<int, int>> linked;
    for (const RoadmapEdge& e : r.edges) {
        linked.insert({std::min(e.a, e.b), std::max(e.a, e.b)});
    }
    for (const RoadmapNode& n : r.nodes) {
        std::vector<std::pair<double, int>> near;
        for (const RoadmapNode& m : r.nodes) {
            if (m.id == n.id || m.mode != n.mode) {
                continue;
            }
            near.push_back({distance(n.config, m.config), m.id});
        }
        std::sort(near.begin(), near.end());
        const int limit = std::min<int>(connection_neighbors,
                                        static_cast<int>(near.size()));
        const double radius = node_radius(scene, n);
        for (int i = 0; i < limit; ++i) {
            const int other = near[i].second;
            const auto key = std::minmax(n.id, other);
            if (linked.count({key.first, key.second})) {
                continue;
            }
            if (sweep_clear_static(scene, n.config, r.nodes[other].config,
                                   radius)) {
                add_edge(r, key.first, key.second, false);
                linked.insert({key.first, key.second});
            }
        }
    }

    build_adjacency(r);
    annotate_conflicts(r, scene);
    return r;
}

void annotate_conflicts(Roadmap& roadmap, const SceneSpec& scene) {
    for (RoadmapEdge& e : roadmap.edges) {
        e.conflicts.clear();
        const auto& na = roadmap.nodes[e.a];
        const auto& nb = roadmap.nodes[e.b];
        for (const Pose& p : scene.pose_library) {
            if ((na.anchor_pose && *na.anchor_pose == p.id) ||
                (nb.anchor_pose && *nb.anchor_pose == p.id)) {
                continue;  // an edge never conflicts with its own grasp
            }
            if (edge_sweeps_pose(roadmap, scene, e, p.id)) {
                e.conflicts.insert(p.id);
            }
        }
    }
}

namespace {

constexpr int kCacheVersion = 1;

const char* mode_name(Mode m) {
    return m == Mode::Transit ? "transit" : "transfer";
}

const char* kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Safe: return "safe";
        case NodeKind::Sample: return "sample";
        case NodeKind::Transition: return "transition";
        case NodeKind::Approach: return "approach";
    }
    return "sample";
}

Mode parse_mode(const std::string& s) {
    if (s == "transit") return Mode::Transit;
    if (s == "transfer") return Mode::Transfer;
    throw RoadmapError("corrupt roadmap cache: bad mode '" + s + "'");
}

NodeKind parse_kind(const std::string& s) {
    if (s == "safe") return NodeKind::Safe;
    if (s == "sample") return NodeKind::Sample;
    if (s == "transition") return NodeKind::Transition;
    if (s == "approach") return NodeKind::Approach;
    throw RoadmapError("corrupt roadmap cache: bad node kind '" + s + "'");
}

}  // namespace

std::string save_roadmap(const Roadmap& roadmap) {
    json j;
    j["format_version"] = kCacheVersion;
    j["scene_hash"] = roadmap.scene_hash;
    j["safe_node"] = roadmap.safe_node;
    j["nodes"] = json::array();
    for (const RoadmapNode& n : roadmap.nodes) {
        json jn = {{"id", n.id},   {"x", n.config.x},
                   {"y", n.config.y}, {"mode", mode_name(n.mode)},
                   {"kind", kind_name(n.kind)}};
        if (n.anchor_pose) {
            jn["anchor"] = *n.anchor_pose;
        }
        j["nodes"].push_back(jn);
    }
    j["edges"] = json::array();
    for (const RoadmapEdge& e : roadmap.edges) {
        j["edges"].push_back(
            {{"a", e.a},
             {"b", e.b},
             {"length", e.length},
             {"transition", e.transition},
             {"conflicts",
              std::vector<PoseId>(e.conflicts.begin(), e.conflicts.end())}});
    }
    j["unreachable"] = std::vector<PoseId>(roadmap.unreachable.begin(),
                                           roadmap.unreachable.end());
    return j.dump();
}

Roadmap load_roadmap(const std::string& content, const SceneSpec& scene) {
    json j;
    try {
        j = json::parse(content);
    } catch (const json::parse_error& e) {
        throw RoadmapError(std::string("corrupt roadmap cache: ") + e.what());
    }
    Roadmap r;
    try {
        if (j.at("format_version").get<int>() != kCacheVersion) {
            throw RoadmapError("unsupported roadmap cache version");
        }
        r.scene_hash = j.at("scene_hash").get<std::uint64_t>();
        if (r.scene_hash != scene.hash()) {
            throw RoadmapError(
                "roadmap cache was built for a different scene (hash mismatch)");
        }
        r.safe_node = j.at("safe_node");
        for (const auto& jn : j.at("nodes")) {
            RoadmapNode n;
            n.id = jn.at("id");
            n.config = {jn.at("x"), jn.at("y")};
            n.mode = parse_mode(jn.at("mode"));
            n.kind = parse_kind(jn.at("kind"));
            if (jn.contains("anchor")) {
                n.anchor_pose = PoseId(jn.at("anchor"));
            }
            if (n.id != static_cast<int>(r.nodes.size())) {
                throw RoadmapError("corrupt roadmap cache: node ids not dense");
            }
            r.nodes.push_back(n);
        }
        for (const auto& je : j.at("edges")) {
            RoadmapEdge e;
            e.a = je.at("a");
            e.b = je.at("b");
            e.length = je.at("length");
            e.transition = je.at("transition");
            for (const auto& c : je.at("conflicts")) {
                e.conflicts.insert(PoseId(c));
            }
            if (e.a < 0 || e.b < 0 ||
                e.a >= static_cast<int>(r.nodes.size()) ||
                e.b >= static_cast<int>(r.nodes.size())) {
                throw RoadmapError("corrupt roadmap cache: edge out of range");
            }
            r.edges.push_back(e);
        }
        for (const auto& u : j.at("unreachable")) {
            r.unreachable.insert(PoseId(u));
        }
    } catch (const json::exception& e) {
        throw RoadmapError(std::string("corrupt roadmap cache: ") + e.what());
    }

    // Rebuild the derived transition index.
    for (const RoadmapNode& n : r.nodes) {
        if (!n.anchor_pose) {
            continue;
        }
        TransitionPair& pair = r.transitions[*n.anchor_pose];
        if (n.kind == NodeKind::Transition) {
            (n.mode == Mode::Transit ? pair.transit_node : pair.transfer_node) =
                n.id;
        } else if (n.kind == NodeKind::Approach) {
            pair.approach_node = n.id;
        }
    }
    for (auto it = r.transitions.begin(); it != r.transitions.end();) {
        if (it->second.transit_node < 0 || it->second.transfer_node < 0) {
            it = r.transitions.erase(it);
        } else {
            ++it;
        }
    }
    build_adjacency(r);
    return r;
}

}  // namespace rearr
