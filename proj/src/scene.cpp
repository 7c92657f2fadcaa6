#include "rearr/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rearr {

namespace {

using json = nlohmann::ordered_json;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

const Pose& SceneSpec::pose(PoseId id) const {
    auto it = std::lower_bound(
        pose_library.begin(), pose_library.end(), id,
        [](const Pose& p, PoseId v) { return p.id < v; });
    if (it == pose_library.end() || it->id != id) {
        throw SceneError("unknown pose id " + std::to_string(id));
    }
    return *it;
}

bool SceneSpec::has_pose(PoseId id) const {
    return std::any_of(pose_library.begin(), pose_library.end(),
                       [&](const Pose& p) { return p.id == id; });
}

double SceneSpec::carry_radius() const {
    return std::max(gripper_radius, object_radius);
}

double SceneSpec::standoff() const {
    return gripper_radius + object_radius;
}

bool SceneSpec::pose_placement_free(Point position) const {
    if (!workspace.contains_disc(position, object_radius)) {
        return false;
    }
    for (const Polygon& obs : obstacles) {
        // Resting in contact with an obstacle face is allowed.
        if (disc_penetrates_polygon(position, object_radius, obs)) {
            return false;
        }
    }
    return true;
}

bool SceneSpec::is_valid_arrangement(const Arrangement& a) const {
    std::vector<Point> centers;
    centers.reserve(a.size());
    for (PoseId id : a) {
        centers.push_back(pose(id).position);
    }
    for (std::size_t i = 0; i < centers.size(); ++i) {
        if (!pose_placement_free(centers[i])) {
            return false;
        }
        for (std::size_t j = i + 1; j < centers.size(); ++j) {
            if (disc_disc_overlap({centers[i], object_radius},
                                  {centers[j], object_radius})) {
                return false;
            }
        }
    }
    return true;
}

std::string SceneSpec::serialize() const {
    json j;
    j["workspace"] = {workspace.xmin, workspace.ymin, workspace.xmax,
                      workspace.ymax};
    j["obstacles"] = json::array();
    for (const Polygon& obs : obstacles) {
        json ring = json::array();
        for (const Point& v : obs.vertices) {
            ring.push_back({v.x, v.y});
        }
        j["obstacles"].push_back(ring);
    }
    j["object_radius"] = object_radius;
    j["gripper_radius"] = gripper_radius;
    j["poses"] = json::array();
    for (const Pose& p : pose_library) {
        j["poses"].push_back(
            {{"id", p.id}, {"x", p.position.x}, {"y", p.position.y},
             {"theta", p.theta}});
    }
    j["safe"] = {safe_config.x, safe_config.y};
    j["start"] = json(std::vector<PoseId>(start.begin(), start.end()));
    j["goal"] = json(std::vector<PoseId>(goal.begin(), goal.end()));
    j["k"] = k;
    return j.dump(2);
}

std::uint64_t SceneSpec::hash() const { return fnv1a(serialize()); }

namespace {

void validate(const SceneSpec& s) {
    if (s.object_radius <= 0.0 || s.gripper_radius <= 0.0) {
        throw SceneError("object_radius and gripper_radius must be > 0");
    }
    if (s.workspace.xmax <= s.workspace.xmin ||
        s.workspace.ymax <= s.workspace.ymin) {
        throw SceneError("workspace rectangle is empty");
    }
    if (s.k < 1) {
        throw SceneError("k must be >= 1");
    }
    std::set<PoseId> seen;
    for (const Pose& p : s.pose_library) {
        if (!seen.insert(p.id).second) {
            throw SceneError("duplicate pose id " + std::to_string(p.id));
        }
        if (!s.pose_placement_free(p.position)) {
            throw SceneError("pose " + std::to_string(p.id) +
                             " is not collision-free");
        }
    }
    for (const Arrangement* a : {&s.start, &s.goal}) {
        const char* name = (a == &s.start) ? "start" : "goal";
        if (static_cast<int>(a->size()) != s.k) {
            throw SceneError(std::string(name) + " arrangement size != k");
        }
        for (PoseId id : *a) {
            if (!seen.count(id)) {
                throw SceneError(std::string(name) + " references unknown pose " +
                                 std::to_string(id));
            }
        }
        if (!s.is_valid_arrangement(*a)) {
            throw InfeasibleError(std::string(name) +
                                  " arrangement is not collision-free");
        }
    }
    // The gripper parked at the safe configuration must not overlap the
    // object footprint of any library pose.
    for (const Pose& p : s.pose_library) {
        if (disc_disc_overlap({s.safe_config, s.gripper_radius},
                              {p.position, s.object_radius})) {
            throw SceneError("safe configuration overlaps pose " +
                             std::to_string(p.id));
        }
    }
    if (!s.workspace.contains_disc(s.safe_config, s.gripper_radius)) {
        throw SceneError("safe configuration outside workspace");
    }
    for (const Polygon& obs : s.obstacles) {
        if (disc_hits_polygon(s.safe_config, s.gripper_radius, obs)) {
            throw SceneError("safe configuration collides with an obstacle");
        }
    }
}

}  // namespace

SceneSpec load_scene(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SceneError(std::string("scene parse error: ") + e.what());
    }
    SceneSpec s;
    try {
        const auto& w = j.at("workspace");
        s.workspace = {w.at(0), w.at(1), w.at(2), w.at(3)};
        for (const auto& ring : j.at("obstacles")) {
            Polygon poly;
            for (const auto& v : ring) {
                poly.vertices.push_back({v.at(0), v.at(1)});
            }
            poly.normalize();
            s.obstacles.push_back(std::move(poly));
        }
        s.object_radius = j.at("object_radius");
        s.gripper_radius = j.at("gripper_radius");
        for (const auto& p : j.at("poses")) {
            s.pose_library.push_back(
                {p.at("id"), {p.at("x"), p.at("y")},
                 p.value("theta", 0.0)});
        }
        std::sort(s.pose_library.begin(), s.pose_library.end(),
                  [](const Pose& a, const Pose& b) { return a.id < b.id; });
        s.safe_config = {j.at("safe").at(0), j.at("safe").at(1)};
        for (const auto& id : j.at("start")) s.start.insert(PoseId(id));
        for (const auto& id : j.at("goal")) s.goal.insert(PoseId(id));
        s.k = j.at("k");
    } catch (const json::exception& e) {
        throw SceneError(std::string("scene field error: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw SceneError(std::string("scene geometry error: ") + e.what());
    }
    validate(s);
    return s;
}

SceneSpec load_scene_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw SceneError("cannot open scene file: " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return load_scene(ss.str());
}

std::vector<Pose> sample_pose_library(const Rect& bounds,
                                      const std::vector<Polygon>& obstacles,
                                      double object_radius, int count,
                                      std::uint64_t seed) {
    if (count < 1) {
        throw SceneError("pose sample count must be >= 1");
    }
    SceneSpec probe;
    probe.workspace = bounds;
    probe.obstacles = obstacles;
    probe.object_radius = object_radius;
    probe.gripper_radius = object_radius;  // unused by the placement test

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(bounds.xmin, bounds.xmax);
    std::uniform_real_distribution<double> uy(bounds.ymin, bounds.ymax);

    std::vector<Pose> out;
    const long budget = 1000L * count;
    long attempts = 0;
    while (static_cast<int>(out.size()) < count) {
        if (attempts++ >= budget) {
            throw SceneError("pose sampling exhausted after " +
                             std::to_string(budget) + " attempts");
        }
        Point c{ux(rng), uy(rng)};
        if (probe.pose_placement_free(c)) {
            out.push_back({static_cast<PoseId>(out.size()), c, 0.0});
        }
    }
    return out;
}

}  // namespace rearr
