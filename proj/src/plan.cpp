#include "rearr/plan.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace rearr {

namespace {

using json = nlohmann::ordered_json;

const char* action_name(Action a) {
    switch (a) {
        case Action::Reach: return "reach";
        case Action::Carry: return "carry";
        case Action::Retract: return "retract";
    }
    return "reach";
}

Action parse_action(const std::string& s) {
    if (s == "reach") return Action::Reach;
    if (s == "carry") return Action::Carry;
    if (s == "retract") return Action::Retract;
    throw std::runtime_error("bad plan action '" + s + "'");
}

bool near(Point a, Point b) { return distance(a, b) <= 1e-6; }

}  // namespace

double PlanSegment::length() const {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
        total += distance(waypoints[i], waypoints[i + 1]);
    }
    return total;
}

double ManipulationPlan::length() const {
    double total = 0.0;
    for (const PlanSegment& s : segments) {
        total += s.length();
    }
    return total;
}

std::string save_plan(const ManipulationPlan& plan) {
    json j;
    j["segments"] = json::array();
    for (const PlanSegment& s : plan.segments) {
        json js;
        js["mode"] = s.mode == Mode::Transit ? "transit" : "transfer";
        js["action"] = action_name(s.action);
        js["waypoints"] = json::array();
        for (const Point& w : s.waypoints) {
            js["waypoints"].push_back({w.x, w.y});
        }
        if (s.moved) {
            js["from"] = s.moved->first;
            js["to"] = s.moved->second;
        }
        j["segments"].push_back(js);
    }
    return j.dump(2);
}

ManipulationPlan load_plan(const std::string& content) {
    json j;
    try {
        j = json::parse(content);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("plan parse error: ") + e.what());
    }
    ManipulationPlan plan;
    for (const auto& js : j.at("segments")) {
        PlanSegment s;
        s.mode = js.at("mode") == "transfer" ? Mode::Transfer : Mode::Transit;
        s.action = parse_action(js.at("action"));
        for (const auto& w : js.at("waypoints")) {
            s.waypoints.push_back({w.at(0), w.at(1)});
        }
        if (js.contains("from")) {
            s.moved = {{PoseId(js.at("from")), PoseId(js.at("to"))}};
        }
        plan.segments.push_back(std::move(s));
    }
    return plan;
}

bool sweep_leg_clear(const SweepContext& ctx, Point a, Point b) {
    const SceneSpec& scene = *ctx.scene;
    if (!scene.workspace.contains_disc(a, ctx.radius) ||
        !scene.workspace.contains_disc(b, ctx.radius)) {
        return false;
    }
    for (const Polygon& obs : scene.obstacles) {
        if (swept_disc_hits_polygon(a, b, ctx.radius, obs)) {
            return false;
        }
    }
    const double standoff = scene.standoff();
    for (const Point& obj : ctx.objects) {
        if (!swept_disc_hits_disc(a, b, ctx.radius,
                                  {obj, scene.object_radius})) {
            continue;
        }
        const double da = distance(a, obj);
        const double db = distance(b, obj);
        // Monotone entry into (or exit out of) a grasp footprint is the
        // legal part of reaching and retracting.
        if (ctx.approach_grasp && near(*ctx.approach_grasp, obj) &&
            db <= standoff + 1e-9 && da >= db - 1e-9) {
            continue;
        }
        if (ctx.depart_grasp && near(*ctx.depart_grasp, obj) &&
            da <= standoff + 1e-9 && db >= da - 1e-9) {
            continue;
        }
        return false;
    }
    return true;
}

namespace {

struct Violation {
    int segment;
    std::string message;
};

std::optional<Violation> check_segment_sweeps(const SceneSpec& scene,
                                              const PlanSegment& s, int index,
                                              const Arrangement& occupied) {
    SweepContext ctx;
    ctx.scene = &scene;
    switch (s.action) {
        case Action::Reach:
            ctx.radius = scene.gripper_radius;
            // moved is set by the caller contract
            ctx.approach_grasp = scene.pose(s.moved->first).position;
            break;
        case Action::Carry:
            ctx.radius = scene.carry_radius();
            break;
        case Action::Retract:
            ctx.radius = scene.gripper_radius;
            ctx.depart_grasp = scene.pose(s.moved->first).position;
            break;
    }
    for (PoseId p : occupied) {
        ctx.objects.push_back(scene.pose(p).position);
    }
    for (std::size_t i = 0; i + 1 < s.waypoints.size(); ++i) {
        if (!sweep_leg_clear(ctx, s.waypoints[i], s.waypoints[i + 1])) {
            return Violation{index, "collision on leg " + std::to_string(i)};
        }
    }
    return std::nullopt;
}

}  // namespace

ValidationResult validate_plan(const SceneSpec& scene,
                               const ManipulationPlan& plan) {
    auto fail = [](int seg, const std::string& msg) {
        return ValidationResult{false, seg, msg};
    };
    if (plan.segments.size() % 3 != 0) {
        return fail(-1, "plan is not a sequence of reach/carry/retract triples");
    }
    Arrangement occupied = scene.start;
    for (std::size_t t = 0; t < plan.segments.size(); t += 3) {
        const int i = static_cast<int>(t);
        const PlanSegment& reach = plan.segments[t];
        const PlanSegment& carry = plan.segments[t + 1];
        const PlanSegment& retract = plan.segments[t + 2];
        if (reach.action != Action::Reach || reach.mode != Mode::Transit) {
            return fail(i, "expected a transit reach segment");
        }
        if (carry.action != Action::Carry || carry.mode != Mode::Transfer) {
            return fail(i + 1, "expected a transfer carry segment");
        }
        if (retract.action != Action::Retract ||
            retract.mode != Mode::Transit) {
            return fail(i + 2, "expected a transit retract segment");
        }
        if (!carry.moved) {
            return fail(i + 1, "carry segment without moved poses");
        }
        const auto [from, to] = *carry.moved;
        if (!occupied.count(from)) {
            return fail(i + 1, "pickup from an empty pose");
        }
        if (occupied.count(to)) {
            return fail(i + 1, "placement onto an occupied pose");
        }
        const Point from_pos = scene.pose(from).position;
        const Point to_pos = scene.pose(to).position;
        if (reach.waypoints.empty() || carry.waypoints.empty() ||
            retract.waypoints.empty()) {
            return fail(i, "empty segment");
        }
        if (!near(reach.waypoints.back(), from_pos)) {
            return fail(i, "mode change away from the grasp configuration");
        }
        if (!near(carry.waypoints.front(), from_pos) ||
            !near(carry.waypoints.back(), to_pos)) {
            return fail(i + 1, "carry does not span its grasp configurations");
        }
        if (!near(retract.waypoints.front(), to_pos)) {
            return fail(i + 2, "mode change away from the grasp configuration");
        }
        if (t > 0 && !near(plan.segments[t - 1].waypoints.back(),
                           reach.waypoints.front())) {
            return fail(i, "discontinuous trajectory");
        }

        // Reach: target object still placed, approach exemption applies.
        PlanSegment reach_ctx = reach;
        reach_ctx.moved = {{from, to}};
        if (auto v = check_segment_sweeps(scene, reach_ctx, i, occupied)) {
            return fail(v->segment, v->message);
        }
        occupied.erase(from);
        if (auto v = check_segment_sweeps(scene, carry, i + 1, occupied)) {
            return fail(v->segment, v->message);
        }
        occupied.insert(to);
        PlanSegment retract_ctx = retract;
        retract_ctx.moved = {{to, from}};  // exemption anchored at `to`
        if (auto v =
                check_segment_sweeps(scene, retract_ctx, i + 2, occupied)) {
            return fail(v->segment, v->message);
        }
    }
    if (occupied != scene.goal) {
        return fail(static_cast<int>(plan.segments.size()) - 1,
                    "plan does not reach the goal arrangement");
    }
    return {};
}

std::map<PoseId, int> grasp_counts(const SceneSpec& scene,
                                   const ManipulationPlan& plan) {
    // Objects are unlabeled; the plan induces labels by which physical disc
    // each carry displaces. Labels are keyed by an object's start pose.
    std::map<PoseId, PoseId> label_at;  // current pose -> start pose label
    for (PoseId p : scene.start) {
        label_at[p] = p;
    }
    std::map<PoseId, int> counts;
    for (PoseId p : scene.start) {
        counts[p] = 0;
    }
    for (const PlanSegment& s : plan.segments) {
        if (s.action != Action::Carry || !s.moved) {
            continue;
        }
        const auto [from, to] = *s.moved;
        const PoseId label = label_at.at(from);
        label_at.erase(from);
        label_at[to] = label;
        ++counts[label];
    }
    return counts;
}

int max_grasps_per_object(const SceneSpec& scene,
                          const ManipulationPlan& plan) {
    int best = 0;
    for (const auto& [label, n] : grasp_counts(scene, plan)) {
        best = std::max(best, n);
    }
    return best;
}

}  // namespace rearr
