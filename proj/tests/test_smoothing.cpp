#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include <json.hpp>

#include "rearr/scenegen.hpp"
#include "rearr/solver.hpp"

using namespace rearr;
using json = nlohmann::json;

namespace {

// Open tabletop: a row of slots, two parking spots, one tight slot P (id 5)
// sitting 0.08 above the row so a carry along the row cannot pass it.
SceneSpec tabletop(const std::vector<PoseId>& start,
                   const std::vector<PoseId>& goal) {
    json j;
    j["workspace"] = {0.0, 0.0, 1.0, 1.0};
    j["obstacles"] = json::array();
    j["object_radius"] = 0.04;
    j["gripper_radius"] = 0.05;
    j["poses"] = {{{"id", 0}, {"x", 0.20}, {"y", 0.50}, {"theta", 0.0}},
                  {{"id", 1}, {"x", 0.50}, {"y", 0.50}, {"theta", 0.0}},
                  {{"id", 2}, {"x", 0.80}, {"y", 0.50}, {"theta", 0.0}},
                  {{"id", 3}, {"x", 0.30}, {"y", 0.20}, {"theta", 0.0}},
                  {{"id", 4}, {"x", 0.70}, {"y", 0.20}, {"theta", 0.0}},
                  {{"id", 5}, {"x", 0.50}, {"y", 0.58}, {"theta", 0.0}}};
    j["safe"] = {0.50, 0.85};
    j["start"] = start;
    j["goal"] = goal;
    j["k"] = static_cast<int>(start.size());
    return load_scene(j.dump());
}

// One reach/carry/retract triple realized through the roadmap; requires a
// conflict-free route under the given occupancy.
void add_move(ManipulationPlan& plan, const Roadmap& roadmap, PoseId from,
              PoseId to, const Arrangement& occupied) {
    std::set<PoseId> candidates = occupied;
    candidates.erase(from);
    candidates.erase(to);
    const MinConflictResult res =
        min_conflict_path(roadmap, from, to, candidates);
    REQUIRE(res.status == PathStatus::Ok);
    REQUIRE(res.path.conflict_set.empty());
    append_move_segments(plan, roadmap, res.path, false, from, to);
}

int moves_in(const ManipulationPlan& plan) {
    return static_cast<int>(plan.segments.size()) / 3;
}

}  // namespace

TEST_CASE("phases are identities on the empty plan") {
    const SceneSpec s = tabletop({0}, {0});
    const Roadmap r = build_roadmap(s, 200, 8, 1);
    const ManipulationPlan empty;
    CHECK(smooth_phase1(empty).empty());
    CHECK(smooth_phase2(empty, s).empty());
    CHECK(smooth_phase3(empty, s, r).empty());
    CHECK(smooth(empty, s, r).empty());
}

TEST_CASE("phase 1 leaves distinct-object sequences alone") {
    const SceneSpec s = tabletop({0, 3}, {2, 4});
    const Roadmap r = build_roadmap(s, 300, 10, 1);
    ManipulationPlan plan;
    add_move(plan, r, 0, 2, {0, 3});
    add_move(plan, r, 3, 4, {2, 3});
    const ManipulationPlan out = smooth_phase1(plan);
    CHECK(out.segments.size() == plan.segments.size());
    CHECK(validate_plan(s, out).ok);
}

TEST_CASE("phase 1 fuses consecutive moves of one object") {
    const SceneSpec s = tabletop({0}, {2});
    const Roadmap r = build_roadmap(s, 300, 10, 1);
    ManipulationPlan plan;
    add_move(plan, r, 0, 1, {0});
    add_move(plan, r, 1, 2, {1});
    REQUIRE(moves_in(plan) == 2);
    REQUIRE(validate_plan(s, plan).ok);

    const ManipulationPlan out = smooth_phase1(plan);
    CHECK(moves_in(out) == 1);
    CHECK(out.segments[1].moved == std::pair<PoseId, PoseId>{0, 2});
    CHECK(validate_plan(s, out).ok);
    CHECK(out.length() < plan.length());
}

TEST_CASE("phase 1 deletes no-op cycles outright") {
    const SceneSpec s = tabletop({0}, {0});
    const Roadmap r = build_roadmap(s, 300, 10, 1);
    ManipulationPlan plan;
    add_move(plan, r, 0, 1, {0});
    add_move(plan, r, 1, 0, {1});
    REQUIRE(validate_plan(s, plan).ok);
    const ManipulationPlan out = smooth_phase1(plan);
    CHECK(out.empty());
    CHECK(validate_plan(s, out).ok);
}

TEST_CASE("phase 2 straightens an open-space dog-leg") {
    const SceneSpec s = tabletop({0}, {2});
    const Roadmap r = build_roadmap(s, 300, 10, 1);
    ManipulationPlan plan;
    add_move(plan, r, 0, 2, {0});
    REQUIRE(validate_plan(s, plan).ok);

    // Inject a detour into the carry; nothing blocks the row, so phase 2
    // must recover (at least) the original length.
    ManipulationPlan bent = plan;
    std::vector<Point>& w = bent.segments[1].waypoints;
    w.insert(w.begin() + 1, Point{0.50, 0.30});
    REQUIRE(validate_plan(s, bent).ok);
    REQUIRE(bent.length() > plan.length());

    const ManipulationPlan out = smooth_phase2(bent, s);
    CHECK(validate_plan(s, out).ok);
    CHECK(out.length() <= plan.length() + 1e-9);
}

TEST_CASE("phase 2 keeps the detour around a blocking object") {
    // Slot 5 hovers over the row between 0 and 2; with it occupied the carry
    // must bend around it and the shortcut has to respect that.
    const SceneSpec s = tabletop({0, 5}, {2, 5});
    const Roadmap r = build_roadmap(s, 300, 10, 1);
    ManipulationPlan plan;
    add_move(plan, r, 0, 2, {0, 5});
    REQUIRE(validate_plan(s, plan).ok);

    const ManipulationPlan out = smooth_phase2(plan, s);
    CHECK(validate_plan(s, out).ok);
    // The straight carry 0 -> 2 passes within 0.08 of slot 5; footprint
    // 0.05 + 0.04 + 0.04 rules it out, so some detour length must remain.
    const double direct =
        distance(s.pose(0).position, s.pose(2).position);
    double carry = 0.0;
    for (const PlanSegment& seg : out.segments) {
        if (seg.action == Action::Carry) {
            carry += seg.length();
        }
    }
    CHECK(carry > direct + 1e-6);
}

TEST_CASE("phase 2 is idempotent at its fixpoint") {
    const SceneSpec s = tabletop({0, 3}, {2, 4});
    const Roadmap r = build_roadmap(s, 300, 10, 1);
    ManipulationPlan plan;
    add_move(plan, r, 0, 2, {0, 3});
    add_move(plan, r, 3, 4, {2, 3});
    const ManipulationPlan once = smooth_phase2(plan, s);
    const ManipulationPlan twice = smooth_phase2(once, s);
    CHECK(twice.length() == doctest::Approx(once.length()));
    REQUIRE(twice.segments.size() == once.segments.size());
    for (std::size_t i = 0; i < once.segments.size(); ++i) {
        CHECK(twice.segments[i].waypoints.size() ==
              once.segments[i].waypoints.size());
    }
}

TEST_CASE("phase 3 reroutes a temporarily parked object") {
    // Object one parks at 1, object two does its move, object one continues
    // to 2 -- but 0 -> 2 was free all along.
    const SceneSpec s = tabletop({0, 3}, {2, 4});
    const Roadmap r = build_roadmap(s, 300, 10, 1);
    ManipulationPlan plan;
    add_move(plan, r, 0, 1, {0, 3});
    add_move(plan, r, 3, 4, {1, 3});
    add_move(plan, r, 1, 2, {1, 4});
    REQUIRE(moves_in(plan) == 3);
    REQUIRE(validate_plan(s, plan).ok);

    const ManipulationPlan out = smooth_phase3(plan, s, r);
    CHECK(moves_in(out) == 2);
    CHECK(validate_plan(s, out).ok);
    CHECK(out.length() <= plan.length() + 1e-9);
    // The park slot is gone: the first carry now runs 0 -> 2 directly.
    CHECK(out.segments[1].moved == std::pair<PoseId, PoseId>{0, 2});
}

TEST_CASE("full smoothing preserves validity and never lengthens") {
    int solved = 0;
    for (std::uint64_t seed = 1; seed <= 6 && solved < 4; ++seed) {
        SceneGenParams params;
        params.k = 3;
        const SceneSpec s = generate_scene(params, seed);
        const Roadmap r = build_roadmap(s, 300, 10, seed);
        const SolveResult res =
            solve(s, r, 2, std::chrono::seconds(30), seed);
        if (res.status != SolveStatus::Solved) {
            continue;
        }
        ++solved;
        REQUIRE(validate_plan(s, res.raw).ok);
        REQUIRE(validate_plan(s, res.smoothed).ok);
        CHECK(res.smoothed.length() <= res.raw.length() + 1e-9);

        // Phase-by-phase: each stage keeps the plan valid and no longer.
        ManipulationPlan cur = res.raw;
        const ManipulationPlan p1 = smooth_phase1(cur);
        CHECK(validate_plan(s, p1).ok);
        CHECK(p1.length() <= cur.length() + 1e-9);
        const ManipulationPlan p2 = smooth_phase2(p1, s);
        CHECK(validate_plan(s, p2).ok);
        CHECK(p2.length() <= p1.length() + 1e-9);
        const ManipulationPlan p3 = smooth_phase3(p2, s, r);
        CHECK(validate_plan(s, p3).ok);
        CHECK(p3.length() <= p2.length() + 1e-9);
    }
    CHECK(solved >= 4);
}
