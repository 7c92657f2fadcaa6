#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "rearr/rpg.hpp"

using namespace rearr;

namespace {

SceneSpec nonmonotone() {
    return load_scene_file(std::string(FIXTURE_DIR) + "/nonmonotone.json");
}

}  // namespace

TEST_CASE("pumped sampling honors k + b and the seed arrangement") {
    const SceneSpec s = nonmonotone();
    // The only 2-pose supersets of {3} among far-apart poses include pose 3.
    const PumpedArrangement pumped =
        sample_pumped_arrangement(s, 1, 1, Arrangement{3}, 11);
    CHECK(pumped.k == 1);
    CHECK(pumped.b == 1);
    CHECK(pumped.poses.size() == 2);
    CHECK(pumped.poses.count(3));

    // All five fixture poses are pairwise non-overlapping: k+b = 5 works.
    const PumpedArrangement full =
        sample_pumped_arrangement(s, 2, 3, std::nullopt, 11);
    CHECK(full.poses == std::set<PoseId>{0, 1, 2, 3, 4});

    // More poses than the library holds cannot be drawn.
    CHECK_THROWS_AS(sample_pumped_arrangement(s, 2, 4, std::nullopt, 11),
                    RpgError);
}

TEST_CASE("pumped samples are pairwise non-overlapping and deterministic") {
    const SceneSpec s = nonmonotone();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const PumpedArrangement p =
            sample_pumped_arrangement(s, 2, 1, s.start, seed);
        CHECK(p.poses.count(0));
        CHECK(p.poses.count(1));
        std::vector<PoseId> ids(p.poses.begin(), p.poses.end());
        for (std::size_t i = 0; i < ids.size(); ++i) {
            for (std::size_t j = i + 1; j < ids.size(); ++j) {
                CHECK_FALSE(disc_disc_overlap(
                    {s.pose(ids[i]).position, s.object_radius},
                    {s.pose(ids[j]).position, s.object_radius}));
            }
        }
        const PumpedArrangement again =
            sample_pumped_arrangement(s, 2, 1, s.start, seed);
        CHECK(again.poses == p.poses);
    }
}

TEST_CASE("corridor fixture produces the expected RPG") {
    const SceneSpec s = nonmonotone();
    const Roadmap roadmap = build_roadmap(s, 800, 16, 7);
    PumpedArrangement pumped;
    pumped.poses = {0, 1, 2, 3, 4};
    pumped.k = 2;
    pumped.b = 3;
    const auto [rpg, constrained] = create_rpg(roadmap, pumped);

    // A pair's own endpoints are never candidates, so sliding 1 -> 2 inside
    // the corridor is clean; every move involving slot 0 must pass a third
    // slot, as must extracting slot 1 past slot 2.
    auto has_edge = [&](PoseId a, PoseId b) {
        return rpg.find_edge(a, b) != nullptr;
    };
    CHECK(has_edge(1, 2));
    CHECK(has_edge(2, 3));
    CHECK(has_edge(2, 4));
    CHECK(has_edge(3, 4));
    CHECK_FALSE(has_edge(0, 1));
    CHECK_FALSE(has_edge(0, 2));
    CHECK_FALSE(has_edge(0, 3));
    CHECK_FALSE(has_edge(1, 3));
    CHECK_FALSE(has_edge(1, 4));

    // Components indexed by smallest contained pose: {0}, {1,2,3,4}.
    const auto comps = rpg.components();
    REQUIRE(comps.size() == 2);
    CHECK(comps[0] == std::set<PoseId>{0});
    CHECK(comps[1] == std::set<PoseId>{1, 2, 3, 4});
    CHECK(rpg.component_sizes() == std::vector<int>{1, 4});
    CHECK(rpg.component_of.at(4) == 1);
    CHECK(rpg.component_of.at(0) == 0);

    // Constrained edges carry exactly the blocking slots.
    auto constraints = [&](PoseId a, PoseId b) -> std::set<PoseId> {
        for (const ConstrainedEdge& e : constrained) {
            if (e.poses == PosePair{std::min(a, b), std::max(a, b)}) {
                return e.constraints;
            }
        }
        return {};
    };
    CHECK(constraints(0, 1) == std::set<PoseId>{2});
    CHECK(constraints(0, 2) == std::set<PoseId>{1});
    CHECK(constraints(0, 3) == std::set<PoseId>{1, 2});
    CHECK(constraints(0, 4) == std::set<PoseId>{1, 2});
    CHECK(constraints(1, 3) == std::set<PoseId>{2});
    CHECK(constraints(1, 4) == std::set<PoseId>{2});
    for (const ConstrainedEdge& e : constrained) {
        CHECK_FALSE(e.constraints.empty());
        CHECK_FALSE(e.constraints.count(e.poses.first));
        CHECK_FALSE(e.constraints.count(e.poses.second));
        // Disjoint from the clean edge set: a pair is one or the other.
        CHECK(rpg.find_edge(e.poses.first, e.poses.second) == nullptr);
    }
}

TEST_CASE("rpg edge paths are sound under fresh sweeps") {
    const SceneSpec s = nonmonotone();
    const Roadmap roadmap = build_roadmap(s, 800, 16, 7);
    PumpedArrangement pumped;
    pumped.poses = {0, 1, 2, 3, 4};
    pumped.k = 2;
    pumped.b = 3;
    const auto [rpg, constrained] = create_rpg(roadmap, pumped);

    auto check_path = [&](const SegmentedPath& path, PoseId a, PoseId b,
                          const std::set<PoseId>& declared) {
        auto walk = [&](const std::vector<int>& nodes) {
            for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
                const RoadmapEdge* edge = nullptr;
                for (int ei : roadmap.adj[nodes[i]]) {
                    const RoadmapEdge& e = roadmap.edges[ei];
                    if (e.a + e.b - nodes[i] == nodes[i + 1]) {
                        edge = &e;
                        break;
                    }
                }
                REQUIRE(edge != nullptr);
                for (PoseId p : pumped.poses) {
                    if (p == a || p == b || declared.count(p)) {
                        continue;
                    }
                    CHECK_FALSE(edge_sweeps_pose(roadmap, s, *edge, p));
                }
            }
        };
        walk(path.reach);
        walk(path.transfer);
        walk(path.retract);
    };
    for (const RpgEdge& e : rpg.edges) {
        check_path(e.path, e.poses.first, e.poses.second, {});
    }
    for (const ConstrainedEdge& e : constrained) {
        check_path(e.path, e.poses.first, e.poses.second, e.constraints);
    }
}

TEST_CASE("unreachable pumped pose is rejected") {
    SceneSpec s = nonmonotone();
    const Point at = s.pose(3).position;
    const double d = s.carry_radius() + 0.002;
    for (auto [dx, dy] : {std::pair{d, 0.0}, {-d, 0.0}, {0.0, d}, {0.0, -d}}) {
        Polygon w;
        const double t = 0.004;
        w.vertices = {{at.x + dx - t, at.y + dy - t},
                      {at.x + dx + t, at.y + dy - t},
                      {at.x + dx + t, at.y + dy + t},
                      {at.x + dx - t, at.y + dy + t}};
        w.normalize();
        s.obstacles.push_back(w);
    }
    const SceneSpec sealed = load_scene(s.serialize());
    const Roadmap roadmap = build_roadmap(sealed, 150, 8, 7);
    REQUIRE_FALSE(roadmap.pose_reachable(3));
    PumpedArrangement pumped;
    pumped.poses = {2, 3, 4};
    pumped.k = 2;
    pumped.b = 1;
    CHECK_THROWS_AS(create_rpg(roadmap, pumped), RpgError);
}
