#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "rearr/pebbles.hpp"

using namespace rearr;

namespace {

// Hand-built RPG over abstract pose ids; edge paths are irrelevant to the
// pebble layer, so they stay empty. Components are derived by union-find and
// indexed by smallest contained pose id, matching the planner's convention.
Rpg make_rpg(const std::set<PoseId>& poses,
             const std::vector<std::pair<PoseId, PoseId>>& edges, int k) {
    Rpg rpg;
    rpg.nodes.poses = poses;
    rpg.nodes.k = k;
    rpg.nodes.b = static_cast<int>(poses.size()) - k;
    std::map<PoseId, PoseId> root;
    for (PoseId p : poses) {
        root[p] = p;
    }
    std::function<PoseId(PoseId)> find = [&](PoseId p) {
        return root[p] == p ? p : root[p] = find(root[p]);
    };
    for (auto [a, b] : edges) {
        RpgEdge e;
        e.poses = {std::min(a, b), std::max(a, b)};
        rpg.edges.push_back(e);
        root[find(a)] = find(b);
    }
    std::map<PoseId, std::vector<PoseId>> groups;
    for (PoseId p : poses) {
        groups[find(p)].push_back(p);
    }
    std::vector<PoseId> leaders;
    for (const auto& [leader, members] : groups) {
        leaders.push_back(*std::min_element(members.begin(), members.end()));
    }
    std::sort(leaders.begin(), leaders.end());
    for (PoseId p : poses) {
        const PoseId lead = *std::min_element(groups[find(p)].begin(),
                                              groups[find(p)].end());
        rpg.component_of[p] =
            static_cast<int>(std::lower_bound(leaders.begin(), leaders.end(),
                                              lead) -
                             leaders.begin());
    }
    rpg.component_count = static_cast<int>(leaders.size());
    return rpg;
}

Arrangement random_arrangement(const std::set<PoseId>& poses, int k,
                               std::mt19937_64& rng) {
    std::vector<PoseId> ids(poses.begin(), poses.end());
    std::shuffle(ids.begin(), ids.end(), rng);
    return Arrangement(ids.begin(), ids.begin() + k);
}

}  // namespace

TEST_CASE("signature counts per component") {
    // Components {10,20} and {30,40,50}, indexed 0 and 1.
    const Rpg rpg = make_rpg({10, 20, 30, 40, 50},
                             {{10, 20}, {30, 40}, {40, 50}}, 3);
    CHECK(signature_of(rpg, {10, 30, 40}) == Signature{1, 2});
    CHECK(signature_of(rpg, {10, 20}) == Signature{2, 0});
    CHECK(signature_of(rpg, {}) == Signature{0, 0});
    CHECK_THROWS_AS(signature_of(rpg, {99}), RpgError);

    // A single component collapses the signature to the object count.
    const Rpg one = make_rpg({1, 2, 3, 4}, {{1, 2}, {2, 3}, {3, 4}}, 3);
    CHECK(signature_of(one, {1, 2, 4}) == Signature{3});
}

TEST_CASE("signature enumeration") {
    const Rpg rpg = make_rpg({10, 20, 30, 40, 50},
                             {{10, 20}, {30, 40}, {40, 50}}, 3);
    // Capacities (2, 3), k = 3, lexicographic.
    CHECK(enumerate_signatures(rpg, 3) ==
          std::vector<Signature>{{0, 3}, {1, 2}, {2, 1}});

    const Rpg one = make_rpg({1, 2, 3, 4, 5},
                             {{1, 2}, {2, 3}, {3, 4}, {4, 5}}, 3);
    CHECK(enumerate_signatures(one, 3) == std::vector<Signature>{{3}});

    // Two singletons cannot host three objects.
    const Rpg tiny = make_rpg({1, 2}, {}, 3);
    CHECK(enumerate_signatures(tiny, 3).empty());
}

TEST_CASE("identity problem needs no moves") {
    const Rpg rpg = make_rpg({1, 2, 3}, {{1, 2}, {2, 3}}, 2);
    const auto moves = solve_pebble_problem(rpg, {1, 3}, {1, 3});
    REQUIRE(moves.has_value());
    CHECK(moves->empty());
}

TEST_CASE("path graph slide") {
    const Rpg rpg = make_rpg({1, 2, 3}, {{1, 2}, {2, 3}}, 1);
    const auto moves = solve_pebble_problem(rpg, {1}, {3});
    REQUIRE(moves.has_value());
    CHECK(replay_moves(rpg, {1}, *moves) == Arrangement{3});
}

TEST_CASE("signature mismatch is infeasible") {
    const Rpg rpg = make_rpg({1, 2, 3, 4}, {{1, 2}, {3, 4}}, 1);
    CHECK_FALSE(solve_pebble_problem(rpg, {1}, {3}).has_value());
    CHECK_FALSE(reachable_oracle(rpg, {1}, {3}));
    // Within a component the move is fine.
    CHECK(solve_pebble_problem(rpg, {1}, {2}).has_value());
    CHECK(reachable_oracle(rpg, {1}, {2}));
}

TEST_CASE("replay rejects illegal moves") {
    const Rpg rpg = make_rpg({1, 2, 3}, {{1, 2}, {2, 3}}, 2);
    CHECK_THROWS_AS(replay_moves(rpg, {1, 2}, {{3, 2}}), RpgError);  // empty from
    CHECK_THROWS_AS(replay_moves(rpg, {1, 2}, {{1, 2}}), RpgError);  // occupied
    CHECK_THROWS_AS(replay_moves(rpg, {1, 2}, {{1, 3}}), RpgError);  // no edge
}

TEST_CASE("oracle rejects oversized graphs") {
    std::set<PoseId> poses;
    std::vector<std::pair<PoseId, PoseId>> edges;
    for (PoseId p = 0; p < 13; ++p) {
        poses.insert(p);
        if (p > 0) {
            edges.push_back({p - 1, p});
        }
    }
    const Rpg rpg = make_rpg(poses, edges, 2);
    CHECK_THROWS_AS(reachable_oracle(rpg, {0, 1}, {11, 12}), RpgError);
}

TEST_CASE("solver agrees with the exhaustive oracle on random graphs") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 6);  // 4..9 vertices
        const int k = 1 + static_cast<int>(rng() % std::min(n - 1, 4));
        std::set<PoseId> poses;
        for (PoseId p = 0; p < n; ++p) {
            poses.insert(p);
        }
        std::vector<std::pair<PoseId, PoseId>> edges;
        for (PoseId a = 0; a < n; ++a) {
            for (PoseId b = a + 1; b < n; ++b) {
                if (rng() % 100 < 30) {
                    edges.push_back({a, b});
                }
            }
        }
        const Rpg rpg = make_rpg(poses, edges, k);
        const Arrangement start = random_arrangement(poses, k, rng);
        const Arrangement goal = random_arrangement(poses, k, rng);

        const bool oracle = reachable_oracle(rpg, start, goal);
        const auto moves = solve_pebble_problem(rpg, start, goal);
        CHECK(moves.has_value() == oracle);
        // Equal signatures and reachability are the same predicate.
        CHECK(oracle ==
              (signature_of(rpg, start) == signature_of(rpg, goal)));
        if (moves) {
            CHECK(replay_moves(rpg, start, *moves) == goal);
        }
    }
}

TEST_CASE("signatures are conserved under random legal moves") {
    std::mt19937_64 rng(7);
    const Rpg rpg = make_rpg({0, 1, 2, 3, 4, 5, 6},
                             {{0, 1}, {1, 2}, {2, 3}, {4, 5}, {5, 6}}, 3);
    Arrangement cur = {0, 2, 5};
    const Signature sig = signature_of(rpg, cur);
    for (int step = 0; step < 200; ++step) {
        std::vector<Move> legal;
        for (const RpgEdge& e : rpg.edges) {
            const auto [a, b] = e.poses;
            if (cur.count(a) && !cur.count(b)) {
                legal.push_back({a, b});
            }
            if (cur.count(b) && !cur.count(a)) {
                legal.push_back({b, a});
            }
        }
        REQUIRE_FALSE(legal.empty());
        const Move m = legal[rng() % legal.size()];
        cur = replay_moves(rpg, cur, {m});
        CHECK(signature_of(rpg, cur) == sig);
    }
}
