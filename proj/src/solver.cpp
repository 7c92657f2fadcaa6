#include "rearr/solver.hpp"

#include "rearr/log.hpp"

namespace rearr {

SolveResult solve(const SceneSpec& scene, const Roadmap& roadmap, int b,
                  std::chrono::duration<double> time_limit,
                  std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    SolveResult result;

    if (scene.start == scene.goal) {
        result.status = SolveStatus::Solved;
        result.stats.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        return result;
    }

    GrowResult grown = grow_hypergraph(scene, roadmap, b, time_limit, seed);
    result.stats.hypernodes = static_cast<int>(grown.hypergraph.nodes.size());
    result.stats.hyperedges = static_cast<int>(grown.hypergraph.edges.size());
    result.stats.iterations = grown.iterations;
    if (grown.status == GrowStatus::Timeout) {
        result.status = SolveStatus::Timeout;
        result.stats.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        log_info("solve: timeout after " +
                 std::to_string(grown.iterations) + " growth iterations");
        return result;
    }

    const auto path = find_query_path(grown.hypergraph);
    // Solved status implies a connected query.
    result.raw = answer_query(grown.hypergraph, roadmap, scene, *path);
    result.stats.raw_length = result.raw.length();
    result.smoothed = smooth(result.raw, scene, roadmap);
    result.stats.smoothed_length = result.smoothed.length();
    result.stats.max_grasps = max_grasps_per_object(scene, result.smoothed);
    result.status = SolveStatus::Solved;
    result.stats.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    log_info("solve: " + std::to_string(path->size()) + " hypernodes on the " +
             "query path, raw length " +
             std::to_string(result.stats.raw_length) + ", smoothed " +
             std::to_string(result.stats.smoothed_length));
    return result;
}

}  // namespace rearr
