#ifndef REARR_SOLVER_HPP
#define REARR_SOLVER_HPP

#include "rearr/hypergraph.hpp"
#include "rearr/smoothing.hpp"

namespace rearr {

enum class SolveStatus { Solved, Timeout };

struct SolveStats {
    double wall_time = 0.0;  // seconds
    int hypernodes = 0;
    int hyperedges = 0;
    int iterations = 0;
    double raw_length = 0.0;
    double smoothed_length = 0.0;
    int max_grasps = 0;
};

struct SolveResult {
    SolveStatus status = SolveStatus::Timeout;
    ManipulationPlan raw;
    ManipulationPlan smoothed;
    SolveStats stats;
};

// Full online pipeline: grow the hypergraph until the query connects, answer
// it, smooth the answer. A trivial start == goal query yields an empty plan
// without growth. Deterministic given seed.
SolveResult solve(const SceneSpec& scene, const Roadmap& roadmap, int b,
                  std::chrono::duration<double> time_limit,
                  std::uint64_t seed);

}  // namespace rearr

#endif
