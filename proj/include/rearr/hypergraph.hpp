#ifndef REARR_HYPERGRAPH_HPP
#define REARR_HYPERGRAPH_HPP

#include <chrono>
#include <random>

#include "rearr/pebbles.hpp"
#include "rearr/plan.hpp"

namespace rearr {

struct Hypernode {
    int id = 0;
    int rpg_id = 0;
    Signature signature;
};

// A context switch between two RPGs over a shared arrangement.
struct CrossRpgEdge {
    Arrangement handoff;  // k poses shared by both RPGs
};

// A constrained-edge traversal between siblings of one RPG.
struct SiblingEdge {
    PoseId source = -1;
    PoseId target = -1;
    std::set<PoseId> constraints;
    int constrained_index = -1;  // into Hypergraph::constrained[rpg_id]
    bool path_reversed = false;  // stored path runs target -> source
    Arrangement pre;             // source occupied, target and constraints empty
    Arrangement post;            // pre with the object moved source -> target
};

struct Hyperedge {
    int from = -1;
    int to = -1;
    enum class Kind { CrossRpg, Sibling } kind = Kind::CrossRpg;
    CrossRpgEdge cross;
    SiblingEdge sibling;
};

struct Hypergraph {
    std::vector<Rpg> rpgs;
    std::vector<std::vector<ConstrainedEdge>> constrained;  // per RPG
    std::vector<Hypernode> nodes;
    std::vector<Hyperedge> edges;  // directed; CrossRpg pairs share payload
    std::vector<std::vector<int>> out;
    int start_node = -1;
    int goal_node = -1;

    std::vector<int> nodes_of_rpg(int rpg_id) const;
};

// Attempts a CrossRpg connection: the RPGs must share at least k poses and
// there must exist a k-subset of the shared poses matching both signatures
// (an integral transportation problem over the component intersection
// counts). Returns the handoff on success.
std::optional<CrossRpgEdge> connect_node(const Hypergraph& h, const Hypernode& v,
                                         const Hypernode& u, int k);

// Adds sibling edges usable under each sibling's signature: a constrained
// edge linking different components is traversable when its target and all
// constraining poses can be emptied and its source occupied, by component
// capacity arithmetic. Appends the directed edges to h.
void connect_siblings(Hypergraph& h, const std::vector<int>& sibling_ids,
                      int rpg_id);

// One growth step: builds a seeded RPG, creates one hypernode per feasible
// signature, connects against all existing non-sibling nodes, then links the
// new siblings through the constrained edges. Returns the new node ids.
std::vector<int> create_hypernodes(Hypergraph& h, const Roadmap& roadmap,
                                   const SceneSpec& scene, int k, int b,
                                   const std::optional<Arrangement>& seed,
                                   std::mt19937_64& rng);

enum class GrowStatus { Solved, Timeout };

struct GrowResult {
    GrowStatus status = GrowStatus::Timeout;
    Hypergraph hypergraph;  // partial on timeout, for diagnostics
    int iterations = 0;
};

// Bidirectional growth: seeds hypernodes from the start and goal
// arrangements, then alternates expanding the start-reachable and
// goal-reaching sides from random existing nodes until the two meet or the
// budget expires.
GrowResult grow_hypergraph(const SceneSpec& scene, const Roadmap& roadmap,
                           int b, std::chrono::duration<double> time_budget,
                           std::uint64_t seed);

// Shortest hypernode path start -> goal, or nullopt while disconnected.
std::optional<std::vector<int>> find_query_path(const Hypergraph& h);

// Walks the hypernode path carrying the evolving arrangement, solves the
// pebble problem demanded by each hyperedge, and concatenates the stored
// roadmap paths into a manipulation plan. An infeasible pebble solve along
// a certified path indicates a construction bug and throws.
ManipulationPlan answer_query(const Hypergraph& h, const Roadmap& roadmap,
                              const SceneSpec& scene,
                              const std::vector<int>& path);

// Plan segments realizing one object move along a stored segmented path,
// replayed forward or reversed.
void append_move_segments(ManipulationPlan& plan, const Roadmap& roadmap,
                          const SegmentedPath& path, bool reversed,
                          PoseId from, PoseId to);

}  // namespace rearr

#endif
