#ifndef REARR_MINCONFLICT_HPP
#define REARR_MINCONFLICT_HPP

#include <set>
#include <vector>

#include "rearr/roadmap.hpp"

namespace rearr {

// One reach/transfer/retract cycle through the roadmap, moving an object
// from pose p to pose p_target.
struct SegmentedPath {
    std::vector<int> reach;     // Transit: safe_node .. transition at p
    std::vector<int> transfer;  // Transfer: p .. p_target
    std::vector<int> retract;   // Transit: transition at p_target .. safe_node
    double total_length = 0.0;
    std::set<PoseId> conflict_set;
};

enum class PathStatus { Ok, NoPath, UnreachablePose };

struct MinConflictResult {
    PathStatus status = PathStatus::NoPath;
    SegmentedPath path;
};

// Searches for the chained reach/transfer/retract path minimizing primarily
// the number of distinct candidate poses in conflict, secondarily total
// length. Conflict cost is the cardinality of the UNION of edge conflicts,
// tracked as a bitmask over the candidate set (hence the 64-pose cap), with
// dominance pruning of (node, mask) labels. Candidates must exclude p and
// p_target. Reach legs annotated against p (or touching its grasp
// structure) are usable only as a monotone entry into the standoff
// footprint, and retract legs likewise for p_target as a monotone exit:
// the object rides those poses during those phases and cannot be swept
// over. NoPath means no chained path exists even ignoring conflicts;
// UnreachablePose means an endpoint has no transition pair.
MinConflictResult min_conflict_path(const Roadmap& roadmap, PoseId p,
                                    PoseId p_target,
                                    const std::set<PoseId>& candidates);

}  // namespace rearr

#endif
