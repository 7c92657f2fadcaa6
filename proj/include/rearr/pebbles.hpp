#ifndef REARR_PEBBLES_HPP
#define REARR_PEBBLES_HPP

#include <optional>
#include <vector>

#include "rearr/rpg.hpp"

namespace rearr {

// Object count per RPG connected component, indexed positionally.
using Signature = std::vector<int>;

struct Move {
    PoseId from = -1;
    PoseId to = -1;
};

using MoveSequence = std::vector<Move>;

Signature signature_of(const Rpg& rpg, const Arrangement& arrangement);

// All capacity-feasible compositions of k over the component sizes, in
// lexicographic order.
std::vector<Signature> enumerate_signatures(const Rpg& rpg, int k);

// Unlabeled pebble motion within one RPG. Returns a sequence of single
// object slides along RPG edges into empty poses transforming start into
// goal, or nullopt iff the signatures differ. The solver works per
// component over a spanning tree: goals are filled deepest first, each from
// the nearest object, with surplus objects evacuated past the goal and
// blanks shuttled in to clear the way.
std::optional<MoveSequence> solve_pebble_problem(const Rpg& rpg,
                                                 const Arrangement& start,
                                                 const Arrangement& goal);

// Exact reachability by breadth-first search over the space of k-subsets of
// rpg.nodes under single-object edge moves. Test oracle; throws RpgError
// above 12 nodes.
bool reachable_oracle(const Rpg& rpg, const Arrangement& start,
                      const Arrangement& goal);

// Replays a move sequence from `start`, checking every move slides one
// object along an existing RPG edge into an empty pose. Returns the final
// arrangement; throws RpgError on an illegal move.
Arrangement replay_moves(const Rpg& rpg, const Arrangement& start,
                         const MoveSequence& moves);

}  // namespace rearr

#endif
