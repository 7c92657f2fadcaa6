#ifndef REARR_SVG_HPP
#define REARR_SVG_HPP

#include "rearr/plan.hpp"

namespace rearr {

// Static storyboard: one frame per object move (plus the initial frame),
// laid out on a grid. Each frame shows the workspace, obstacles, the pose
// library, the arrangement before the move and the three sweep polylines of
// the move.
std::string render_storyboard(const SceneSpec& scene,
                              const ManipulationPlan& plan);

}  // namespace rearr

#endif
