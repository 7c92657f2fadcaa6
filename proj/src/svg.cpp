#include "rearr/svg.hpp"

#include <cmath>
#include <sstream>

namespace rearr {

namespace {

constexpr double kFrameSize = 240.0;
constexpr double kMargin = 12.0;

struct FrameTransform {
    double ox = 0.0, oy = 0.0, scale = 1.0;
    double ymax = 0.0;

    // Scene y grows up, SVG y grows down.
    double x(double sx) const { return ox + scale * sx; }
    double y(double sy) const { return oy + scale * (ymax - sy); }
};

void emit_polyline(std::ostringstream& out, const FrameTransform& t,
                   const std::vector<Point>& pts, const char* stroke,
                   double width) {
    if (pts.size() < 2) {
        return;
    }
    out << "<polyline fill=\"none\" stroke=\"" << stroke
        << "\" stroke-width=\"" << width << "\" points=\"";
    for (const Point& p : pts) {
        out << t.x(p.x) << "," << t.y(p.y) << " ";
    }
    out << "\"/>\n";
}

void emit_frame(std::ostringstream& out, const SceneSpec& scene,
                const FrameTransform& t, const Arrangement& occupied,
                const PlanSegment* reach, const PlanSegment* carry,
                const PlanSegment* retract, const std::string& caption) {
    const Rect& w = scene.workspace;
    out << "<rect x=\"" << t.x(w.xmin) << "\" y=\"" << t.y(w.ymax)
        << "\" width=\"" << t.scale * (w.xmax - w.xmin) << "\" height=\""
        << t.scale * (w.ymax - w.ymin)
        << "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (const Polygon& obs : scene.obstacles) {
        out << "<polygon fill=\"#b0b0b0\" stroke=\"#606060\" points=\"";
        for (const Point& v : obs.vertices) {
            out << t.x(v.x) << "," << t.y(v.y) << " ";
        }
        out << "\"/>\n";
    }
    for (const Pose& p : scene.pose_library) {
        const bool goal_pose = scene.goal.count(p.id) > 0;
        out << "<circle cx=\"" << t.x(p.position.x) << "\" cy=\""
            << t.y(p.position.y) << "\" r=\""
            << t.scale * scene.object_radius << "\" fill=\"none\" stroke=\""
            << (goal_pose ? "#2e8b57" : "#c8c8c8") << "\" stroke-width=\""
            << (goal_pose ? 1.5 : 0.8) << "\""
            << (goal_pose ? " stroke-dasharray=\"3,2\"" : "") << "/>\n";
    }
    out << "<circle cx=\"" << t.x(scene.safe_config.x) << "\" cy=\""
        << t.y(scene.safe_config.y) << "\" r=\""
        << t.scale * scene.gripper_radius
        << "\" fill=\"none\" stroke=\"#9370db\" stroke-width=\"1\"/>\n";
    if (reach) {
        emit_polyline(out, t, reach->waypoints, "#87ceeb", 1.0);
    }
    if (retract) {
        emit_polyline(out, t, retract->waypoints, "#87ceeb", 1.0);
    }
    if (carry) {
        emit_polyline(out, t, carry->waypoints, "#ff8c00", 1.8);
    }
    for (PoseId id : occupied) {
        const Point c = scene.pose(id).position;
        const bool moving = carry && carry->moved && carry->moved->first == id;
        out << "<circle cx=\"" << t.x(c.x) << "\" cy=\"" << t.y(c.y)
            << "\" r=\"" << t.scale * scene.object_radius << "\" fill=\""
            << (moving ? "#ff8c00" : "#4682b4") << "\" stroke=\"#1f3f5f\""
            << " stroke-width=\"0.8\"/>\n";
    }
    out << "<text x=\"" << t.ox << "\" y=\"" << t.oy - 3.0
        << "\" font-size=\"10\" font-family=\"sans-serif\">" << caption
        << "</text>\n";
}

}  // namespace

std::string render_storyboard(const SceneSpec& scene,
                              const ManipulationPlan& plan) {
    const std::size_t moves = plan.segments.size() / 3;
    const std::size_t frames = moves + 1;  // initial state first
    const std::size_t cols =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(
                                     std::sqrt(double(frames)))));
    const std::size_t rows = (frames + cols - 1) / cols;

    const Rect& w = scene.workspace;
    const double scale =
        (kFrameSize - 2.0 * kMargin) /
        std::max(w.xmax - w.xmin, w.ymax - w.ymin);

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
        << cols * kFrameSize << "\" height=\"" << rows * kFrameSize
        << "\" viewBox=\"0 0 " << cols * kFrameSize << " "
        << rows * kFrameSize << "\">\n";

    Arrangement occupied = scene.start;
    for (std::size_t f = 0; f < frames; ++f) {
        FrameTransform t;
        t.scale = scale;
        t.ox = (f % cols) * kFrameSize + kMargin - scale * w.xmin;
        t.oy = (f / cols) * kFrameSize + kMargin;
        t.ymax = w.ymax;

        if (f == 0) {
            emit_frame(out, scene, t, occupied, nullptr, nullptr, nullptr,
                       "start");
        } else {
            const std::size_t base = (f - 1) * 3;
            const PlanSegment& reach = plan.segments[base];
            const PlanSegment& carry = plan.segments[base + 1];
            const PlanSegment& retract = plan.segments[base + 2];
            std::ostringstream caption;
            caption << "move " << f << ": " << carry.moved->first << " &#8594; "
                    << carry.moved->second;
            emit_frame(out, scene, t, occupied, &reach, &carry, &retract,
                       caption.str());
            occupied.erase(carry.moved->first);
            occupied.insert(carry.moved->second);
        }
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace rearr
