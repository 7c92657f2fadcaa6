#ifndef REARR_GEOMETRY_HPP
#define REARR_GEOMETRY_HPP

#include <vector>

namespace rearr {

// Distance tolerance for all geometric predicates. Scene scale is ~1m.
inline constexpr double kGeomEps = 1e-9;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }

double dot(Point a, Point b);
double cross(Point a, Point b);
double norm(Point p);
double distance(Point a, Point b);

struct Disc {
    Point center;
    double radius = 0.0;  // > 0
};

// Simple polygon. Vertices are normalized to counterclockwise order on
// construction via normalize().
struct Polygon {
    std::vector<Point> vertices;

    // Ensures counterclockwise orientation. Throws std::invalid_argument on
    // fewer than 3 vertices or zero area.
    void normalize();
    double signed_area() const;
    bool contains(Point p) const;
};

double segment_point_distance(Point a, Point b, Point p);
double segment_segment_distance(Point a, Point b, Point c, Point d);

// True iff the interiors of the two discs intersect. Touching boundaries do
// not count as overlap: objects are allowed to rest in contact.
bool disc_disc_overlap(const Disc& a, const Disc& b);

// True iff the capsule swept by a disc of radius moving_radius along the
// segment start->end intersects the interior of target.
bool swept_disc_hits_disc(Point start, Point end, double moving_radius,
                          const Disc& target);

// True iff the swept capsule intersects the polygon, boundary included.
// Obstacles are closed sets: grazing contact at exactly distance == radius
// counts as a hit.
bool swept_disc_hits_polygon(Point start, Point end, double radius,
                             const Polygon& obstacle);

// Static variant of the polygon test: disc of given radius at p.
bool disc_hits_polygon(Point p, double radius, const Polygon& obstacle);

// True iff the disc interior penetrates the polygon. Resting in contact with
// an obstacle face is not penetration; used for object placements, while the
// closed-set tests above apply to gripper motion.
bool disc_penetrates_polygon(Point p, double radius, const Polygon& obstacle);

}  // namespace rearr

#endif
