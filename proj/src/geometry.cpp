#include "rearr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rearr {

double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point p) { return std::sqrt(p.x * p.x + p.y * p.y); }
double distance(Point a, Point b) { return norm(a - b); }

double Polygon::signed_area() const {
    double s = 0.0;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        s += cross(vertices[i], vertices[(i + 1) % n]);
    }
    return 0.5 * s;
}

void Polygon::normalize() {
    if (vertices.size() < 3) {
        throw std::invalid_argument("polygon needs at least 3 vertices");
    }
    const double area = signed_area();
    if (std::abs(area) < kGeomEps) {
        throw std::invalid_argument("polygon has zero area");
    }
    if (area < 0.0) {
        std::reverse(vertices.begin(), vertices.end());
    }
}

bool Polygon::contains(Point p) const {
    // Ray casting; boundary points count as inside (closed obstacle set).
    const std::size_t n = vertices.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point a = vertices[j];
        const Point b = vertices[i];
        if (segment_point_distance(a, b, p) <= kGeomEps) {
            return true;
        }
        const bool crosses = (b.y > p.y) != (a.y > p.y);
        if (crosses) {
            const double t = (p.y - b.y) / (a.y - b.y);
            const double xint = b.x + t * (a.x - b.x);
            if (p.x < xint) {
                inside = !inside;
            }
        }
    }
    return inside;
}

double segment_point_distance(Point a, Point b, Point p) {
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 <= 0.0) {
        return distance(a, p);
    }
    double t = dot(p - a, ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(a + t * ab, p);
}

namespace {

bool segments_properly_intersect(Point a, Point b, Point c, Point d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    return ((d1 > 0.0) != (d2 > 0.0)) && ((d3 > 0.0) != (d4 > 0.0));
}

}  // namespace

double segment_segment_distance(Point a, Point b, Point c, Point d) {
    if (segments_properly_intersect(a, b, c, d)) {
        return 0.0;
    }
    double m = segment_point_distance(a, b, c);
    m = std::min(m, segment_point_distance(a, b, d));
    m = std::min(m, segment_point_distance(c, d, a));
    m = std::min(m, segment_point_distance(c, d, b));
    return m;
}

bool disc_disc_overlap(const Disc& a, const Disc& b) {
    return distance(a.center, b.center) < a.radius + b.radius - kGeomEps;
}

bool swept_disc_hits_disc(Point start, Point end, double moving_radius,
                          const Disc& target) {
    const double d = segment_point_distance(start, end, target.center);
    return d < moving_radius + target.radius - kGeomEps;
}

bool swept_disc_hits_polygon(Point start, Point end, double radius,
                             const Polygon& obstacle) {
    const std::size_t n = obstacle.vertices.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const double d = segment_segment_distance(
            obstacle.vertices[j], obstacle.vertices[i], start, end);
        if (d <= radius + kGeomEps) {
            return true;
        }
    }
    // No edge within reach; the capsule can still be fully inside.
    return obstacle.contains(start) || obstacle.contains(end);
}

bool disc_hits_polygon(Point p, double radius, const Polygon& obstacle) {
    return swept_disc_hits_polygon(p, p, radius, obstacle);
}

bool disc_penetrates_polygon(Point p, double radius, const Polygon& obstacle) {
    const std::size_t n = obstacle.vertices.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const double d = segment_point_distance(obstacle.vertices[j],
                                                obstacle.vertices[i], p);
        if (d < radius - kGeomEps) {
            return true;
        }
    }
    return obstacle.contains(p);
}

}  // namespace rearr
