#pragma once

#include <vector>

#include "districtnet/rng.hpp"

namespace districtnet {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }

double distance(Point a, Point b);

/// Simple polygon stored as an open ring (closing edge implied).
using Polygon = std::vector<Point>;

double polygon_area(const Polygon& poly);
double polygon_perimeter(const Polygon& poly);
Point polygon_centroid(const Polygon& poly);
bool point_in_polygon(Point p, const Polygon& poly);

/// Total length of the boundary segments shared by two polygons.
/// Point-touching corners contribute zero.
double shared_boundary_length(const Polygon& a, const Polygon& b);

struct Circle {
    Point center;
    double radius = 0.0;
};

/// Minimum enclosing circle (Welzl).
Circle min_enclosing_circle(std::vector<Point> points, Rng& rng);

/// Reock score of a single polygon: area / area of its minimum enclosing circle.
double reock_score(const Polygon& poly);

/// Clip a convex polygon by the half-plane closer to `a` than to `b`
/// (the Voronoi bisector). Used to build Voronoi cells by repeated clipping.
Polygon clip_to_bisector(const Polygon& cell, Point a, Point b);

/// Rejection-sample a uniform point inside the polygon.
Point sample_point_in_polygon(const Polygon& poly, Rng& rng, int max_iters = 10000);

}  // namespace districtnet
