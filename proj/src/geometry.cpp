#include "districtnet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace districtnet {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

static double signed_area(const Polygon& poly) {
    double s = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p = poly[i];
        const Point& q = poly[(i + 1) % n];
        s += p.x * q.y - q.x * p.y;
    }
    return 0.5 * s;
}

double polygon_area(const Polygon& poly) { return std::abs(signed_area(poly)); }

double polygon_perimeter(const Polygon& poly) {
    double s = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) s += distance(poly[i], poly[(i + 1) % n]);
    return s;
}

Point polygon_centroid(const Polygon& poly) {
    const double a = signed_area(poly);
    const std::size_t n = poly.size();
    if (std::abs(a) < 1e-15) {
        // degenerate: average the vertices
        Point c{0, 0};
        for (const Point& p : poly) c = c + p;
        return {c.x / n, c.y / n};
    }
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p = poly[i];
        const Point& q = poly[(i + 1) % n];
        const double cross = p.x * q.y - q.x * p.y;
        cx += (p.x + q.x) * cross;
        cy += (p.y + q.y) * cross;
    }
    return {cx / (6.0 * a), cy / (6.0 * a)};
}

bool point_in_polygon(Point p, const Polygon& poly) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point& a = poly[i];
        const Point& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y) &&
            p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) {
            inside = !inside;
        }
    }
    return inside;
}

namespace {

constexpr double kCollinearTol = 1e-9;

// Overlap length of segment [c,d] with segment [a,b], assuming collinearity checks inside.
double segment_overlap(Point a, Point b, Point c, Point d) {
    const double abx = b.x - a.x, aby = b.y - a.y;
    const double len = std::hypot(abx, aby);
    if (len < kCollinearTol) return 0.0;
    const double ux = abx / len, uy = aby / len;
    // both endpoints of cd must lie on line ab
    const double dc = std::abs((c.x - a.x) * uy - (c.y - a.y) * ux);
    const double dd = std::abs((d.x - a.x) * uy - (d.y - a.y) * ux);
    if (dc > kCollinearTol || dd > kCollinearTol) return 0.0;
    double t0 = 0.0, t1 = len;
    double s0 = (c.x - a.x) * ux + (c.y - a.y) * uy;
    double s1 = (d.x - a.x) * ux + (d.y - a.y) * uy;
    if (s0 > s1) std::swap(s0, s1);
    const double lo = std::max(t0, s0);
    const double hi = std::min(t1, s1);
    return hi > lo ? hi - lo : 0.0;
}

}  // namespace

double shared_boundary_length(const Polygon& a, const Polygon& b) {
    double total = 0.0;
    const std::size_t na = a.size(), nb = b.size();
    for (std::size_t i = 0; i < na; ++i) {
        const Point p0 = a[i], p1 = a[(i + 1) % na];
        for (std::size_t j = 0; j < nb; ++j) {
            const Point q0 = b[j], q1 = b[(j + 1) % nb];
            total += segment_overlap(p0, p1, q0, q1);
        }
    }
    return total;
}

namespace {

Circle circle_from(Point a) { return {a, 0.0}; }

Circle circle_from(Point a, Point b) {
    Point c{(a.x + b.x) / 2, (a.y + b.y) / 2};
    return {c, distance(a, b) / 2};
}

Circle circle_from(Point a, Point b, Point c) {
    const double ax = a.x, ay = a.y, bx = b.x, by = b.y, cx = c.x, cy = c.y;
    const double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if (std::abs(d) < 1e-14) {
        // collinear: fall back to the widest pair
        Circle c1 = circle_from(a, b), c2 = circle_from(a, c), c3 = circle_from(b, c);
        Circle best = c1;
        if (c2.radius > best.radius) best = c2;
        if (c3.radius > best.radius) best = c3;
        return best;
    }
    const double ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) +
                       (cx * cx + cy * cy) * (ay - by)) / d;
    const double uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) +
                       (cx * cx + cy * cy) * (bx - ax)) / d;
    Point center{ux, uy};
    return {center, distance(center, a)};
}

bool in_circle(const Circle& c, Point p) {
    return distance(c.center, p) <= c.radius * (1.0 + 1e-10) + 1e-12;
}

}  // namespace

Circle min_enclosing_circle(std::vector<Point> pts, Rng& rng) {
    if (pts.empty()) return {};
    // random shuffle for expected linear time
    for (std::size_t i = pts.size() - 1; i > 0; --i) {
        std::swap(pts[i], pts[rng.uniform_index(i + 1)]);
    }
    Circle c = circle_from(pts[0]);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (in_circle(c, pts[i])) continue;
        c = circle_from(pts[i]);
        for (std::size_t j = 0; j < i; ++j) {
            if (in_circle(c, pts[j])) continue;
            c = circle_from(pts[i], pts[j]);
            for (std::size_t k = 0; k < j; ++k) {
                if (in_circle(c, pts[k])) continue;
                c = circle_from(pts[i], pts[j], pts[k]);
            }
        }
    }
    return c;
}

double reock_score(const Polygon& poly) {
    Rng rng(0xdec0de);  // MEC is deterministic up to fp noise; seed only affects pivot order
    Circle c = min_enclosing_circle(poly, rng);
    const double circle_area = 3.141592653589793 * c.radius * c.radius;
    if (circle_area <= 0.0) return 1.0;
    return polygon_area(poly) / circle_area;
}

Polygon clip_to_bisector(const Polygon& cell, Point a, Point b) {
    // keep points p with |p-a|^2 <= |p-b|^2, i.e. 2 (b-a).p <= |b|^2 - |a|^2
    const double nx = b.x - a.x, ny = b.y - a.y;
    const double rhs = 0.5 * (b.x * b.x + b.y * b.y - a.x * a.x - a.y * a.y);
    auto side = [&](Point p) { return nx * p.x + ny * p.y - rhs; };

    Polygon out;
    const std::size_t n = cell.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point p = cell[i];
        const Point q = cell[(i + 1) % n];
        const double sp = side(p), sq = side(q);
        if (sp <= 0) out.push_back(p);
        if ((sp < 0 && sq > 0) || (sp > 0 && sq < 0)) {
            const double t = sp / (sp - sq);
            out.push_back(p + t * (q - p));
        }
    }
    return out;
}

Point sample_point_in_polygon(const Polygon& poly, Rng& rng, int max_iters) {
    double minx = std::numeric_limits<double>::max(), maxx = -minx;
    double miny = minx, maxy = maxx;
    for (const Point& p : poly) {
        minx = std::min(minx, p.x);
        maxx = std::max(maxx, p.x);
        miny = std::min(miny, p.y);
        maxy = std::max(maxy, p.y);
    }
    for (int i = 0; i < max_iters; ++i) {
        Point p{rng.uniform(minx, maxx), rng.uniform(miny, maxy)};
        if (point_in_polygon(p, poly)) return p;
    }
    throw std::runtime_error("sample_point_in_polygon: rejection cap reached");
}

}  // namespace districtnet
