#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "districtnet/geometry.hpp"

using namespace districtnet;

static const double kPi = 3.14159265358979323846;

TEST_CASE("polygon basics on the unit square") {
    Polygon sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(polygon_area(sq) == doctest::Approx(1.0));
    CHECK(polygon_perimeter(sq) == doctest::Approx(4.0));
    auto c = polygon_centroid(sq);
    CHECK(c.x == doctest::Approx(0.5));
    CHECK(c.y == doctest::Approx(0.5));
    CHECK(point_in_polygon({0.5, 0.5}, sq));
    CHECK(!point_in_polygon({1.5, 0.5}, sq));
}

TEST_CASE("shared boundary length") {
    Polygon a = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    Polygon b = {{1, 0}, {2, 0}, {2, 1}, {1, 1}};        // shares the x=1 edge
    Polygon corner = {{1, 1}, {2, 1}, {2, 2}, {1, 2}};   // touches a only at (1,1)
    Polygon far = {{5, 5}, {6, 5}, {6, 6}, {5, 6}};
    CHECK(shared_boundary_length(a, b) == doctest::Approx(1.0));
    CHECK(shared_boundary_length(a, corner) == doctest::Approx(0.0));
    CHECK(shared_boundary_length(a, far) == doctest::Approx(0.0));
    // partial overlap of edges
    Polygon half = {{1, 0.5}, {2, 0.5}, {2, 1.5}, {1, 1.5}};
    CHECK(shared_boundary_length(a, half) == doctest::Approx(0.5));
}

TEST_CASE("minimum enclosing circle") {
    Rng rng(1);
    Circle c = min_enclosing_circle({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, rng);
    CHECK(c.radius == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-9));
    CHECK(c.center.x == doctest::Approx(0.5));
    CHECK(c.center.y == doctest::Approx(0.5));

    Circle two = min_enclosing_circle({{0, 0}, {2, 0}}, rng);
    CHECK(two.radius == doctest::Approx(1.0));
}

TEST_CASE("reock scores of analytic shapes") {
    Polygon sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(reock_score(sq) == doctest::Approx(2.0 / kPi).epsilon(1e-3));

    Polygon rect = {{0, 0}, {4, 0}, {4, 1}, {0, 1}};
    CHECK(reock_score(rect) == doctest::Approx(16.0 / (17.0 * kPi)).epsilon(1e-3));

    Polygon disk;
    for (int i = 0; i < 256; ++i) {
        double a = 2 * kPi * i / 256;
        disk.push_back({std::cos(a), std::sin(a)});
    }
    CHECK(reock_score(disk) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("bisector clipping") {
    Polygon sq = {{0, 0}, {2, 0}, {2, 2}, {0, 2}};
    // keep the half closer to (0.5,1) than (1.5,1): the left half x<1
    Polygon left = clip_to_bisector(sq, {0.5, 1.0}, {1.5, 1.0});
    CHECK(polygon_area(left) == doctest::Approx(2.0));
    for (const auto& p : left) CHECK(p.x <= 1.0 + 1e-9);
}

TEST_CASE("uniform sampling stays inside the polygon") {
    Polygon tri = {{0, 0}, {3, 0}, {0, 3}};
    Rng rng(42);
    double sx = 0, sy = 0;
    for (int i = 0; i < 5000; ++i) {
        Point p = sample_point_in_polygon(tri, rng);
        CHECK(point_in_polygon(p, tri));
        sx += p.x;
        sy += p.y;
    }
    // mean of uniform points approaches the centroid (1,1)
    CHECK(sx / 5000 == doctest::Approx(1.0).epsilon(0.05));
    CHECK(sy / 5000 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("tour-relevant distance helpers") {
    CHECK(distance({0, 0}, {3, 4}) == doctest::Approx(5.0));
}
