#pragma once

// Shared fixture builders for the test suite.

#include <utility>
#include <vector>

#include "districtnet/geo.hpp"
#include "districtnet/geometry.hpp"
#include "districtnet/graph.hpp"

namespace helpers {

inline districtnet::BasicUnit square_unit(int id, double x0, double y0, long long pop,
                                          double side = 1.0) {
    districtnet::BasicUnit bu;
    bu.id = id;
    bu.polygon = {{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}};
    bu.population = pop;
    bu.area = districtnet::polygon_area(bu.polygon);
    bu.perimeter = districtnet::polygon_perimeter(bu.polygon);
    bu.compactness = districtnet::reock_score(bu.polygon);
    return bu;
}

// rows x cols grid of unit squares, rook adjacency, vertex id = r*cols + c
inline districtnet::CityGraph grid_city(int rows, int cols, long long pop = 8000) {
    districtnet::CityGraph g;
    g.name = "grid";
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            g.units.push_back(square_unit(r * cols + c, c, r, pop));
        }
    }
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            int v = r * cols + c;
            if (c + 1 < cols) g.edges.emplace_back(v, v + 1);
            if (r + 1 < rows) g.edges.emplace_back(v, v + cols);
        }
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.depot = {cols / 2.0, rows / 2.0};
    g.update_depot_distances();
    return g;
}

// path of n unit squares in a row
inline districtnet::CityGraph path_city(int n, long long pop = 8000) {
    return grid_city(1, n, pop);
}

inline districtnet::Instance grid_instance(int rows, int cols, int t, long long pop = 8000) {
    return districtnet::make_instance(grid_city(rows, cols, pop), t);
}

}  // namespace helpers
