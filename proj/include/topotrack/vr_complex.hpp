#pragma once

#include <array>
#include <cstdint>

#include "topotrack/geometry.hpp"

namespace topo {

// Simplex of dimension 0, 1 or 2 with its filtration value (half the
// simplex diameter). Unused vertex slots hold -1.
struct FiltrationSimplex {
    std::array<int, 3> vertices{-1, -1, -1};
    int dim = 0;
    double value = 0.0;

    bool operator==(const FiltrationSimplex& o) const {
        return vertices == o.vertices && dim == o.dim && value == o.value;
    }
};

// Canonical total order used everywhere: (value, dim, lexicographic vertex
// tuple) ascending. This is the tie-breaking contract that makes pairings
// and killer identities deterministic.
inline bool canonical_less(const FiltrationSimplex& a, const FiltrationSimplex& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.vertices < b.vertices;
}

// All simplices with value <= r_max, closed under faces, in canonical order.
struct Filtration {
    std::vector<FiltrationSimplex> simplices;
    double r_max = 0.0;
    int source_count = 0;
};

// Half of the min-over-points of the max distance to any other point.
// Sound truncation radius for 1-dimensional persistence: every loop is
// coned off (dies) at or before this value.
double enclosing_radius(const PointCloud& cloud);
double enclosing_radius(const DistanceMatrix& dist);

// Vietoris-Rips filtration up to dimension 2: vertices at 0, edges at half
// their length, triangles at the max of their edge values.
Filtration build_filtration(const PointCloud& cloud, double r_max);
Filtration build_filtration(const DistanceMatrix& dist, double r_max);

// Deterministic farthest-point traversal. Returns the cloud unchanged when
// it already has <= n points; otherwise n input points (original order),
// starting from index (seed mod size).
PointCloud farthest_point_subsample(const PointCloud& cloud, int n, uint64_t seed);

}  // namespace topo
