#pragma once

#include <array>
#include <optional>

#include "topotrack/vr_complex.hpp"

namespace topo {

// One 1-dimensional persistence pair. death is +inf for essential classes
// (possible only when the truncation radius is below the enclosing radius);
// killer_triangle is absent exactly in that case.
struct LoopFeature {
    double birth = 0.0;
    double death = 0.0;
    std::array<int, 2> creator_edge{-1, -1};
    std::optional<std::array<int, 3>> killer_triangle;

    double lifetime() const { return death - birth; }
    bool finite() const { return killer_triangle.has_value(); }

    bool operator==(const LoopFeature& o) const {
        return birth == o.birth && death == o.death && creator_edge == o.creator_edge &&
               killer_triangle == o.killer_triangle;
    }
};

struct PersistenceDiagram1 {
    std::vector<LoopFeature> features;
    int frame_index = 0;
};

// 1-dimensional persistence of a canonical-ordered, face-closed filtration.
// Creator edges are found by a disjoint-set pass over the edges in order;
// triangle boundary columns are then reduced lazily to pair each killed
// creator with exactly one killer triangle. Zero-lifetime pairs are dropped.
PersistenceDiagram1 compute_ph1(const Filtration& filtration);

// Same output, computed directly from the distance matrix without
// materializing the triangles (their count grows cubically near the
// enclosing radius). Reduces the coboundary columns of the creator edges in
// reverse canonical order; by matrix duality the resulting pairs are
// identical to the boundary reduction above. This is the per-frame engine.
PersistenceDiagram1 compute_ph1(const DistanceMatrix& dist, double r_max, int frame_index = 0);

// Keeps exactly the finite-death features with lifetime > alpha.
PersistenceDiagram1 filter_significant(const PersistenceDiagram1& diagram, double alpha);

struct EdgeInfo {
    std::array<int, 2> vertices{-1, -1};
    std::array<Vec3, 2> points;
    double value = 0.0;

    bool operator==(const EdgeInfo& o) const {
        return vertices == o.vertices && points == o.points && value == o.value;
    }
};

struct TriangleInfo {
    std::array<int, 3> vertices{-1, -1, -1};
    std::array<Vec3, 3> points;
    double value = 0.0;
    bool paired = false;  // set on the killer triangle produced by the reduction

    bool operator==(const TriangleInfo& o) const {
        return vertices == o.vertices && points == o.points && value == o.value && paired == o.paired;
    }
};

// Killer-edge neighborhood of one significant loop: the geometric payload
// that gets tracked and turned into a mixture.
struct LoopDescriptor {
    int64_t id = -1;  // -1 until the tracker assigns one
    double birth = 0.0;
    double death = 0.0;
    double lifetime = 0.0;
    EdgeInfo killer_edge;
    std::vector<TriangleInfo> killer_triangles;    // all triangles on the killer edge at the death value
    std::vector<TriangleInfo> neighbor_triangles;  // edge-adjacent triangles present at value <= death
    std::optional<double> hausdorff_prev;

    bool operator==(const LoopDescriptor& o) const {
        return id == o.id && birth == o.birth && death == o.death && lifetime == o.lifetime &&
               killer_edge == o.killer_edge && killer_triangles == o.killer_triangles &&
               neighbor_triangles == o.neighbor_triangles && hausdorff_prev == o.hausdorff_prev;
    }
};

LoopDescriptor extract_loop_descriptor(const LoopFeature& feature, const DistanceMatrix& dist,
                                       const PointCloud& cloud);
LoopDescriptor extract_loop_descriptor(const LoopFeature& feature, const Filtration& filtration,
                                       const PointCloud& cloud);

// Frame-level ordering of descriptors: longest lifetime first, then birth,
// then killer-edge vertices. Fixes first-frame ID assignment.
bool descriptor_canonical_less(const LoopDescriptor& a, const LoopDescriptor& b);

}  // namespace topo
