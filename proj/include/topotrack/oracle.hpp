#pragma once

#include "topotrack/tracker.hpp"

namespace topo {

// Reference implementations used to validate the optimized engines at desk
// scale. Deliberately unoptimized and structurally independent of the code
// they check.

// Full boundary-matrix reduction over every simplex in canonical order.
// Output must equal compute_ph1 exactly, values and pairings included.
// Guarded to 64 points.
PersistenceDiagram1 naive_reduction_ph1(const PointCloud& cloud, double r_max);

// Exhaustive minimum over all row-to-column assignments of the padded
// matrix, lexicographically first among optima. Guarded to 8x8.
Assignment brute_force_assignment(const CostMatrix& cost);

struct LemmaMatch {
    LoopFeature reference;
    LoopFeature observed;
    double d_birth = 0.0;
    double d_death = 0.0;
};

struct LemmaReport {
    bool ok = false;
    int checked = 0;  // reference features above the lifetime threshold
    std::vector<LemmaMatch> matches;
    std::vector<LoopFeature> violations;  // reference features with no admissible partner
    double worst_d_birth = 0.0;
    double worst_d_death = 0.0;
};

// Subsampling bound: every feature of `dense` with lifetime > alpha must
// appear in `sub` with birth and death shifted up by at most alpha.
// Requires sub to be a point subset of dense.
LemmaReport verify_lemma2(const PointCloud& dense, const PointCloud& sub, double alpha);

// Perturbation bound: if every point moved by less than epsilon, each
// feature with lifetime > epsilon must persist with birth/death shifts of
// at most epsilon in absolute value.
LemmaReport verify_lemma3(const PointCloud& cloud, const PointCloud& moved, double epsilon);

}  // namespace topo
