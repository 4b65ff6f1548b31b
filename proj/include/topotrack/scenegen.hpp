#pragma once

#include "topotrack/tracker.hpp"

namespace topo {

enum class SceneKind { annulus, two_annulus, breathing_annulus };

// Synthetic deformable scenes with known loop structure. Ring shapes carry a
// frozen per-point perturbation (slightly elliptic, jittered within the tube
// width) so that filtration tie-breaks are stable under the rigid per-frame
// motion; per-frame sensor noise is clamped to keep the declared step bound.
struct SceneSpec {
    SceneKind kind = SceneKind::annulus;
    int points_per_frame = 256;
    int frames = 1;
    double radius = 1.0;
    double tube_width = 0.04;
    double noise_sigma = 0.0;
    double step_motion = 0.02;  // strict per-point displacement budget between frames
    double separation = 6.0;    // center distance, two-annulus only
    uint64_t seed = 1;
};

struct LoopTruth {
    Vec3 center;
    Vec3 normal;
    double radius = 0.0;
    double thickness = 0.0;  // membership: distance to the loop circle <= thickness

    bool operator==(const LoopTruth& o) const {
        return center == o.center && normal == o.normal && radius == o.radius && thickness == o.thickness;
    }
};

struct GroundTruth {
    std::vector<std::vector<LoopTruth>> frames;  // per frame, per loop

    int loop_count(int frame) const { return static_cast<int>(frames.at(frame).size()); }
};

struct SceneReport {
    std::vector<double> covering_radius;  // per frame, max nearest-neighbor spacing
    double max_covering_radius = 0.0;
    double max_step_displacement = 0.0;  // measured over consecutive frames
    // Worst-case spread of near-death edges within one loop. Near-circular
    // rings admit competing killer chords anywhere along the ring, so this is
    // the ring diameter plus slack, and it is the honest localization bound
    // for the matching gate.
    double killer_spread = 0.0;
};

struct Scene {
    SceneSpec spec;
    std::vector<PointCloud> frames;
    GroundTruth truth;
    SceneReport report;
};

Scene gen_scene(const SceneSpec& spec);

// Distance from the point to the loop circle, at most the truth thickness.
bool check_membership(const GroundTruth& truth, int frame, int loop, const Vec3& point);
// Any loop of the frame.
bool check_membership(const GroundTruth& truth, int frame, const Vec3& point);

// Default parameter rule: alpha twice the worst covering radius, beta the
// measured killer spread (falling back to alpha when unknown), epsilon at
// 0.45 alpha (inside the motion-regularity regime).
TrackerParams suggested_params(const SceneReport& report);

}  // namespace topo
