#include "topotrack/scenegen.hpp"

#include <algorithm>
#include <cmath>

#include "topotrack/rng.hpp"

namespace topo {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEccentricity = 0.06;  // pins the widest part, localizing the killer edge
constexpr double kBreathPeriod = 16.0;

struct RingShape {
    std::vector<Vec3> base;  // frozen local shape, centered at the origin
    Vec3 center;
    Vec3 drift;          // translation per frame
    double spin = 0.0;   // rotation per frame, about z through the center
    double extent = 0.0; // max |base point|
};

RingShape make_ring(int m, const SceneSpec& spec, const Vec3& center, double spin_sign, Rng& rng) {
    RingShape ring;
    ring.center = center;
    for (int i = 0; i < m; ++i) {
        const double theta = 2.0 * kPi * i / m;
        const double radial = spec.radius + 0.5 * spec.tube_width * rng.uniform(-1.0, 1.0);
        const double z = 0.25 * spec.tube_width * rng.uniform(-1.0, 1.0);
        ring.base.push_back({(1.0 + kEccentricity) * radial * std::cos(theta),
                             (1.0 - kEccentricity) * radial * std::sin(theta), z});
    }
    for (const Vec3& p : ring.base) ring.extent = std::max(ring.extent, p.norm());

    const double angle = rng.uniform(0.0, 2.0 * kPi);
    ring.drift = Vec3{std::cos(angle), std::sin(angle), 0.2 * rng.uniform(-1.0, 1.0)} *
                 (0.35 * spec.step_motion);
    ring.spin = spin_sign * 0.25 * spec.step_motion / std::max(ring.extent, 1e-9);
    return ring;
}

void validate_spec(const SceneSpec& spec) {
    const int rings = spec.kind == SceneKind::two_annulus ? 2 : 1;
    if (spec.points_per_frame < 8 * rings) throw ParamError("gen_scene: too few points per frame");
    if (spec.frames < 1) throw ParamError("gen_scene: frames must be >= 1");
    if (!(spec.radius > 0.0)) throw ParamError("gen_scene: radius must be > 0");
    if (spec.tube_width < 0.0 || spec.noise_sigma < 0.0) {
        throw ParamError("gen_scene: tube_width and noise_sigma must be >= 0");
    }
    if (spec.step_motion < 0.0) throw ParamError("gen_scene: step_motion must be >= 0");
    if (spec.kind == SceneKind::two_annulus) {
        const double hull = 2.0 * (1.0 + kEccentricity) * spec.radius + spec.tube_width;
        if (spec.separation <= hull) {
            throw ParamError("gen_scene: two-annulus separation too small for the ring radius");
        }
    }
}

}  // namespace

Scene gen_scene(const SceneSpec& spec) {
    validate_spec(spec);
    Scene scene;
    scene.spec = spec;

    Rng rng(spec.seed);
    std::vector<RingShape> rings;
    if (spec.kind == SceneKind::two_annulus) {
        const int half = spec.points_per_frame / 2;
        rings.push_back(make_ring(half, spec, {-0.5 * spec.separation, 0, 0}, +1.0, rng));
        rings.push_back(make_ring(spec.points_per_frame - half, spec, {0.5 * spec.separation, 0, 0}, -1.0, rng));
    } else {
        rings.push_back(make_ring(spec.points_per_frame, spec, {0, 0, 0}, +1.0, rng));
    }

    const bool breathing = spec.kind == SceneKind::breathing_annulus;
    double breath_amp = 0.0;
    if (breathing) {
        breath_amp = 0.2 * spec.step_motion / (rings[0].extent * 2.0 * kPi / kBreathPeriod);
        breath_amp = std::min(breath_amp, 0.2);  // keep the ring recognizably round
    }
    const double noise_clamp = std::min(3.0 * spec.noise_sigma, 0.05 * spec.step_motion);

    scene.frames.reserve(spec.frames);
    scene.truth.frames.reserve(spec.frames);

    for (int t = 0; t < spec.frames; ++t) {
        PointCloud frame;
        frame.frame_index = t;
        std::vector<LoopTruth> truth_frame;
        const double scale = breathing ? 1.0 + breath_amp * std::sin(2.0 * kPi * t / kBreathPeriod) : 1.0;

        for (const RingShape& ring : rings) {
            const double phi = ring.spin * t;
            const double c = std::cos(phi), s = std::sin(phi);
            const Vec3 center = ring.center + ring.drift * static_cast<double>(t);
            for (const Vec3& b : ring.base) {
                const Vec3 scaled = b * scale;
                Vec3 p{center.x + c * scaled.x - s * scaled.y, center.y + s * scaled.x + c * scaled.y,
                       center.z + scaled.z};
                if (spec.noise_sigma > 0.0) {
                    const Vec3 noise = rng.normal_vec3() * spec.noise_sigma;
                    p.x += std::clamp(noise.x, -noise_clamp, noise_clamp);
                    p.y += std::clamp(noise.y, -noise_clamp, noise_clamp);
                    p.z += std::clamp(noise.z, -noise_clamp, noise_clamp);
                }
                frame.points.push_back(p);
            }
            truth_frame.push_back({center, {0, 0, 1}, scale * spec.radius, spec.radius});
        }
        scene.frames.push_back(std::move(frame));
        scene.truth.frames.push_back(std::move(truth_frame));
    }

    // measured guarantees
    for (int t = 0; t < spec.frames; ++t) {
        const double cover = max_nn_distance(scene.frames[t]);
        scene.report.covering_radius.push_back(cover);
        scene.report.max_covering_radius = std::max(scene.report.max_covering_radius, cover);
        if (t > 0) {
            for (size_t i = 0; i < scene.frames[t].points.size(); ++i) {
                const double d = distance(scene.frames[t].points[i], scene.frames[t - 1].points[i]);
                scene.report.max_step_displacement = std::max(scene.report.max_step_displacement, d);
            }
        }
    }
    const bool budget_ok = spec.step_motion > 0.0
                               ? scene.report.max_step_displacement < spec.step_motion
                               : scene.report.max_step_displacement == 0.0;
    if (spec.frames > 1 && !budget_ok) {
        throw InvariantError("gen_scene: generated motion exceeded the step_motion budget");
    }

    double extent = 0.0;
    for (const RingShape& ring : rings) extent = std::max(extent, ring.extent);
    scene.report.killer_spread = 2.0 * extent * (1.0 + breath_amp) + 2.0 * noise_clamp + 0.05 * spec.radius;

    // Two loops are only separable when their worst-case killer distance
    // clears the matching gate built from this scene's own parameters.
    if (spec.kind == SceneKind::two_annulus) {
        const TrackerParams params = suggested_params(scene.report);
        const double cross_floor = spec.separation - 2.0 * extent;
        if (cross_floor <= params.distance_gate()) {
            throw ParamError("gen_scene: separation does not clear the matching gate bound");
        }
    }
    return scene;
}

bool check_membership(const GroundTruth& truth, int frame, int loop, const Vec3& point) {
    if (frame < 0 || frame >= static_cast<int>(truth.frames.size())) {
        throw ParamError("check_membership: frame out of range");
    }
    const auto& loops = truth.frames[frame];
    if (loop < 0 || loop >= static_cast<int>(loops.size())) {
        throw ParamError("check_membership: loop out of range");
    }
    const LoopTruth& lt = loops[loop];
    const Vec3 q = point - lt.center;
    const double dz = q.dot(lt.normal);
    const Vec3 in_plane = q - lt.normal * dz;
    const double radial = in_plane.norm() - lt.radius;
    return std::sqrt(radial * radial + dz * dz) <= lt.thickness;
}

bool check_membership(const GroundTruth& truth, int frame, const Vec3& point) {
    if (frame < 0 || frame >= static_cast<int>(truth.frames.size())) {
        throw ParamError("check_membership: frame out of range");
    }
    for (int loop = 0; loop < truth.loop_count(frame); ++loop) {
        if (check_membership(truth, frame, loop, point)) return true;
    }
    return false;
}

TrackerParams suggested_params(const SceneReport& report) {
    TrackerParams params;
    params.alpha = 2.0 * report.max_covering_radius;
    params.beta = report.killer_spread > 0.0 ? report.killer_spread : params.alpha;
    params.epsilon = 0.45 * params.alpha;
    return params;
}

}  // namespace topo
