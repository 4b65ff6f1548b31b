#include <doctest.h>

#include <cmath>

#include "topotrack/scenegen.hpp"
#include "topotrack/tracker.hpp"

using namespace topo;

TEST_CASE("scenes are bit-identical per seed") {
    SceneSpec spec;
    spec.kind = SceneKind::breathing_annulus;
    spec.points_per_frame = 64;
    spec.frames = 5;
    spec.noise_sigma = 0.002;
    spec.seed = 123;
    const Scene a = gen_scene(spec);
    const Scene b = gen_scene(spec);
    REQUIRE(a.frames.size() == b.frames.size());
    for (size_t t = 0; t < a.frames.size(); ++t) CHECK(a.frames[t].points == b.frames[t].points);
}

TEST_CASE("static clean annulus: identical frames, covering radius near the spacing") {
    SceneSpec spec;
    spec.points_per_frame = 200;
    spec.frames = 3;
    spec.tube_width = 0.0;
    spec.noise_sigma = 0.0;
    spec.step_motion = 0.0;
    spec.seed = 9;
    const Scene scene = gen_scene(spec);
    CHECK(scene.frames[0].points == scene.frames[1].points);
    CHECK(scene.frames[1].points == scene.frames[2].points);
    CHECK(scene.report.max_step_displacement == 0.0);

    const double spacing = 2.0 * 3.14159265358979323846 * spec.radius / spec.points_per_frame;
    CHECK(scene.report.max_covering_radius == doctest::Approx(spacing).epsilon(0.10));
}

TEST_CASE("declared motion budget is honored") {
    SceneSpec spec;
    spec.kind = SceneKind::breathing_annulus;
    spec.points_per_frame = 128;
    spec.frames = 30;
    spec.noise_sigma = 0.003;
    spec.step_motion = 0.02;
    spec.seed = 5;
    const Scene scene = gen_scene(spec);
    CHECK(scene.report.max_step_displacement < spec.step_motion);
    CHECK(scene.report.max_step_displacement > 0.0);
}

TEST_CASE("well separated rings give exactly two significant loops per frame") {
    SceneSpec spec;
    spec.kind = SceneKind::two_annulus;
    spec.points_per_frame = 220;
    spec.frames = 3;
    spec.noise_sigma = 0.002;
    spec.separation = 10.0;
    spec.seed = 2;
    const Scene scene = gen_scene(spec);
    const TrackerParams params = suggested_params(scene.report);
    const TrackResult result = track_sequence(scene.frames, params);
    for (const TopologicalState& state : result.states) CHECK(state.loops.size() == 2);
}

TEST_CASE("overlapping rings are rejected") {
    SceneSpec spec;
    spec.kind = SceneKind::two_annulus;
    spec.separation = 1.5;  // rings of radius 1 would overlap
    CHECK_THROWS_AS(gen_scene(spec), ParamError);
}

TEST_CASE("single frame scene has one truth entry per loop") {
    SceneSpec spec;
    spec.frames = 1;
    spec.points_per_frame = 64;
    const Scene scene = gen_scene(spec);
    REQUIRE(scene.truth.frames.size() == 1);
    CHECK(scene.truth.loop_count(0) == 1);
}

TEST_CASE("membership covers the disc and rejects far points") {
    SceneSpec spec;
    spec.frames = 1;
    spec.points_per_frame = 64;
    const Scene scene = gen_scene(spec);
    const LoopTruth& truth = scene.truth.frames[0][0];
    CHECK(truth.thickness >= truth.radius);

    CHECK(check_membership(scene.truth, 0, 0, truth.center));
    CHECK_FALSE(check_membership(scene.truth, 0, 0, truth.center + Vec3{100.0 * truth.radius, 0, 0}));
    CHECK_THROWS_AS(check_membership(scene.truth, 7, 0, truth.center), ParamError);
}

TEST_CASE("suggested parameters satisfy the motion regularity constraint") {
    SceneSpec spec;
    spec.points_per_frame = 100;
    spec.frames = 2;
    const Scene scene = gen_scene(spec);
    const TrackerParams params = suggested_params(scene.report);
    CHECK(params.alpha > 0.0);
    CHECK(params.epsilon < 0.5 * params.alpha);
    CHECK(params.validate().empty());
    CHECK(params.beta >= 2.0 * spec.radius);  // near-circular rings localize poorly
}
