"""Smoke tests for the python bindings."""

import math

import topotrack as tt


def test_square_fixture():
    square = tt.PointCloud([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)])
    diagram = tt.compute_ph1(square)
    assert len(diagram.features) == 1
    feature = diagram.features[0]
    assert abs(feature.birth - 0.5) < 1e-12
    assert abs(feature.death - math.sqrt(2.0) / 2.0) < 1e-12

    descriptor = tt.extract_loop_descriptor(feature, square)
    assert list(descriptor.killer_edge.vertices) == [0, 2]
    assert len(descriptor.killer_triangles) == 2

    mixture = tt.loop_mixture(descriptor)
    assert abs(sum(mixture.weights) - 1.0) < 1e-12
    assert tt.mixture_logpdf(mixture, tt.mixture_mean(mixture)) > tt.mixture_logpdf(
        mixture, (50.0, 50.0, 50.0)
    )


def test_engine_matches_reference():
    spec = tt.SceneSpec()
    spec.points_per_frame = 40
    spec.frames = 1
    spec.seed = 3
    scene = tt.gen_scene(spec)
    cloud = tt.PointCloud(scene.frames[0].points)
    r_max = tt.enclosing_radius(cloud)
    fast = tt.compute_ph1(cloud, r_max)
    slow = tt.naive_reduction_ph1(cloud, r_max)
    assert [(f.birth, f.death) for f in fast.features] == [
        (f.birth, f.death) for f in slow.features
    ]


def test_tracking_scene():
    spec = tt.SceneSpec()
    spec.kind = tt.SceneKind.two_annulus
    spec.points_per_frame = 120
    spec.frames = 5
    spec.noise_sigma = 0.002
    spec.separation = 6.0
    spec.seed = 1
    scene = tt.gen_scene(spec)
    params = tt.suggested_params(scene.report)
    result = tt.track_sequence(scene.frames, params)
    assert len(result.states) == 5
    first_ids = sorted(l.id for l in result.states[0].loops)
    assert len(first_ids) == 2
    for state in result.states:
        assert sorted(l.id for l in state.loops) == first_ids
    mean = tt.mixture_mean(tt.loop_mixture(result.states[0].loops[0]))
    assert tt.check_membership(scene.truth, 0, 0, mean) or tt.check_membership(
        scene.truth, 0, 1, mean
    )


def test_assignment_and_sampling():
    matching = tt.assign([[1.0, 10.0], [10.0, 1.0]])
    assert matching.pairs == [(0, 0), (1, 1)]
    assert matching.total_cost == 2.0

    gated = tt.assign([[None, None], [None, None]])
    assert gated.pairs == []

    exact = tt.brute_force_assignment([[1.0, 10.0], [10.0, 1.0]])
    assert exact.pairs == matching.pairs

    mean, cov = tt.simplex_gaussian((0, 0, 0), (1, 0, 0), (0, 1, 0))
    assert abs(mean[0] - 1.0 / 3.0) < 1e-12
    assert abs(cov[0] - (1.0 / 3.0 + 1e-6)) < 1e-12


def test_subsample_determinism():
    spec = tt.SceneSpec()
    spec.points_per_frame = 100
    spec.frames = 1
    spec.seed = 2
    scene = tt.gen_scene(spec)
    cloud = tt.PointCloud(scene.frames[0].points)
    a = tt.farthest_point_subsample(cloud, 25, seed=9)
    b = tt.farthest_point_subsample(cloud, 25, seed=9)
    assert a.points == b.points
    assert len(a.points) == 25
    assert tt.covering_radius(cloud, a) <= tt.max_nn_distance(cloud) * 5


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if not name.startswith("test_") or not callable(fn):
            continue
        try:
            fn()
            print(f"ok   {name}")
        except AssertionError as exc:
            print(f"FAIL {name}: {exc}")
            failures += 1
    raise SystemExit(1 if failures else 0)
