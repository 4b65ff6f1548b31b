#include <doctest.h>

#include <cmath>
#include <set>

#include "topotrack/oracle.hpp"
#include "topotrack/rng.hpp"
#include "topotrack/tracker.hpp"

using namespace topo;

namespace {

PointCloud unit_square(Vec3 offset = {0, 0, 0}) {
    return {{offset + Vec3{0, 0, 0}, offset + Vec3{1, 0, 0}, offset + Vec3{1, 1, 0},
             offset + Vec3{0, 1, 0}},
            0};
}

LoopDescriptor stub_loop(double birth, double death, Vec3 a, Vec3 b) {
    LoopDescriptor d;
    d.birth = birth;
    d.death = death;
    d.lifetime = death - birth;
    d.killer_edge.vertices = {0, 1};
    d.killer_edge.points = {a, b};
    d.killer_edge.value = death;
    return d;
}

}  // namespace

TEST_CASE("parameter validation") {
    TrackerParams p;
    p.alpha = 0.0;
    CHECK_THROWS_AS(p.validate(), ParamError);
    p.alpha = 1.0;
    p.beta = -1.0;
    CHECK_THROWS_AS(p.validate(), ParamError);
    p.beta = 0.0;
    p.epsilon = 0.6;  // >= alpha/2
    CHECK(!p.validate().empty());
    p.epsilon = 0.4;
    CHECK(p.validate().empty());
}

TEST_CASE("gates forbid mismatched births regardless of distance") {
    TrackerParams params;
    params.alpha = 0.1;
    params.beta = 0.1;
    params.epsilon = 0.04;
    const auto a = stub_loop(0.5, 1.0, {0, 0, 0}, {1, 0, 0});
    const auto b = stub_loop(0.5 + 3.0 * params.alpha, 1.0, {0, 0, 0}, {1, 0, 0});
    const CostMatrix m = gated_cost_matrix({a}, {b}, params);
    CHECK(!std::isfinite(m.at(0, 0)));

    const CostMatrix same = gated_cost_matrix({a}, {a}, params);
    CHECK(same.at(0, 0) == 0.0);
}

TEST_CASE("gates forbid distant killer edges") {
    TrackerParams params;
    params.alpha = 0.1;
    params.beta = 0.1;
    params.epsilon = 0.04;
    const auto a = stub_loop(0.5, 1.0, {0, 0, 0}, {1, 0, 0});
    const auto far = stub_loop(0.5, 1.0, {10, 0, 0}, {11, 0, 0});
    const CostMatrix m = gated_cost_matrix({a}, {far}, params);
    CHECK(!std::isfinite(m.at(0, 0)));
}

TEST_CASE("assignment fixtures") {
    CostMatrix m(2, 2);
    m.at(0, 0) = 1;
    m.at(0, 1) = 10;
    m.at(1, 0) = 10;
    m.at(1, 1) = 1;
    const Assignment a = assign(m);
    CHECK(a.pairs == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});
    CHECK(a.total_cost == 2.0);

    CostMatrix single(1, 1);
    single.at(0, 0) = 2.0;
    CHECK(assign(single).pairs == std::vector<std::pair<int, int>>{{0, 0}});

    const CostMatrix forbidden(2, 3);  // all entries forbidden
    const Assignment none = assign(forbidden);
    CHECK(none.pairs.empty());
    CHECK(none.unmatched_rows == std::vector<int>{0, 1});
    CHECK(none.unmatched_cols == std::vector<int>{0, 1, 2});

    CHECK(assign(CostMatrix{}).pairs.empty());
}

TEST_CASE("assignment matches exhaustive search on random matrices") {
    for (uint64_t seed = 1; seed <= 60; ++seed) {
        Rng rng(seed);
        const int rows = 2 + static_cast<int>(rng.below(6));
        const int cols = 2 + static_cast<int>(rng.below(6));
        CostMatrix m(rows, cols);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                if (rng.uniform01() < 0.3) continue;
                m.at(r, c) = rng.uniform01();
            }
        }
        const Assignment fast = assign(m);
        const Assignment exact = brute_force_assignment(m);
        CHECK(fast.pairs == exact.pairs);
        CHECK(fast.total_cost == doctest::Approx(exact.total_cost).epsilon(1e-12));
    }
}

TEST_CASE("id propagation") {
    int64_t next_id = 0;

    // first frame: fresh ids in list order
    std::vector<LoopDescriptor> first{stub_loop(0.1, 0.9, {0, 0, 0}, {1, 0, 0}),
                                      stub_loop(0.1, 0.7, {4, 0, 0}, {5, 0, 0})};
    const TopologicalState f0 = propagate_ids(Assignment{}, TopologicalState{}, first, 0, next_id);
    CHECK(f0.loops[0].id == 0);
    CHECK(f0.loops[1].id == 1);
    CHECK(next_id == 2);

    // matched loop keeps its id and records the distance
    TopologicalState prev;
    prev.loops = {stub_loop(0.1, 0.9, {0, 0, 0}, {1, 0, 0})};
    prev.loops[0].id = 7;
    Assignment match;
    match.pairs = {{0, 0}};
    match.pair_costs = {0.25};
    const TopologicalState f1 =
        propagate_ids(match, prev, {stub_loop(0.1, 0.9, {0, 0, 0}, {1, 0, 0})}, 1, next_id);
    CHECK(f1.loops[0].id == 7);
    CHECK(f1.loops[0].hausdorff_prev == 0.25);

    // one match, two fresh: counter continues from 2
    TopologicalState prev2;
    prev2.loops = {stub_loop(0.1, 0.9, {0, 0, 0}, {1, 0, 0}),
                   stub_loop(0.1, 0.8, {4, 0, 0}, {5, 0, 0})};
    prev2.loops[0].id = 0;
    prev2.loops[1].id = 1;
    Assignment one;
    one.pairs = {{0, 1}};
    one.pair_costs = {0.1};
    std::vector<LoopDescriptor> three{stub_loop(0.1, 0.8, {4, 0, 0}, {5, 0, 0}),
                                      stub_loop(0.2, 0.6, {8, 0, 0}, {9, 0, 0}),
                                      stub_loop(0.3, 0.5, {12, 0, 0}, {13, 0, 0})};
    const TopologicalState f2 = propagate_ids(one, prev2, three, 2, next_id);
    CHECK(f2.loops[0].id == 1);
    CHECK(f2.loops[1].id == 2);
    CHECK(f2.loops[2].id == 3);
    CHECK(next_id == 4);
}

TEST_CASE("duplicate inherited ids are an internal error") {
    int64_t next_id = 10;
    TopologicalState prev;
    prev.loops = {stub_loop(0.1, 0.9, {0, 0, 0}, {1, 0, 0}),
                  stub_loop(0.1, 0.8, {4, 0, 0}, {5, 0, 0})};
    prev.loops[0].id = 3;
    prev.loops[1].id = 3;  // corrupted state
    Assignment match;
    match.pairs = {{0, 0}, {1, 1}};
    match.pair_costs = {0.0, 0.0};
    std::vector<LoopDescriptor> curr{stub_loop(0.1, 0.9, {0, 0, 0}, {1, 0, 0}),
                                     stub_loop(0.1, 0.8, {4, 0, 0}, {5, 0, 0})};
    CHECK_THROWS_AS(propagate_ids(match, prev, curr, 1, next_id), InvariantError);
}

TEST_CASE("static sequence keeps ids with zero motion") {
    std::vector<PointCloud> frames;
    for (int t = 0; t < 10; ++t) {
        PointCloud f = unit_square();
        f.frame_index = t;
        frames.push_back(f);
    }
    TrackerParams params;
    params.alpha = 0.1;
    params.beta = 0.1;
    params.epsilon = 0.04;
    const TrackResult result = track_sequence(frames, params);
    REQUIRE(result.states.size() == 10);
    for (size_t t = 0; t < result.states.size(); ++t) {
        REQUIRE(result.states[t].loops.size() == 1);
        CHECK(result.states[t].loops[0].id == 0);
        if (t > 0) {
            REQUIRE(result.states[t].loops[0].hausdorff_prev.has_value());
            CHECK(*result.states[t].loops[0].hausdorff_prev == 0.0);
        }
    }
}

TEST_CASE("translating square keeps its id across 20 frames") {
    // side 2 so the loop lifetime (sqrt(2) - 1) clears the 0.3 filter
    std::vector<PointCloud> frames;
    for (int t = 0; t < 20; ++t) {
        PointCloud f{{{0.01 * t, 0, 0}, {2 + 0.01 * t, 0, 0}, {2 + 0.01 * t, 2, 0}, {0.01 * t, 2, 0}},
                     t};
        frames.push_back(f);
    }
    TrackerParams params;
    params.alpha = 0.3;
    params.beta = 0.3;
    params.epsilon = 0.1;
    const TrackResult result = track_sequence(frames, params);
    for (const TopologicalState& state : result.states) {
        REQUIRE(state.loops.size() == 1);
        CHECK(state.loops[0].id == 0);
    }
}

TEST_CASE("tracking is deterministic") {
    std::vector<PointCloud> frames;
    Rng rng(5);
    for (int t = 0; t < 5; ++t) {
        PointCloud f;
        f.frame_index = t;
        for (int i = 0; i < 40; ++i) {
            const double theta = 2.0 * 3.14159265358979323846 * i / 40;
            f.points.push_back({std::cos(theta) + 0.01 * t, std::sin(theta), 0.0});
        }
        frames.push_back(f);
    }
    TrackerParams params;
    params.alpha = 0.3;
    params.beta = 2.2;
    params.epsilon = 0.1;
    const TrackResult a = track_sequence(frames, params);
    const TrackResult b = track_sequence(frames, params);
    CHECK(a.states == b.states);
}

TEST_CASE("frame errors carry the frame index") {
    std::vector<PointCloud> frames{unit_square(), PointCloud{}};
    TrackerParams params;
    params.alpha = 0.1;
    try {
        track_sequence(frames, params);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("frame 1") != std::string::npos);
    }
    CHECK_THROWS_AS(track_sequence({}, params), InputError);
}

TEST_CASE("oversized frames are subsampled before tracking") {
    Rng rng(88);
    std::vector<PointCloud> frames;
    for (int t = 0; t < 4; ++t) {
        PointCloud f;
        f.frame_index = t;
        for (int i = 0; i < 900; ++i) {
            const double theta = 2.0 * 3.14159265358979323846 * i / 900;
            const double rad = 1.0 + 0.01 * rng.uniform(-1.0, 1.0);
            f.points.push_back({1.05 * rad * std::cos(theta) + 0.005 * t,
                                0.95 * rad * std::sin(theta), 0.01 * rng.uniform(-1.0, 1.0)});
        }
        frames.push_back(std::move(f));
    }
    TrackerParams params;
    params.alpha = 0.15;
    params.beta = 2.2;
    params.epsilon = 0.06;
    params.max_points = 250;
    const TrackResult result = track_sequence(frames, params);
    for (const TopologicalState& state : result.states) {
        REQUIRE(state.loops.size() == 1);
        CHECK(state.loops[0].id == 0);
        // descriptor indices refer to the subsampled frame
        for (int v : state.loops[0].killer_edge.vertices) CHECK(v < params.max_points);
    }
}

TEST_CASE("ids are never reused after a loop disappears") {
    // square loop appears, disappears, reappears: the revived loop gets a new id
    std::vector<PointCloud> frames;
    PointCloud square = unit_square();
    PointCloud line{{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}}, 0};
    frames.push_back(square);
    frames.push_back(line);
    frames.push_back(square);
    for (int t = 0; t < 3; ++t) frames[t].frame_index = t;

    TrackerParams params;
    params.alpha = 0.1;
    params.beta = 0.1;
    params.epsilon = 0.04;
    const TrackResult result = track_sequence(frames, params);
    REQUIRE(result.states[0].loops.size() == 1);
    CHECK(result.states[0].loops[0].id == 0);
    CHECK(result.states[1].loops.empty());
    REQUIRE(result.states[2].loops.size() == 1);
    CHECK(result.states[2].loops[0].id == 1);
}
