#include <doctest.h>

#include <cmath>

#include "topotrack/geometry.hpp"
#include "topotrack/rng.hpp"

using namespace topo;

TEST_CASE("pairwise distances on a 3-4-5 pair") {
    const PointCloud cloud{{{0, 0, 0}, {3, 4, 0}}, 0};
    const DistanceMatrix d(cloud);
    CHECK(d(0, 0) == 0.0);
    CHECK(d(1, 1) == 0.0);
    CHECK(d(0, 1) == 5.0);
    CHECK(d(1, 0) == 5.0);
}

TEST_CASE("pairwise distances on a single point") {
    const PointCloud cloud{{{1, 2, 3}}, 0};
    const DistanceMatrix d(cloud);
    CHECK(d.size() == 1);
    CHECK(d(0, 0) == 0.0);
}

TEST_CASE("pairwise distances match a direct recomputation") {
    Rng rng(99);
    PointCloud cloud;
    for (int i = 0; i < 10; ++i) {
        cloud.points.push_back({rng.uniform01(), rng.uniform01(), rng.uniform01()});
    }
    const DistanceMatrix d(cloud);
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const Vec3 diff = cloud.points[i] - cloud.points[j];
            const double expected = std::sqrt(diff.x * diff.x + diff.y * diff.y + diff.z * diff.z);
            CHECK(d(i, j) == expected);
        }
    }
}

TEST_CASE("non-finite coordinates are rejected") {
    PointCloud cloud{{{0, 0, 0}, {std::nan(""), 0, 0}}, 0};
    CHECK_THROWS_AS(DistanceMatrix{cloud}, InputError);
    CHECK_THROWS_AS(validate_cloud(PointCloud{}), InputError);
}

TEST_CASE("hausdorff distance basics") {
    const std::vector<Vec3> a{{0, 0, 0}, {1, 0, 0}};
    CHECK(hausdorff(a, a) == 0.0);

    const std::vector<Vec3> b{{0, 2, 0}, {1, 2, 0}};
    CHECK(hausdorff(a, b) == 2.0);

    const std::vector<Vec3> p{{0, 0, 0}};
    const std::vector<Vec3> q{{3, 4, 0}};
    CHECK(hausdorff(p, q) == 5.0);

    CHECK_THROWS_AS(hausdorff(std::vector<Vec3>{}, a), InputError);
}

TEST_CASE("hausdorff matches a direct max-min recomputation") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Vec3> a, b;
        for (int i = 0; i < 6; ++i) {
            a.push_back(rng.normal_vec3());
            b.push_back(rng.normal_vec3());
        }
        auto directed = [](const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
            double worst = 0.0;
            for (const Vec3& p : from) {
                double best = 1e300;
                for (const Vec3& q : to) best = std::min(best, distance(p, q));
                worst = std::max(worst, best);
            }
            return worst;
        };
        const double expected = std::max(directed(a, b), directed(b, a));
        CHECK(hausdorff(a, b) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("covering radius of a subset") {
    PointCloud dense;
    for (int i = 0; i < 10; ++i) dense.points.push_back({static_cast<double>(i), 0, 0});
    PointCloud sub{{{0, 0, 0}, {9, 0, 0}}, 0};
    CHECK(covering_radius(dense, sub) == 4.0);  // point 4 or 5 is 4 away from both ends
    CHECK(covering_radius(dense, dense) == 0.0);
}

TEST_CASE("max nearest-neighbor distance") {
    PointCloud cloud{{{0, 0, 0}, {1, 0, 0}, {3, 0, 0}}, 0};
    CHECK(max_nn_distance(cloud) == 2.0);
    CHECK(max_nn_distance(PointCloud{{{5, 5, 5}}, 0}) == 0.0);
}
