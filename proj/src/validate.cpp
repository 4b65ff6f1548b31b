#include "topotrack/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>

#include "topotrack/mixture.hpp"
#include "topotrack/oracle.hpp"
#include "topotrack/rng.hpp"
#include "topotrack/scenegen.hpp"
#include "topotrack/tracker.hpp"

namespace topo {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

void check(SuiteResult& suite, bool ok, const std::string& what) {
    suite.lines.push_back(std::string(ok ? "  ok   " : "  FAIL ") + what);
    if (!ok) suite.passed = false;
}

PointCloud random_cloud(Rng& rng, int n) {
    PointCloud c;
    for (int i = 0; i < n; ++i) {
        c.points.push_back({rng.uniform01(), rng.uniform01(), rng.uniform01()});
    }
    return c;
}

PointCloud annulus_cloud(Rng& rng, int n, double radius, double tube) {
    PointCloud c;
    for (int i = 0; i < n; ++i) {
        const double theta = 2.0 * kPi * i / n;
        const double rad = radius + 0.5 * tube * rng.uniform(-1.0, 1.0);
        c.points.push_back({1.05 * rad * std::cos(theta), 0.95 * rad * std::sin(theta),
                            0.25 * tube * rng.uniform(-1.0, 1.0)});
    }
    return c;
}

// Cloth-like frame: a jittered sheet with one circular opening, rigidly
// drifting per frame. This is the representative per-frame workload.
std::vector<PointCloud> sheet_sequence(int points, int frames, uint64_t seed) {
    Rng rng(seed);
    std::vector<Vec3> base;
    const double hole = 0.35;
    while (static_cast<int>(base.size()) < points) {
        const double x = rng.uniform(-1.0, 1.0), y = rng.uniform(-1.0, 1.0);
        if (x * x + y * y < hole * hole) continue;
        base.push_back({x, y, 0.08 * std::sin(2.0 * x) * std::cos(1.5 * y) + 0.01 * rng.uniform(-1, 1)});
    }
    std::vector<PointCloud> out;
    for (int t = 0; t < frames; ++t) {
        PointCloud frame;
        frame.frame_index = t;
        const double phi = 0.004 * t;
        const double c = std::cos(phi), s = std::sin(phi);
        const Vec3 drift{0.006 * t, 0.004 * t, 0.0};
        for (const Vec3& b : base) {
            frame.points.push_back({drift.x + c * b.x - s * b.y, drift.y + s * b.x + c * b.y, b.z});
        }
        out.push_back(std::move(frame));
    }
    return out;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

}  // namespace

SuiteResult validate_oracle(uint64_t seed) {
    SuiteResult suite{"oracle", true, {}};

    const PointCloud square{{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, 0};
    const DistanceMatrix dsq(square);
    const auto diag = compute_ph1(dsq, enclosing_radius(dsq), 0);
    const bool square_ok = diag.features.size() == 1 &&
                           std::abs(diag.features[0].birth - 0.5) < 1e-12 &&
                           std::abs(diag.features[0].death - std::sqrt(2.0) / 2.0) < 1e-12;
    check(suite, square_ok, "unit square: birth 0.5, death sqrt(2)/2");

    int mismatches = 0;
    for (int i = 0; i < 100; ++i) {
        Rng rng(seed + i + 1);
        const PointCloud cloud = random_cloud(rng, 12);
        const DistanceMatrix dist(cloud);
        const double r_max = enclosing_radius(dist);
        const auto engine = compute_ph1(dist, r_max, 0);
        const auto reference = naive_reduction_ph1(cloud, r_max);
        if (!(engine.features == reference.features)) ++mismatches;
    }
    check(suite, mismatches == 0,
          fmt("engine vs naive reduction, 100 random 12-point clouds: %d mismatches", mismatches));
    return suite;
}

SuiteResult validate_assignment(uint64_t seed) {
    SuiteResult suite{"assignment", true, {}};
    int mismatches = 0;
    for (int i = 0; i < 100; ++i) {
        Rng rng(seed + i + 1);
        CostMatrix cost(6, 6);
        for (int r = 0; r < 6; ++r) {
            for (int c = 0; c < 6; ++c) {
                if (rng.uniform01() < 0.3) continue;  // leave forbidden
                cost.at(r, c) = rng.uniform01();
            }
        }
        const Assignment fast = assign(cost);
        const Assignment exact = brute_force_assignment(cost);
        if (fast.pairs != exact.pairs || std::abs(fast.total_cost - exact.total_cost) > 1e-9) {
            ++mismatches;
        }
    }
    check(suite, mismatches == 0,
          fmt("assign vs exhaustive, 100 random 6x6 gated matrices: %d mismatches", mismatches));
    return suite;
}

SuiteResult validate_lemma2(uint64_t seed) {
    SuiteResult suite{"lemma2", true, {}};
    int failures = 0;
    double worst_db = 0.0, worst_dd = 0.0;
    for (int i = 0; i < 50; ++i) {
        Rng rng(seed + i + 1);
        const PointCloud dense = annulus_cloud(rng, 200, 1.0, 0.03);
        const PointCloud sub = farthest_point_subsample(dense, 60, seed + i + 1);
        const double alpha = covering_radius(dense, sub);
        const LemmaReport report = verify_lemma2(dense, sub, alpha);
        if (!report.ok || report.checked < 1) ++failures;
        worst_db = std::max(worst_db, report.worst_d_birth);
        worst_dd = std::max(worst_dd, report.worst_d_death);
    }
    check(suite, failures == 0,
          fmt("subsampling shift bounds, 50 annulus scenes (200 -> 60 points): %d failures, "
              "worst shifts %.4f / %.4f",
              failures, worst_db, worst_dd));
    return suite;
}

SuiteResult validate_lemma3(uint64_t seed) {
    SuiteResult suite{"lemma3", true, {}};
    const double epsilon = 0.1;
    int failures = 0;
    for (int i = 0; i < 50; ++i) {
        Rng rng(seed + i + 1);
        const PointCloud cloud = annulus_cloud(rng, 200, 1.0, 0.03);
        PointCloud moved = cloud;
        for (Vec3& p : moved.points) p += rng.unit_vec3() * (0.4 * epsilon * rng.uniform01());
        const LemmaReport report = verify_lemma3(cloud, moved, epsilon);
        if (!report.ok || report.checked < 1) ++failures;
    }
    check(suite, failures == 0,
          fmt("perturbation shift bounds, 50 trials (displacement < 0.4 eps): %d failures", failures));

    // exact invariance under grid-aligned translation
    int exact_failures = 0;
    const double grid = 0x1.0p-20;
    for (int i = 0; i < 10; ++i) {
        Rng rng(seed + 1000 + i);
        PointCloud cloud = annulus_cloud(rng, 150, 1.0, 0.03);
        for (Vec3& p : cloud.points) {
            p.x = std::round(p.x / grid) * grid;
            p.y = std::round(p.y / grid) * grid;
            p.z = std::round(p.z / grid) * grid;
        }
        const double shift = std::round(0.5 * epsilon / grid) * grid;
        PointCloud moved = cloud;
        for (Vec3& p : moved.points) p += Vec3{shift, shift, 0.0};
        const LemmaReport report = verify_lemma3(cloud, moved, epsilon);
        if (!report.ok || report.worst_d_birth != 0.0 || report.worst_d_death != 0.0) ++exact_failures;
    }
    check(suite, exact_failures == 0,
          fmt("rigid translation leaves the diagram unchanged exactly: %d failures", exact_failures));
    return suite;
}

SuiteResult validate_perf(uint64_t seed) {
    SuiteResult suite{"perf", true, {}};
    using Clock = std::chrono::steady_clock;

    for (const auto& [points, budget_ms] : {std::pair<int, double>{512, 200.0}, {768, 500.0}}) {
        const auto frames = sheet_sequence(points, 50, seed + points);
        TrackerParams params;
        params.alpha = 0.25;
        params.beta = 0.8;
        params.epsilon = 0.05;
        params.max_points = 768;
        params.validate();

        std::vector<double> frame_ms;
        int64_t next_id = 0;
        TopologicalState prev;
        bool have_prev = false;
        size_t loops_seen = 0;
        for (const PointCloud& cloud : frames) {
            const auto t0 = Clock::now();
            const DistanceMatrix dist(cloud);
            const double r_max = enclosing_radius(dist);
            const auto diagram = compute_ph1(dist, r_max, cloud.frame_index);
            const auto significant = filter_significant(diagram, params.alpha);
            std::vector<LoopDescriptor> descriptors;
            for (const LoopFeature& f : significant.features) {
                descriptors.push_back(extract_loop_descriptor(f, dist, cloud));
            }
            std::sort(descriptors.begin(), descriptors.end(), descriptor_canonical_less);
            Assignment matching;
            if (have_prev) matching = assign(gated_cost_matrix(descriptors, prev.loops, params));
            prev = propagate_ids(matching, prev, std::move(descriptors), cloud.frame_index, next_id);
            have_prev = true;
            loops_seen += prev.loops.size();
            frame_ms.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
        }
        const double med = median(frame_ms);
        check(suite, med <= budget_ms,
              fmt("%d-point frames: median %.1f ms over 50 frames (budget %.0f ms, %zu loop "
                  "observations)",
                  points, med, budget_ms, loops_seen));
    }
    return suite;
}

std::vector<SuiteResult> validate_all(uint64_t seed) {
    return {validate_oracle(seed), validate_assignment(seed), validate_lemma2(seed),
            validate_lemma3(seed), validate_perf(seed)};
}

}  // namespace topo
