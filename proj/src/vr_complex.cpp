#include "topotrack/vr_complex.hpp"

#include <algorithm>
#include <limits>

namespace topo {

double enclosing_radius(const DistanceMatrix& dist) {
    const int n = dist.size();
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        double farthest = 0.0;
        for (int j = 0; j < n; ++j) farthest = std::max(farthest, dist(i, j));
        best = std::min(best, farthest);
    }
    return 0.5 * best;
}

double enclosing_radius(const PointCloud& cloud) { return enclosing_radius(DistanceMatrix(cloud)); }

Filtration build_filtration(const DistanceMatrix& dist, double r_max) {
    if (!(r_max > 0.0)) throw ParamError("build_filtration: r_max must be positive");
    const int n = dist.size();

    Filtration f;
    f.r_max = r_max;
    f.source_count = n;

    for (int i = 0; i < n; ++i) f.simplices.push_back({{i, -1, -1}, 0, 0.0});

    // adjacency limited to the truncation radius
    std::vector<char> adj(static_cast<size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double v = dist.half(i, j);
            if (v <= r_max) {
                adj[static_cast<size_t>(i) * n + j] = 1;
                adj[static_cast<size_t>(j) * n + i] = 1;
                f.simplices.push_back({{i, j, -1}, 1, v});
            }
        }
    }

    // triangles are 3-cliques; their value is the max edge value, i.e. the
    // half-length of their longest edge
    for (int i = 0; i < n; ++i) {
        const char* arow = adj.data() + static_cast<size_t>(i) * n;
        for (int j = i + 1; j < n; ++j) {
            if (!arow[j]) continue;
            const char* brow = adj.data() + static_cast<size_t>(j) * n;
            for (int k = j + 1; k < n; ++k) {
                if (!arow[k] || !brow[k]) continue;
                const double v = std::max(dist.half(i, j), std::max(dist.half(i, k), dist.half(j, k)));
                f.simplices.push_back({{i, j, k}, 2, v});
            }
        }
    }

    std::sort(f.simplices.begin(), f.simplices.end(), canonical_less);
    return f;
}

Filtration build_filtration(const PointCloud& cloud, double r_max) {
    return build_filtration(DistanceMatrix(cloud), r_max);
}

PointCloud farthest_point_subsample(const PointCloud& cloud, int n, uint64_t seed) {
    validate_cloud(cloud);
    if (n < 1) throw ParamError("farthest_point_subsample: n must be >= 1");
    const int size = cloud.size();
    if (size <= n) return cloud;

    const int start = static_cast<int>(seed % static_cast<uint64_t>(size));
    std::vector<char> chosen(size, 0);
    std::vector<double> min_sq(size, std::numeric_limits<double>::infinity());

    int current = start;
    chosen[current] = 1;
    for (int picked = 1; picked < n; ++picked) {
        int best = -1;
        double best_sq = -1.0;
        for (int j = 0; j < size; ++j) {
            if (chosen[j]) continue;
            const double d = squared_distance(cloud.points[current], cloud.points[j]);
            if (d < min_sq[j]) min_sq[j] = d;
            if (min_sq[j] > best_sq) {
                best_sq = min_sq[j];
                best = j;
            }
        }
        current = best;
        chosen[current] = 1;
    }

    PointCloud out;
    out.frame_index = cloud.frame_index;
    out.points.reserve(n);
    for (int i = 0; i < size; ++i) {
        if (chosen[i]) out.points.push_back(cloud.points[i]);
    }
    return out;
}

}  // namespace topo
