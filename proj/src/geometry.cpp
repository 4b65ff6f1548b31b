#include "topotrack/geometry.hpp"

#include <algorithm>
#include <limits>

namespace topo {

void validate_cloud(const PointCloud& cloud) {
    if (cloud.empty()) throw InputError("point cloud is empty");
    for (size_t i = 0; i < cloud.points.size(); ++i) {
        if (!cloud.points[i].finite()) {
            throw InputError("non-finite coordinate at point " + std::to_string(i) +
                             " of frame " + std::to_string(cloud.frame_index));
        }
    }
}

DistanceMatrix::DistanceMatrix(const PointCloud& cloud) {
    validate_cloud(cloud);
    n_ = cloud.size();
    d_.assign(static_cast<size_t>(n_) * n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        for (int j = i + 1; j < n_; ++j) {
            const double d = distance(cloud.points[i], cloud.points[j]);
            d_[static_cast<size_t>(i) * n_ + j] = d;
            d_[static_cast<size_t>(j) * n_ + i] = d;
        }
    }
}

DistanceMatrix pairwise_distances(const PointCloud& cloud) { return DistanceMatrix(cloud); }

double hausdorff(std::span<const Vec3> a, std::span<const Vec3> b) {
    if (a.empty() || b.empty()) throw InputError("hausdorff: empty point set");
    auto directed = [](std::span<const Vec3> from, std::span<const Vec3> to) {
        double worst = 0.0;
        for (const Vec3& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const Vec3& q : to) best = std::min(best, squared_distance(p, q));
            worst = std::max(worst, best);
        }
        return std::sqrt(worst);
    };
    return std::max(directed(a, b), directed(b, a));
}

double covering_radius(const PointCloud& dense, const PointCloud& subset) {
    validate_cloud(dense);
    validate_cloud(subset);
    double worst = 0.0;
    for (const Vec3& p : dense.points) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec3& q : subset.points) best = std::min(best, squared_distance(p, q));
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

double max_nn_distance(const PointCloud& cloud) {
    validate_cloud(cloud);
    const int n = cloud.size();
    if (n < 2) return 0.0;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            best = std::min(best, squared_distance(cloud.points[i], cloud.points[j]));
        }
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

}  // namespace topo
