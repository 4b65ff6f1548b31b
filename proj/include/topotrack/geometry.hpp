#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace topo {

// Error taxonomy, mapped to CLI exit codes 1/2/3.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};
struct ParamError : std::runtime_error {
    explicit ParamError(const std::string& what) : std::runtime_error(what) {}
};
struct InvariantError : std::runtime_error {
    explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double squared_norm() const { return dot(*this); }
    double norm() const { return std::sqrt(squared_norm()); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline double squared_distance(const Vec3& a, const Vec3& b) { return (a - b).squared_norm(); }
inline double distance(const Vec3& a, const Vec3& b) { return std::sqrt(squared_distance(a, b)); }

// One observed frame. Point order is stable: index i refers to the same
// physical point for the lifetime of the frame.
struct PointCloud {
    std::vector<Vec3> points;
    int frame_index = 0;

    int size() const { return static_cast<int>(points.size()); }
    bool empty() const { return points.empty(); }
};

// Throws InputError on empty clouds or non-finite coordinates.
void validate_cloud(const PointCloud& cloud);

// Dense symmetric Euclidean distance matrix. All filtration values in the
// project are derived from one of these, so every consumer sees bit-identical
// doubles for the same cloud.
class DistanceMatrix {
public:
    explicit DistanceMatrix(const PointCloud& cloud);

    int size() const { return n_; }
    double operator()(int i, int j) const { return d_[static_cast<size_t>(i) * n_ + j]; }
    // Filtration value of edge (i,j): half the distance. Exact halving.
    double half(int i, int j) const { return 0.5 * d_[static_cast<size_t>(i) * n_ + j]; }
    const double* row(int i) const { return d_.data() + static_cast<size_t>(i) * n_; }

private:
    int n_ = 0;
    std::vector<double> d_;
};

DistanceMatrix pairwise_distances(const PointCloud& cloud);

// Symmetric Hausdorff distance between two finite vertex sets.
double hausdorff(std::span<const Vec3> a, std::span<const Vec3> b);

// max over `dense` of the distance to the nearest point of `subset`
// (directed Hausdorff dense -> subset).
double covering_radius(const PointCloud& dense, const PointCloud& subset);

// max over points of the distance to the nearest *other* point. Conservative
// covering-radius bound for curve-like samples; used for parameter defaults.
double max_nn_distance(const PointCloud& cloud);

}  // namespace topo
