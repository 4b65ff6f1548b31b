#pragma once

#include "topotrack/persistence.hpp"

namespace topo {

// Symmetric 3x3 matrix, row-major.
struct Mat3 {
    std::array<double, 9> m{};

    double at(int r, int c) const { return m[r * 3 + c]; }
    double& at(int r, int c) { return m[r * 3 + c]; }
    static Mat3 identity(double scale = 1.0) {
        Mat3 out;
        out.m = {scale, 0, 0, 0, scale, 0, 0, 0, scale};
        return out;
    }
    bool operator==(const Mat3& o) const { return m == o.m; }
};

// Lower-triangular Cholesky factor; throws InvariantError if the matrix is
// not positive definite.
Mat3 cholesky_lower(const Mat3& a);

// Eigenvalues of a symmetric 3x3 matrix, ascending.
std::array<double, 3> sym3_eigenvalues(const Mat3& a);

// Gaussian over one triangle: mean at the centroid, covariance the unbiased
// sample covariance of the three vertices plus eps_reg on the diagonal (so
// degenerate triangles still give a valid density).
std::pair<Vec3, Mat3> simplex_gaussian(const Vec3& v1, const Vec3& v2, const Vec3& v3, double eps_reg);

// Probabilistic footprint of one tracked loop: one Gaussian component per
// killer triangle and per neighbor triangle, weighted by their filtration
// values (normalized; the raw seeds are kept for output fidelity).
struct LoopMixture {
    enum class Source { killer, neighbor };

    int64_t loop_id = -1;
    std::vector<double> weights;
    std::vector<double> raw_weights;
    std::vector<Vec3> means;
    std::vector<Mat3> covariances;
    std::vector<Source> component_source;

    int components() const { return static_cast<int>(weights.size()); }

    bool operator==(const LoopMixture& o) const {
        return loop_id == o.loop_id && weights == o.weights && raw_weights == o.raw_weights &&
               means == o.means && covariances == o.covariances && component_source == o.component_source;
    }
};

inline constexpr double kDefaultEpsReg = 1e-6;

LoopMixture loop_mixture(const LoopDescriptor& descriptor, double eps_reg = kDefaultEpsReg);

double mixture_logpdf(const LoopMixture& mixture, const Vec3& x);

std::vector<Vec3> mixture_sample(const LoopMixture& mixture, int n, uint64_t seed);

struct LabeledSamples {
    std::vector<Vec3> points;
    std::vector<int> component;
};
LabeledSamples mixture_sample_labeled(const LoopMixture& mixture, int n, uint64_t seed);

Vec3 mixture_mean(const LoopMixture& mixture);

}  // namespace topo
