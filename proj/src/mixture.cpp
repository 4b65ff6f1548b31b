#include "topotrack/mixture.hpp"

#include <algorithm>
#include <cmath>

#include "topotrack/rng.hpp"

namespace topo {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

Mat3 cholesky_lower(const Mat3& a) {
    Mat3 l{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = a.at(i, j);
            for (int k = 0; k < j; ++k) sum -= l.at(i, k) * l.at(j, k);
            if (i == j) {
                if (sum <= 0.0) throw InvariantError("cholesky_lower: matrix not positive definite");
                l.at(i, i) = std::sqrt(sum);
            } else {
                l.at(i, j) = sum / l.at(j, j);
            }
        }
    }
    return l;
}

std::array<double, 3> sym3_eigenvalues(const Mat3& a) {
    // closed-form symmetric 3x3 eigenvalues via the trigonometric method
    const double p1 = a.at(0, 1) * a.at(0, 1) + a.at(0, 2) * a.at(0, 2) + a.at(1, 2) * a.at(1, 2);
    const double q = (a.at(0, 0) + a.at(1, 1) + a.at(2, 2)) / 3.0;
    if (p1 == 0.0) {
        std::array<double, 3> eig{a.at(0, 0), a.at(1, 1), a.at(2, 2)};
        std::sort(eig.begin(), eig.end());
        return eig;
    }
    const double d0 = a.at(0, 0) - q, d1 = a.at(1, 1) - q, d2 = a.at(2, 2) - q;
    const double p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);

    // B = (A - q I) / p, r = det(B) / 2 clamped into [-1, 1]
    auto b = [&](int r, int c) { return ((r == c ? a.at(r, c) - q : a.at(r, c))) / p; };
    const double detb = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                        b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                        b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
    const double r = std::clamp(detb / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;

    const double eig1 = q + 2.0 * p * std::cos(phi);
    const double eig3 = q + 2.0 * p * std::cos(phi + kTwoPi / 3.0);
    const double eig2 = 3.0 * q - eig1 - eig3;
    std::array<double, 3> eig{eig3, eig2, eig1};
    std::sort(eig.begin(), eig.end());
    return eig;
}

std::pair<Vec3, Mat3> simplex_gaussian(const Vec3& v1, const Vec3& v2, const Vec3& v3, double eps_reg) {
    if (!(eps_reg > 0.0)) throw ParamError("simplex_gaussian: eps_reg must be > 0");
    const Vec3 mean = (v1 + v2 + v3) * (1.0 / 3.0);
    Mat3 cov{};
    for (const Vec3& v : {v1, v2, v3}) {
        const Vec3 d = v - mean;
        const double dv[3] = {d.x, d.y, d.z};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) cov.at(r, c) += 0.5 * dv[r] * dv[c];
        }
    }
    for (int i = 0; i < 3; ++i) cov.at(i, i) += eps_reg;
    return {mean, cov};
}

LoopMixture loop_mixture(const LoopDescriptor& descriptor, double eps_reg) {
    if (descriptor.killer_triangles.empty()) {
        throw InvariantError("loop_mixture: descriptor has no killer triangles");
    }
    LoopMixture mix;
    mix.loop_id = descriptor.id;

    auto add_component = [&](const TriangleInfo& t, LoopMixture::Source source) {
        auto [mean, cov] = simplex_gaussian(t.points[0], t.points[1], t.points[2], eps_reg);
        mix.raw_weights.push_back(t.value);
        mix.means.push_back(mean);
        mix.covariances.push_back(cov);
        mix.component_source.push_back(source);
    };
    for (const TriangleInfo& t : descriptor.killer_triangles) add_component(t, LoopMixture::Source::killer);
    for (const TriangleInfo& t : descriptor.neighbor_triangles) {
        add_component(t, LoopMixture::Source::neighbor);
    }

    double total = 0.0;
    for (double w : mix.raw_weights) total += w;
    if (!(total > 0.0)) throw InvariantError("loop_mixture: weight seeds sum to zero");
    mix.weights.reserve(mix.raw_weights.size());
    for (double w : mix.raw_weights) mix.weights.push_back(w / total);
    return mix;
}

double mixture_logpdf(const LoopMixture& mixture, const Vec3& x) {
    if (mixture.components() == 0) throw InvariantError("mixture_logpdf: empty mixture");
    std::vector<double> terms;
    terms.reserve(mixture.components());
    for (int i = 0; i < mixture.components(); ++i) {
        const Mat3 l = cholesky_lower(mixture.covariances[i]);
        const Vec3 d = x - mixture.means[i];
        // solve L y = d
        double y0 = d.x / l.at(0, 0);
        double y1 = (d.y - l.at(1, 0) * y0) / l.at(1, 1);
        double y2 = (d.z - l.at(2, 0) * y0 - l.at(2, 1) * y1) / l.at(2, 2);
        const double quad = y0 * y0 + y1 * y1 + y2 * y2;
        const double logdet = 2.0 * (std::log(l.at(0, 0)) + std::log(l.at(1, 1)) + std::log(l.at(2, 2)));
        const double logn = -0.5 * (3.0 * std::log(kTwoPi) + logdet + quad);
        terms.push_back(std::log(mixture.weights[i]) + logn);
    }
    const double peak = *std::max_element(terms.begin(), terms.end());
    if (!std::isfinite(peak)) return peak;  // all components have zero weight at -inf
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - peak);
    return peak + std::log(acc);
}

LabeledSamples mixture_sample_labeled(const LoopMixture& mixture, int n, uint64_t seed) {
    if (n < 1) throw ParamError("mixture_sample: n must be >= 1");
    if (mixture.components() == 0) throw InvariantError("mixture_sample: empty mixture");

    std::vector<double> cumulative(mixture.weights.size());
    double acc = 0.0;
    for (size_t i = 0; i < mixture.weights.size(); ++i) {
        acc += mixture.weights[i];
        cumulative[i] = acc;
    }
    cumulative.back() = 1.0;

    std::vector<Mat3> factors;
    factors.reserve(mixture.components());
    for (const Mat3& cov : mixture.covariances) factors.push_back(cholesky_lower(cov));

    LabeledSamples out;
    out.points.reserve(n);
    out.component.reserve(n);
    Rng rng(seed);
    for (int s = 0; s < n; ++s) {
        const double u = rng.uniform01();
        const int c = static_cast<int>(
            std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        const Vec3 z = rng.normal_vec3();
        const Mat3& l = factors[c];
        const Vec3 p{
            mixture.means[c].x + l.at(0, 0) * z.x,
            mixture.means[c].y + l.at(1, 0) * z.x + l.at(1, 1) * z.y,
            mixture.means[c].z + l.at(2, 0) * z.x + l.at(2, 1) * z.y + l.at(2, 2) * z.z,
        };
        out.points.push_back(p);
        out.component.push_back(c);
    }
    return out;
}

std::vector<Vec3> mixture_sample(const LoopMixture& mixture, int n, uint64_t seed) {
    return mixture_sample_labeled(mixture, n, seed).points;
}

Vec3 mixture_mean(const LoopMixture& mixture) {
    Vec3 mean;
    for (int i = 0; i < mixture.components(); ++i) mean += mixture.means[i] * mixture.weights[i];
    return mean;
}

}  // namespace topo
