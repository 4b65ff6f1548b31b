#pragma once

#include <cstdint>
#include <random>

#include "topotrack/geometry.hpp"

namespace topo {

// All randomness in the project goes through these helpers. std::mt19937_64
// has a fixed spec, and the conversions below avoid std::*_distribution,
// whose output is implementation-defined; results are therefore reproducible
// across standard libraries and platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next() { return gen_(); }

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // uniform integer in [0, n)
    uint64_t below(uint64_t n) { return gen_() % n; }

    // standard normal via Box-Muller
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    Vec3 normal_vec3() {
        const double a = normal();
        const double b = normal();
        const double c = normal();
        return {a, b, c};
    }

    Vec3 unit_vec3() {
        while (true) {
            const Vec3 v = normal_vec3();
            const double n = v.norm();
            if (n > 1e-12) return v * (1.0 / n);
        }
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace topo
