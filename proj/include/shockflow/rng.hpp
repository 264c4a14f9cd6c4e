#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "shockflow/vec.hpp"

namespace shockflow {

/// splitmix64 step; used to derive independent per-path seeds from a
/// master seed so Monte Carlo results do not depend on thread schedule.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master ^ splitmix64(stream + 1));
}

/// Deterministic RNG: mt19937_64 core (bit-exact across platforms) with
/// hand-rolled uniform/normal draws. std::normal_distribution is
/// implementation-defined, which would break byte-identical CLI output.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// uniform in [0, 1)
    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// standard normal via Box-Muller (polar form avoided: the basic form
    /// consumes exactly two uniforms per pair, keeping draw counts fixed)
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    Vec normal_vec(std::size_t d) {
        Vec v(d);
        for (std::size_t i = 0; i < d; ++i) v[i] = normal();
        return v;
    }

    Vec uniform_vec(std::size_t d, double lo, double hi) {
        Vec v(d);
        for (std::size_t i = 0; i < d; ++i) v[i] = uniform(lo, hi);
        return v;
    }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace shockflow
