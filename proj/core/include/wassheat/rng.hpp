// ---------------------------------------------------------------------------
// rng.hpp
// Deterministic, splittable random streams.
//
// Reproducibility contract: every Monte Carlo result in this library is a
// pure function of (master_seed, path_index). One RngStream per path, seeded
// through splitmix64, generator xoshiro256**. Normals use Box-Muller instead
// of std::normal_distribution because the latter's algorithm is
// implementation-defined and would break cross-toolchain reproducibility.
// ---------------------------------------------------------------------------
#pragma once

#include <cmath>
#include <cstdint>

#include "wassheat/types.hpp"

namespace wassheat {

namespace detail {
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
inline uint64_t rotl64(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace detail

class RngStream {
public:
    RngStream(uint64_t master_seed, uint64_t stream_index) {
        // Decorrelate the stream index from the master seed before expanding
        // the state, so consecutive indices do not share low-entropy state.
        uint64_t sm = master_seed ^ (0x9E3779B97F4A7C15ULL * (stream_index + 1));
        sm ^= detail::rotl64(stream_index + 0xD1B54A32D192ED03ULL, 23);
        for (auto& w : s_) w = detail::splitmix64(sm);
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x853C49E6748FEA9BULL;
    }

    uint64_t next_u64() {
        const uint64_t result = detail::rotl64(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = detail::rotl64(s_[3], 45);
        return result;
    }

    // Uniform on [0,1) with full 53-bit mantissa.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1] -- safe as a log() argument.
    double uniform_pos() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

    // Standard normal, Box-Muller, pair cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = kTwoPi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    Vec normal_vec(int d) {
        Vec g(d);
        for (int i = 0; i < d; ++i) g[i] = normal();
        return g;
    }

    // Uniform point in the closed euclidean ball of radius R (centered at 0):
    // isotropic direction times R * U^{1/d}.
    Vec uniform_in_ball(int d, double R) {
        Vec g = normal_vec(d);
        double n = g.norm();
        if (n == 0.0) return Vec::Zero(d);  // measure-zero; keep total mass right
        const double r = R * std::pow(uniform(), 1.0 / static_cast<double>(d));
        return (r / n) * g;
    }

    // Index in [0, n) picked by cumulative weight (weights sum to 1).
    int pick_weighted(const Vec& w) {
        const double u = uniform();
        double acc = 0.0;
        const int n = static_cast<int>(w.size());
        for (int i = 0; i < n; ++i) {
            acc += w[i];
            if (u < acc) return i;
        }
        return n - 1;  // guard against rounding at the top end
    }

private:
    uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace wassheat
