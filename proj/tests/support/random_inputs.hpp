#pragma once

// Seeded random input generation for tests. Uses std::mt19937_64 on purpose:
// test inputs must not depend on the library's own RNG being correct.

#include <random>

#include <wassheat/kernels.hpp>
#include <wassheat/measure.hpp>

namespace testin {

struct Rng {
    std::mt19937_64 g;
    explicit Rng(uint64_t seed) : g(seed) {}

    double uni(double lo = 0.0, double hi = 1.0) {
        return std::uniform_real_distribution<double>(lo, hi)(g);
    }
    int uint(int lo, int hi) {  // inclusive bounds
        return std::uniform_int_distribution<int>(lo, hi)(g);
    }
    wassheat::Vec vec(int d, double lo = -1.0, double hi = 1.0) {
        wassheat::Vec v(d);
        for (int i = 0; i < d; ++i) v[i] = uni(lo, hi);
        return v;
    }
    wassheat::Mat mat(int r, int c, double lo = -1.0, double hi = 1.0) {
        wassheat::Mat m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m(i, j) = uni(lo, hi);
        return m;
    }
};

inline wassheat::DiscreteMeasure measure(Rng& rng, int n, int d, double box = 1.0) {
    wassheat::Vec w(n);
    for (int i = 0; i < n; ++i) w[i] = 0.05 + rng.uni();
    return wassheat::make_discrete(rng.mat(n, d, -box, box), w);
}

inline wassheat::DiscreteMeasure uniform_measure(Rng& rng, int n, int d, double box = 1.0) {
    return wassheat::empirical(rng.mat(n, d, -box, box));
}

inline wassheat::Mat frequencies(Rng& rng, int k, int d, double box = 1.5) {
    return rng.mat(k, d, -box, box);
}

}  // namespace testin
