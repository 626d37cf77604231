// ---------------------------------------------------------------------------
// measure.hpp
// Discrete probability measures on R^d and their Gaussian smoothings.
//
// A DiscreteMeasure is a finite list of atoms (rows of `atoms`) with positive
// total weight normalized to 1. A SmoothedMeasure is a discrete base measure
// convolved with an isotropic Gaussian of per-coordinate variance `variance`
// (equivalently: the law of X + sqrt(variance) * Z, X ~ base, Z std normal).
// ---------------------------------------------------------------------------
#pragma once

#include <optional>

#include "wassheat/rng.hpp"
#include "wassheat/types.hpp"

namespace wassheat {

struct DiscreteMeasure {
    int dim = 0;
    Mat atoms;     // n x dim
    Vec weights;   // n, nonnegative, sums to 1 after construction

    int size() const { return static_cast<int>(weights.size()); }
};

struct SmoothedMeasure {
    DiscreteMeasure base;
    double variance = 0.0;  // per-coordinate Gaussian variance, >= 0
};

// Validating factory. Weights omitted => uniform. Weight sums in [1e-9, inf)
// are rescaled to 1; anything below that band is degenerate.
DiscreteMeasure make_discrete(const Mat& points, const std::optional<Vec>& weights = std::nullopt);

// Uniform empirical measure on the rows of `points` (duplicates allowed and
// kept as distinct atoms; all downstream sums are weight-based so this is
// equivalent to merging them).
DiscreteMeasure empirical(const Mat& points);

// (id + shift)_# m : every atom translated by the same vector.
DiscreteMeasure translate_pushforward(const DiscreteMeasure& m, const Vec& shift);
SmoothedMeasure translate_pushforward(const SmoothedMeasure& m, const Vec& shift);

// (id + h*V)_# m with one displacement row per atom.
DiscreteMeasure displace(const DiscreteMeasure& m, const Mat& direction_rows, double h);

// Gaussian smoothing; variance adds if m is already smoothed.
SmoothedMeasure smooth(const DiscreteMeasure& m, double variance);
SmoothedMeasure smooth(const SmoothedMeasure& m, double extra_variance);

// Characteristic function conj-Fourier convention:
//   char_fn(m, xi) = sum_j w_j exp(-2*pi*i <xi, x_j>)
// and the Gaussian factor exp(-2*pi^2*variance*|xi|^2) for smoothed measures.
cplx char_fn(const DiscreteMeasure& m, const Vec& xi);
cplx char_fn(const SmoothedMeasure& m, const Vec& xi);

// E |X|^2. For the smoothed case this is the base moment + dim * variance.
double second_moment(const DiscreteMeasure& m);
double second_moment(const SmoothedMeasure& m);

Vec mean(const DiscreteMeasure& m);

// Largest pairwise atom distance (0 for a single atom).
double diameter(const DiscreteMeasure& m);

// n iid draws, one row per draw. Deterministic in (rng state).
Mat sample(const DiscreteMeasure& m, int n, RngStream& rng);
Mat sample(const SmoothedMeasure& m, int n, RngStream& rng);

}  // namespace wassheat
