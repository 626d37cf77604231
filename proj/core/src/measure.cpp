#include "wassheat/measure.hpp"

#include <cmath>

namespace wassheat {

DiscreteMeasure make_discrete(const Mat& points, const std::optional<Vec>& weights) {
    const int n = static_cast<int>(points.rows());
    const int d = static_cast<int>(points.cols());
    if (n == 0 || d == 0) throw EmptySupport("measure needs at least one atom of dimension >= 1");
    if (!points.allFinite()) throw NonFiniteInput("atom coordinates must be finite");

    Vec w;
    if (weights) {
        w = *weights;
        if (static_cast<int>(w.size()) != n)
            throw DimensionMismatch("weight count " + std::to_string(w.size()) +
                                    " != atom count " + std::to_string(n));
        if (!w.allFinite()) throw NonFiniteInput("weights must be finite");
        for (int i = 0; i < n; ++i) {
            if (w[i] < 0.0)
                throw NegativeWeight("weight[" + std::to_string(i) + "] = " + std::to_string(w[i]));
        }
        const double s = w.sum();
        if (!std::isfinite(s) || s < 1e-9)
            throw DegenerateWeightSum("weight sum " + std::to_string(s) + " below 1e-9");
        w /= s;
    } else {
        w = Vec::Constant(n, 1.0 / static_cast<double>(n));
    }

    DiscreteMeasure m;
    m.dim = d;
    m.atoms = points;
    m.weights = std::move(w);
    return m;
}

DiscreteMeasure empirical(const Mat& points) { return make_discrete(points); }

DiscreteMeasure translate_pushforward(const DiscreteMeasure& m, const Vec& shift) {
    if (static_cast<int>(shift.size()) != m.dim)
        throw DimensionMismatch("shift dim != measure dim");
    DiscreteMeasure out = m;
    out.atoms.rowwise() += shift.transpose();
    return out;
}

SmoothedMeasure translate_pushforward(const SmoothedMeasure& m, const Vec& shift) {
    return SmoothedMeasure{translate_pushforward(m.base, shift), m.variance};
}

DiscreteMeasure displace(const DiscreteMeasure& m, const Mat& direction_rows, double h) {
    if (direction_rows.rows() != m.atoms.rows() || direction_rows.cols() != m.atoms.cols())
        throw DimensionMismatch("displacement field shape != atom array shape");
    DiscreteMeasure out = m;
    out.atoms += h * direction_rows;
    return out;
}

SmoothedMeasure smooth(const DiscreteMeasure& m, double variance) {
    if (!(variance >= 0.0)) throw NegativeVariance("variance = " + std::to_string(variance));
    return SmoothedMeasure{m, variance};
}

SmoothedMeasure smooth(const SmoothedMeasure& m, double extra_variance) {
    if (!(extra_variance >= 0.0))
        throw NegativeVariance("variance = " + std::to_string(extra_variance));
    return SmoothedMeasure{m.base, m.variance + extra_variance};
}

cplx char_fn(const DiscreteMeasure& m, const Vec& xi) {
    if (static_cast<int>(xi.size()) != m.dim) throw DimensionMismatch("xi dim != measure dim");
    KahanC acc;
    const int n = m.size();
    for (int j = 0; j < n; ++j) {
        const double phase = -kTwoPi * m.atoms.row(j).dot(xi.transpose());
        acc.add(m.weights[j] * cplx(std::cos(phase), std::sin(phase)));
    }
    return acc.value();
}

cplx char_fn(const SmoothedMeasure& m, const Vec& xi) {
    const double damp = std::exp(-2.0 * kPi * kPi * m.variance * xi.squaredNorm());
    return damp * char_fn(m.base, xi);
}

double second_moment(const DiscreteMeasure& m) {
    Kahan acc;
    for (int j = 0; j < m.size(); ++j) acc.add(m.weights[j] * m.atoms.row(j).squaredNorm());
    return acc.value();
}

double second_moment(const SmoothedMeasure& m) {
    return second_moment(m.base) + static_cast<double>(m.base.dim) * m.variance;
}

Vec mean(const DiscreteMeasure& m) {
    Vec mu = Vec::Zero(m.dim);
    for (int j = 0; j < m.size(); ++j) mu += m.weights[j] * m.atoms.row(j).transpose();
    return mu;
}

double diameter(const DiscreteMeasure& m) {
    double d2 = 0.0;
    for (int i = 0; i < m.size(); ++i)
        for (int j = i + 1; j < m.size(); ++j)
            d2 = std::max(d2, (m.atoms.row(i) - m.atoms.row(j)).squaredNorm());
    return std::sqrt(d2);
}

Mat sample(const DiscreteMeasure& m, int n, RngStream& rng) {
    Mat out(n, m.dim);
    for (int i = 0; i < n; ++i) out.row(i) = m.atoms.row(rng.pick_weighted(m.weights));
    return out;
}

Mat sample(const SmoothedMeasure& m, int n, RngStream& rng) {
    Mat out = sample(m.base, n, rng);
    if (m.variance > 0.0) {
        const double sd = std::sqrt(m.variance);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < m.base.dim; ++c) out(i, c) += sd * rng.normal();
    }
    return out;
}

}  // namespace wassheat
