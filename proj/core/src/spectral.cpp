#include "wassheat/spectral.hpp"

#include <cmath>
#include <cstring>

namespace wassheat {

namespace {

uint64_t fnv1a(const void* data, size_t nbytes, uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < nbytes; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

uint64_t hash_grid(const SpectralGrid& g) {
    uint64_t h = 1469598103934665603ULL;
    h = fnv1a(&g.degree, sizeof(g.degree), h);
    h = fnv1a(&g.dim, sizeof(g.dim), h);
    const char flag = g.permutation_closed ? 1 : 0;
    h = fnv1a(&flag, 1, h);
    for (const auto& node : g.nodes)
        for (int r = 0; r < node.rows(); ++r)
            for (int c = 0; c < node.cols(); ++c) {
                const double v = node(r, c);
                h = fnv1a(&v, sizeof(v), h);
            }
    for (int i = 0; i < g.quad_weights.size(); ++i) {
        const double v = g.quad_weights[i];
        h = fnv1a(&v, sizeof(v), h);
    }
    return h;
}

// Generic per-measure evaluation of sum_k (1/k!) sum_i w a f(node) E^k[m].
template <typename MeasureT>
cplx eval_superposition_impl(const SpectralCoefficients& A, const MeasureT& m) {
    KahanC acc;
    for (const auto& [k, block] : A.degrees) {
        const double inv_kfact = 1.0 / factorial(k);
        for (size_t i = 0; i < block.grid.nodes.size(); ++i) {
            const cplx a = block.values[static_cast<Eigen::Index>(i)];
            if (a == cplx(0.0, 0.0)) continue;
            acc.add(inv_kfact * block.grid.quad_weights[static_cast<Eigen::Index>(i)] * a *
                    eigenfunction(block.grid.nodes[i], m));
        }
    }
    return acc.value();
}

template <typename MeasureT>
VecC mean_gradient_impl(const SpectralCoefficients& A, const MeasureT& m, int d) {
    VecC out = VecC::Zero(d);
    const cplx minus_two_pi_i(0.0, -kTwoPi);
    for (const auto& [k, block] : A.degrees) {
        const double inv_kfact = 1.0 / factorial(k);
        for (size_t i = 0; i < block.grid.nodes.size(); ++i) {
            const Mat& xi = block.grid.nodes[i];
            const cplx a = block.values[static_cast<Eigen::Index>(i)];
            const cplx f = inv_kfact * block.grid.quad_weights[static_cast<Eigen::Index>(i)] * a *
                           eigenfunction(xi, m) * minus_two_pi_i;
            out += f * xi.colwise().sum().transpose().cast<cplx>();
        }
    }
    return out;
}

int common_dim(const SpectralCoefficients& A) {
    if (A.degrees.empty()) throw EmptySupport("coefficient set has no degrees");
    return A.degrees.begin()->second.grid.dim;
}

}  // namespace

SpectralGrid make_grid(int degree, int dim, std::vector<Mat> nodes, Vec quad_weights,
                       bool permutation_closed) {
    if (degree < 1) throw ArityGuardExceeded("degree must be >= 1");
    if (dim < 1) throw DimensionMismatch("dim must be >= 1");
    if (nodes.empty()) throw EmptySupport("grid needs at least one node");
    if (static_cast<Eigen::Index>(nodes.size()) != quad_weights.size())
        throw DimensionMismatch("node count != weight count");
    for (const auto& node : nodes) {
        if (node.rows() != degree || node.cols() != dim)
            throw DimensionMismatch("grid node shape != degree x dim");
        if (!node.allFinite()) throw NonFiniteInput("grid node not finite");
    }
    for (int i = 0; i < quad_weights.size(); ++i)
        if (!(quad_weights[i] > 0.0)) throw NonFiniteInput("quad weights must be > 0");

    SpectralGrid g;
    g.degree = degree;
    g.dim = dim;
    g.nodes = std::move(nodes);
    g.quad_weights = std::move(quad_weights);
    g.permutation_closed = permutation_closed;
    g.grid_id = hash_grid(g);
    return g;
}

DegreeBlock make_block(SpectralGrid grid, VecC values) {
    if (static_cast<Eigen::Index>(grid.nodes.size()) != values.size())
        throw DimensionMismatch("value count != node count");
    if (!values.allFinite()) throw NonFiniteInput("coefficient values not finite");
    return DegreeBlock{std::move(grid), std::move(values)};
}

cplx eigenfunction(const Mat& xi, const DiscreteMeasure& m) {
    if (static_cast<int>(xi.cols()) != m.dim) throw DimensionMismatch("xi dim != measure dim");
    const int k = static_cast<int>(xi.rows());
    cplx prod = 1.0;
    for (int j = 0; j < k; ++j) prod *= char_fn(m, xi.row(j).transpose());
    return prod / static_cast<double>(k);
}

cplx eigenfunction(const Mat& xi, const SmoothedMeasure& m) {
    if (static_cast<int>(xi.cols()) != m.base.dim) throw DimensionMismatch("xi dim != measure dim");
    const int k = static_cast<int>(xi.rows());
    cplx prod = 1.0;
    for (int j = 0; j < k; ++j) prod *= char_fn(m, xi.row(j).transpose());
    return prod / static_cast<double>(k);
}

double lambda_sq(const Mat& xi, double eps) {
    const Vec total = xi.colwise().sum().transpose();
    double s = total.squaredNorm();
    if (eps != 0.0) s += eps * xi.squaredNorm();
    return 4.0 * kPi * kPi * s;
}

cplx eval_superposition(const SpectralCoefficients& A, const DiscreteMeasure& m) {
    return eval_superposition_impl(A, m);
}
cplx eval_superposition(const SpectralCoefficients& A, const SmoothedMeasure& m) {
    return eval_superposition_impl(A, m);
}

SpectralCoefficients apply_laplacian_spectral(const SpectralCoefficients& A, double eps) {
    SpectralCoefficients out = A;
    for (auto& [k, block] : out.degrees)
        for (size_t i = 0; i < block.grid.nodes.size(); ++i)
            block.values[static_cast<Eigen::Index>(i)] *= -lambda_sq(block.grid.nodes[i], eps);
    out.decay.reset();  // bounds do not transfer through the Laplacian
    return out;
}

std::vector<SpectralCoefficients> mean_gradient_coefficients(const SpectralCoefficients& A) {
    const int d = common_dim(A);
    std::vector<SpectralCoefficients> comps(d);
    const cplx minus_two_pi_i(0.0, -kTwoPi);
    for (int n = 0; n < d; ++n) {
        SpectralCoefficients c;
        for (const auto& [k, block] : A.degrees) {
            DegreeBlock b = block;
            for (size_t i = 0; i < b.grid.nodes.size(); ++i) {
                const double comp = b.grid.nodes[i].col(n).sum();
                b.values[static_cast<Eigen::Index>(i)] *= minus_two_pi_i * comp;
            }
            c.degrees.emplace(k, std::move(b));
        }
        comps[n] = std::move(c);
    }
    return comps;
}

VecC mean_gradient_spectral(const SpectralCoefficients& A, const DiscreteMeasure& m) {
    return mean_gradient_impl(A, m, common_dim(A));
}
VecC mean_gradient_spectral(const SpectralCoefficients& A, const SmoothedMeasure& m) {
    return mean_gradient_impl(A, m, common_dim(A));
}

cplx hs_inner(const SpectralCoefficients& A, const SpectralCoefficients& B, double s) {
    KahanC acc;
    for (const auto& [k, blockA] : A.degrees) {
        const auto it = B.degrees.find(k);
        if (it == B.degrees.end()) continue;
        const auto& blockB = it->second;
        if (blockA.grid.grid_id != blockB.grid.grid_id)
            throw GridMismatch("degree " + std::to_string(k));
        const double inv_kfact = 1.0 / factorial(k);
        for (size_t i = 0; i < blockA.grid.nodes.size(); ++i) {
            const auto idx = static_cast<Eigen::Index>(i);
            double weight = blockA.grid.quad_weights[idx] * inv_kfact;
            if (s != 0.0) weight *= std::pow(1.0 + lambda_sq(blockA.grid.nodes[i], 0.0), s);
            acc.add(weight * blockA.values[idx] * std::conj(blockB.values[idx]));
        }
    }
    return acc.value();
}

double hs_norm_sq(const SpectralCoefficients& A, double s) {
    return hs_inner(A, A, s).real();
}

cplx hs_inner_vector(const std::vector<SpectralCoefficients>& A,
                     const std::vector<SpectralCoefficients>& B, double s) {
    if (A.size() != B.size()) throw DimensionMismatch("vector coefficient sizes differ");
    cplx out = 0.0;
    for (size_t n = 0; n < A.size(); ++n) out += hs_inner(A[n], B[n], s);
    return out;
}

std::pair<cplx, cplx> ibp_check(const SpectralCoefficients& A, const SpectralCoefficients& B) {
    const cplx lhs = hs_inner(apply_laplacian_spectral(A, 0.0), B, 0.0);
    const cplx rhs =
        -hs_inner_vector(mean_gradient_coefficients(A), mean_gradient_coefficients(B), 0.0);
    return {lhs, rhs};
}

DecayReport decay_check(const SpectralCoefficients& A, DecayCondition condition) {
    if (!A.decay) throw ConfigError("coefficient set declares no decay constants");
    const double C = A.decay->C;
    const double delta = A.decay->delta;

    DecayReport report;
    report.condition = condition;
    report.pass = true;

    for (const auto& [k, block] : A.degrees) {
        // symmetrized slot moments per node
        double I1 = 0, Im1 = 0, Im2 = 0, Im3 = 0, Icross = 0, Isqcross = 0;
        for (size_t i = 0; i < block.grid.nodes.size(); ++i) {
            const auto idx = static_cast<Eigen::Index>(i);
            const double wa = block.grid.quad_weights[idx] * std::abs(block.values[idx]);
            const Mat& xi = block.grid.nodes[i];
            Vec norms(k);
            for (int j = 0; j < k; ++j) norms[j] = xi.row(j).norm();
            const double kk = static_cast<double>(k);
            I1 += wa;
            Im1 += wa * norms.sum() / kk;
            Im2 += wa * norms.squaredNorm() / kk;
            Im3 += wa * norms.array().cube().sum() / kk;
            if (k >= 2) {
                const double s1 = norms.sum(), s2 = norms.squaredNorm();
                const double s3 = norms.array().cube().sum();
                Icross += wa * (s1 * s1 - s2) / (kk * (kk - 1.0));
                Isqcross += wa * (s2 * s1 - s3) / (kk * (kk - 1.0));
            }
        }
        const double kfact = factorial(k);
        const double kk = static_cast<double>(k);
        DecayDegreeRow row;
        row.degree = k;
        switch (condition) {
            case DecayCondition::Uniform:
                row.measured_a = I1;
                row.bound_a = C * kfact / std::pow(kk, delta);
                row.pass = row.measured_a <= row.bound_a;
                break;
            case DecayCondition::Grad1:
                row.measured_a = Im1;
                row.bound_a = C * kfact / std::pow(kk, 1.0 + delta);
                row.measured_b = Im2;
                row.bound_b = row.bound_a;
                row.pass = row.measured_a <= row.bound_a && row.measured_b <= row.bound_b;
                break;
            case DecayCondition::Cross:
                row.measured_a = Icross;
                row.bound_a = C * kfact / std::pow(kk, 2.0 + delta);
                row.pass = row.measured_a <= row.bound_a;
                break;
            case DecayCondition::Third:
                row.measured_a = Im3;
                row.bound_a = C * kfact / std::pow(kk, 1.0 + delta);
                row.measured_b = Isqcross;
                row.bound_b = C * kfact / std::pow(kk, 3.0 + delta);
                row.pass = row.measured_a <= row.bound_a && row.measured_b <= row.bound_b;
                break;
            case DecayCondition::Strong3:
                row.measured_a = I1;
                row.bound_a = C * kfact / std::pow(kk, 3.0 + delta);
                row.pass = row.measured_a <= row.bound_a;
                break;
        }
        report.pass = report.pass && row.pass;
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace wassheat
