#include "wassheat/heat_flow.hpp"

#include <cmath>

#include "wassheat/rng.hpp"

namespace wassheat {

void validate(const FlowParams& p) {
    if (!(p.beta > 0.0)) throw ConfigError("flow beta must be > 0");
    if (!(p.eps >= 0.0)) throw ConfigError("flow eps must be >= 0");
}

SmoothedMeasure flow_state(const DiscreteMeasure& m, FlowParams p, double t, const Vec& w) {
    validate(p);
    if (!(t >= 0.0)) throw NonFiniteInput("flow time must be >= 0");
    const SmoothedMeasure smoothed = smooth(m, 2.0 * p.eps * t);
    return translate_pushforward(smoothed, (std::sqrt(2.0 * p.beta) * w).eval());
}

double generator_factor(const Mat& xi, FlowParams p) {
    const Vec total = xi.colwise().sum().transpose();
    return 4.0 * kPi * kPi * (p.beta * total.squaredNorm() + p.eps * xi.squaredNorm());
}

SpectralCoefficients semigroup_closed_form(const SpectralCoefficients& A, FlowParams p, double t) {
    validate(p);
    SpectralCoefficients out = A;
    for (auto& [k, block] : out.degrees)
        for (size_t i = 0; i < block.grid.nodes.size(); ++i)
            block.values[static_cast<Eigen::Index>(i)] *=
                std::exp(-t * generator_factor(block.grid.nodes[i], p));
    // declared decay survives: the multiplier has modulus <= 1 for t >= 0
    return out;
}

SpectralCoefficients apply_heat_generator(const SpectralCoefficients& A, FlowParams p) {
    validate(p);
    SpectralCoefficients out = A;
    for (auto& [k, block] : out.degrees)
        for (size_t i = 0; i < block.grid.nodes.size(); ++i)
            block.values[static_cast<Eigen::Index>(i)] *=
                -generator_factor(block.grid.nodes[i], p);
    out.decay.reset();
    return out;
}

McStats reduce_paths(const std::vector<cplx>& vals) {
    McStats st;
    st.n = static_cast<int>(vals.size());
    if (st.n == 0) return st;
    KahanC mean_acc;
    for (const cplx& v : vals) mean_acc.add(v);
    st.mean = mean_acc.value() / static_cast<double>(st.n);
    if (st.n >= 2) {
        Kahan var_acc;
        for (const cplx& v : vals) var_acc.add(std::norm(v - st.mean));
        st.stderr_ = std::sqrt(var_acc.value() / (st.n - 1.0) / static_cast<double>(st.n));
    }
    return st;
}

McStats mc_expectation(const SpectralCoefficients& A, const DiscreteMeasure& m, FlowParams p,
                       double t, int n_paths, uint64_t seed) {
    validate(p);
    if (n_paths < 1) throw NonFiniteInput("n_paths must be >= 1");
    std::vector<cplx> vals(n_paths);
    const int d = m.dim;
    const double sqrt_t = std::sqrt(t);
    parallel_for(n_paths, [&](int i) {
        RngStream rng(seed, static_cast<uint64_t>(i));
        const Vec w = sqrt_t * rng.normal_vec(d);
        vals[i] = eval_superposition(A, flow_state(m, p, t, w));
    });
    return reduce_paths(vals);
}

std::vector<SemigroupCheckRow> semigroup_agreement(const SpectralCoefficients& A,
                                                   const DiscreteMeasure& m, FlowParams p,
                                                   double t, int n_paths, uint64_t seed) {
    validate(p);
    std::vector<SemigroupCheckRow> rows;

    // per-degree single-block slices share the full set's Brownian paths
    std::vector<int> degs;
    for (const auto& [k, block] : A.degrees) degs.push_back(k);

    std::vector<std::vector<cplx>> vals(degs.size() + 1, std::vector<cplx>(n_paths));
    const double sqrt_t = std::sqrt(t);
    parallel_for(n_paths, [&](int i) {
        RngStream rng(seed, static_cast<uint64_t>(i));
        const Vec w = sqrt_t * rng.normal_vec(m.dim);
        const SmoothedMeasure st = flow_state(m, p, t, w);
        cplx total = 0.0;
        for (size_t kidx = 0; kidx < degs.size(); ++kidx) {
            SpectralCoefficients slice;
            slice.degrees.emplace(degs[kidx], A.degrees.at(degs[kidx]));
            const cplx v = eval_superposition(slice, st);
            vals[kidx][i] = v;
            total += v;
        }
        vals[degs.size()][i] = total;
    });

    const SpectralCoefficients evolved = semigroup_closed_form(A, p, t);
    for (size_t kidx = 0; kidx <= degs.size(); ++kidx) {
        SemigroupCheckRow row;
        if (kidx < degs.size()) {
            row.id = "degree-" + std::to_string(degs[kidx]);
            SpectralCoefficients slice;
            slice.degrees.emplace(degs[kidx], evolved.degrees.at(degs[kidx]));
            row.closed_form = eval_superposition(slice, m);
        } else {
            row.id = "total";
            row.closed_form = eval_superposition(evolved, m);
        }
        const McStats st = reduce_paths(vals[kidx]);
        row.mc_mean = st.mean;
        row.stderr_ = st.stderr_;
        row.n_paths = st.n;
        const double diff = std::abs(st.mean - row.closed_form);
        row.z = (st.stderr_ > 0.0) ? diff / st.stderr_ : (diff == 0.0 ? 0.0 : INFINITY);
        rows.push_back(std::move(row));
    }
    return rows;
}

double heat_residual(const SpectralCoefficients& A, const DiscreteMeasure& m, FlowParams p,
                     double t, double dt) {
    validate(p);
    if (!(dt > 0.0) || !(t - dt >= 0.0)) throw NonFiniteInput("need 0 < dt <= t");
    const cplx v_plus = eval_superposition(semigroup_closed_form(A, p, t + dt), m);
    const cplx v_minus = eval_superposition(semigroup_closed_form(A, p, t - dt), m);
    const cplx gen =
        eval_superposition(apply_heat_generator(semigroup_closed_form(A, p, t), p), m);
    return std::abs((v_plus - v_minus) / (2.0 * dt) - gen);
}

namespace {

// Shared path machinery for ito_residual / weak_form_check. evaluate(i)
// stores fine/coarse defects for path i.
struct PathGrid {
    double s, r, dt;
    int M;  // even
    std::vector<double> times;  // t_0 = s ... t_M = r
};

PathGrid make_grid(double s, double r, int n_steps) {
    if (!(s >= 0.0) || !(r > s)) throw NonFiniteInput("need 0 <= s < r");
    int M = std::max(2, n_steps);
    if (M % 2) ++M;
    PathGrid g;
    g.s = s;
    g.r = r;
    g.M = M;
    g.dt = (r - s) / M;
    g.times.resize(M + 1);
    for (int i = 0; i <= M; ++i) g.times[i] = s + g.dt * i;
    return g;
}

}  // namespace

PathwiseStats ito_residual(const SpectralCoefficients& A, const DiscreteMeasure& m, FlowParams p,
                           double s, double r, int n_paths, int n_steps, uint64_t seed) {
    validate(p);
    const PathGrid g = make_grid(s, r, n_steps);

    // time-grid coefficient sets, shared across paths
    std::vector<SpectralCoefficients> B(g.M + 1), G(g.M + 1);
    for (int i = 0; i <= g.M; ++i) {
        B[i] = semigroup_closed_form(A, p, g.times[i]);
        G[i] = apply_heat_generator(B[i], p);
    }

    std::vector<cplx> fine(n_paths), coarse(n_paths);
    const int d = m.dim;
    parallel_for(n_paths, [&](int ip) {
        RngStream rng(seed, static_cast<uint64_t>(ip));
        Vec w = (g.s > 0.0) ? (std::sqrt(g.s) * rng.normal_vec(d)).eval() : Vec::Zero(d).eval();
        std::vector<Vec> W(g.M + 1);
        W[0] = w;
        const double sdt = std::sqrt(g.dt);
        for (int i = 1; i <= g.M; ++i) W[i] = W[i - 1] + sdt * rng.normal_vec(d);

        const cplx v_end = eval_superposition(B[g.M], flow_state(m, p, g.times[g.M], W[g.M]));
        const cplx v_start = eval_superposition(B[0], flow_state(m, p, g.times[0], W[0]));

        KahanC drift_fine;
        for (int i = 0; i < g.M; ++i)
            drift_fine.add(2.0 * g.dt *
                           eval_superposition(G[i], flow_state(m, p, g.times[i], W[i])));
        fine[ip] = v_end - v_start - drift_fine.value();

        KahanC drift_coarse;
        for (int i = 0; i < g.M; i += 2)
            drift_coarse.add(2.0 * (2.0 * g.dt) *
                             eval_superposition(G[i], flow_state(m, p, g.times[i], W[i])));
        coarse[ip] = v_end - v_start - drift_coarse.value();
    });

    const McStats f = reduce_paths(fine), c = reduce_paths(coarse);
    PathwiseStats out;
    out.mean = f.mean;
    out.stderr_ = f.stderr_;
    out.n_paths = n_paths;
    out.n_steps = g.M;
    out.bias_estimate = std::abs(f.mean - c.mean);
    out.z = (f.stderr_ > 0.0) ? std::abs(f.mean) / f.stderr_ : 0.0;
    return out;
}

cplx tf_integral(const TestFunction& tf, const SmoothedMeasure& m) {
    const int d = m.base.dim;
    const double v = m.variance;
    KahanC acc;
    for (int j = 0; j < m.base.size(); ++j) {
        const Vec a = m.base.atoms.row(j).transpose();
        const double w = m.base.weights[j];
        switch (tf.kind) {
            case TestFunction::Kind::Constant:
                acc.add(w);
                break;
            case TestFunction::Kind::Linear:
                acc.add(w * tf.vec.dot(a));
                break;
            case TestFunction::Kind::SquaredNorm:
                acc.add(w * (a.squaredNorm() + d * v));
                break;
            case TestFunction::Kind::Exponential: {
                const double phase = -kTwoPi * tf.vec.dot(a);
                const double damp = std::exp(-2.0 * kPi * kPi * v * tf.vec.squaredNorm());
                acc.add(w * damp * cplx(std::cos(phase), std::sin(phase)));
                break;
            }
            case TestFunction::Kind::Gaussian: {
                const double q = (a - tf.vec).squaredNorm();
                const double den = 1.0 + 2.0 * tf.alpha * v;
                acc.add(w * std::pow(den, -0.5 * d) * std::exp(-tf.alpha * q / den));
                break;
            }
        }
    }
    return acc.value();
}

cplx tf_laplacian_integral(const TestFunction& tf, const SmoothedMeasure& m) {
    const int d = m.base.dim;
    const double v = m.variance;
    switch (tf.kind) {
        case TestFunction::Kind::Constant:
        case TestFunction::Kind::Linear:
            return 0.0;
        case TestFunction::Kind::SquaredNorm:
            return 2.0 * d;
        case TestFunction::Kind::Exponential:
            return -4.0 * kPi * kPi * tf.vec.squaredNorm() * tf_integral(tf, m);
        case TestFunction::Kind::Gaussian: {
            KahanC acc;
            const double alpha = tf.alpha;
            for (int j = 0; j < m.base.size(); ++j) {
                const Vec a = m.base.atoms.row(j).transpose();
                const double w = m.base.weights[j];
                const double q = (a - tf.vec).squaredNorm();
                const double den = 1.0 + 2.0 * alpha * v;
                const double I = std::pow(den, -0.5 * d) * std::exp(-alpha * q / den);
                const double Iprime = I * (-d * v / den - q / (den * den));
                acc.add(w * (-4.0 * alpha * alpha * Iprime - 2.0 * alpha * d * I));
            }
            return acc.value();
        }
    }
    return 0.0;
}

PathwiseStats weak_form_check(const TestFunction& tf, const DiscreteMeasure& m, FlowParams p,
                              double s, double r, int n_paths, int n_steps, uint64_t seed) {
    validate(p);
    const PathGrid g = make_grid(s, r, n_steps);
    const double drift_coeff = p.eps + p.beta;

    std::vector<cplx> fine(n_paths), coarse(n_paths);
    const int d = m.dim;
    parallel_for(n_paths, [&](int ip) {
        RngStream rng(seed, static_cast<uint64_t>(ip));
        Vec w0 = (g.s > 0.0) ? (std::sqrt(g.s) * rng.normal_vec(d)).eval() : Vec::Zero(d).eval();
        std::vector<Vec> W(g.M + 1);
        W[0] = w0;
        const double sdt = std::sqrt(g.dt);
        for (int i = 1; i <= g.M; ++i) W[i] = W[i - 1] + sdt * rng.normal_vec(d);

        const cplx phi_end = tf_integral(tf, flow_state(m, p, g.times[g.M], W[g.M]));
        const cplx phi_start = tf_integral(tf, flow_state(m, p, g.times[0], W[0]));

        KahanC drift_fine;
        for (int i = 0; i < g.M; ++i)
            drift_fine.add(drift_coeff * g.dt *
                           tf_laplacian_integral(tf, flow_state(m, p, g.times[i], W[i])));
        fine[ip] = phi_end - phi_start - drift_fine.value();

        KahanC drift_coarse;
        for (int i = 0; i < g.M; i += 2)
            drift_coarse.add(drift_coeff * (2.0 * g.dt) *
                             tf_laplacian_integral(tf, flow_state(m, p, g.times[i], W[i])));
        coarse[ip] = phi_end - phi_start - drift_coarse.value();
    });

    const McStats f = reduce_paths(fine), c = reduce_paths(coarse);
    PathwiseStats out;
    out.mean = f.mean;
    out.stderr_ = f.stderr_;
    out.n_paths = n_paths;
    out.n_steps = g.M;
    out.bias_estimate = std::abs(f.mean - c.mean);
    out.z = (f.stderr_ > 0.0) ? std::abs(f.mean) / f.stderr_ : 0.0;
    return out;
}

}  // namespace wassheat
