#include "wassheat/product_measure.hpp"

#include <cmath>

#include "wassheat/parallel.hpp"
#include "wassheat/reconstruction.hpp"

namespace wassheat {

void validate(const BallProductSpec& spec) {
    if (spec.k < 1 || spec.k > 5)
        throw ConfigError("product-measure k = " + std::to_string(spec.k) + " outside [1, 5]");
    if (spec.dim < 1) throw ConfigError("product-measure dim must be >= 1");
    if (!(spec.R > 0.0)) throw ConfigError("product-measure ball radius must be > 0");
}

double ball_volume(int d, double R) {
    return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0) * std::pow(R, d);
}

Mat sample_ball_tuple(const BallProductSpec& spec, RngStream& rng) {
    Mat x(spec.k, spec.dim);
    for (int j = 0; j < spec.k; ++j)
        x.row(j) = rng.uniform_in_ball(spec.dim, spec.R).transpose();
    return x;
}

namespace {

// Signed subset weights s_I = (-1)^{|I|} |I|^k, enumerated once.
struct SubsetTable {
    std::vector<std::vector<int>> sets;
    std::vector<double> sign_weight;
    double front_factor;  // k^2/(k!)^3, with the (-1)^(r+p) folded into s_I s_J

    explicit SubsetTable(int k) {
        for (int r = 1; r <= k; ++r) {
            const double sw = ((r % 2) ? -1.0 : 1.0) * std::pow(static_cast<double>(r), k);
            for (auto& I : subsets_of_size(k, r)) {
                sets.push_back(std::move(I));
                sign_weight.push_back(sw);
            }
        }
        const double kfact = factorial(k);
        front_factor = static_cast<double>(k) * static_cast<double>(k) / (kfact * kfact * kfact);
    }
};

McIntegral reduce_scaled(const std::vector<cplx>& vals, double scale) {
    McIntegral out;
    out.n = static_cast<int>(vals.size());
    KahanC mean_acc;
    for (const cplx& v : vals) mean_acc.add(v);
    const cplx mean = mean_acc.value() / static_cast<double>(out.n);
    out.value = scale * mean;
    if (out.n >= 2) {
        Kahan var_acc;
        for (const cplx& v : vals) var_acc.add(std::norm(v - mean));
        out.stderr_ =
            scale * std::sqrt(var_acc.value() / (out.n - 1.0) / static_cast<double>(out.n));
    }
    return out;
}

}  // namespace

McIntegral integrate_PIJ(const PairFunctional& H, const std::vector<int>& I,
                         const std::vector<int>& J, const BallProductSpec& spec, int n_samples,
                         uint64_t seed) {
    validate(spec);
    if (I.empty() || J.empty()) throw EmptySupport("index sets must be nonempty");
    for (int q : I)
        if (q < 0 || q >= spec.k) throw IndexOutOfRange("I index " + std::to_string(q));
    for (int q : J)
        if (q < 0 || q >= spec.k) throw IndexOutOfRange("J index " + std::to_string(q));

    std::vector<cplx> vals(n_samples);
    parallel_for(n_samples, [&](int i) {
        RngStream rng(seed, static_cast<uint64_t>(i));
        const Mat x = sample_ball_tuple(spec, rng);
        vals[i] = H(empirical_from_index(x, I), empirical_from_index(x, J));
    });
    return reduce_scaled(vals, std::pow(ball_volume(spec.dim, spec.R), spec.k));
}

McIntegral integrate_PkR(const PairFunctional& H, const BallProductSpec& spec, int n_samples,
                         uint64_t seed) {
    validate(spec);
    const SubsetTable table(spec.k);
    std::vector<cplx> vals(n_samples);
    parallel_for(n_samples, [&](int i) {
        RngStream rng(seed, static_cast<uint64_t>(i));
        const Mat x = sample_ball_tuple(spec, rng);
        std::vector<DiscreteMeasure> sub(table.sets.size());
        for (size_t q = 0; q < table.sets.size(); ++q)
            sub[q] = empirical_from_index(x, table.sets[q]);
        KahanC acc;
        for (size_t qa = 0; qa < table.sets.size(); ++qa)
            for (size_t qb = 0; qb < table.sets.size(); ++qb)
                acc.add(table.sign_weight[qa] * table.sign_weight[qb] * H(sub[qa], sub[qb]));
        vals[i] = table.front_factor * acc.value();
    });
    return reduce_scaled(vals, std::pow(ball_volume(spec.dim, spec.R), spec.k));
}

McIntegral integrate_PkR_product(const SingleFunctional& f, const SingleFunctional& g,
                                 const BallProductSpec& spec, int n_samples, uint64_t seed) {
    validate(spec);
    const SubsetTable table(spec.k);
    std::vector<cplx> vals(n_samples);
    parallel_for(n_samples, [&](int i) {
        RngStream rng(seed, static_cast<uint64_t>(i));
        const Mat x = sample_ball_tuple(spec, rng);
        KahanC fa, ga;
        for (size_t q = 0; q < table.sets.size(); ++q) {
            const DiscreteMeasure sub = empirical_from_index(x, table.sets[q]);
            fa.add(table.sign_weight[q] * f(sub));
            ga.add(table.sign_weight[q] * g(sub));
        }
        vals[i] = table.front_factor * fa.value() * ga.value();
    });
    return reduce_scaled(vals, std::pow(ball_volume(spec.dim, spec.R), spec.k));
}

DualityResult duality_check(const SymmetricKernel& phi, const SymmetricKernel& psi,
                            const BallProductSpec& spec, int n_samples, uint64_t seed) {
    validate(spec);
    if (phi.arity() != spec.k || psi.arity() != spec.k)
        throw DimensionMismatch("kernel arity != spec.k");
    if (phi.dim() != spec.dim || psi.dim() != spec.dim)
        throw DimensionMismatch("kernel dim != spec.dim");
    for (const SymmetricKernel* ker : {&phi, &psi}) {
        const auto r = ker->support_radius();
        if (!r || *r > spec.R + 1e-12)
            throw SupportExceedsBall("kernel support radius must be declared and <= R");
    }

    // quadrature side over the enclosing cube [-R,R]^{dk}; integrand vanishes
    // outside the ball, so the cube extension is exact. 64 nodes per axis up
    // to 3 axes, then shrink to keep the grid under ~2e6 points.
    const int axes = spec.dim * spec.k;
    const int n1 = (axes <= 3) ? 64
                               : std::max(6, static_cast<int>(std::floor(
                                                 std::pow(2.0e6, 1.0 / axes))));
    const auto [gl_x, gl_w] = gauss_legendre(n1);
    std::vector<int> idx(axes, 0);
    Mat tuple(spec.k, spec.dim);
    KahanC quad;
    while (true) {
        double w = 1.0;
        for (int a = 0; a < axes; ++a) {
            w *= gl_w[idx[a]] * spec.R;
            tuple(a / spec.dim, a % spec.dim) = spec.R * gl_x[idx[a]];
        }
        quad.add(w * phi.value(tuple) * std::conj(psi.value(tuple)));
        int pos = axes - 1;
        while (pos >= 0) {
            if (++idx[pos] < n1) break;
            idx[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }

    DualityResult out;
    out.quadrature = quad.value() / factorial(spec.k);
    const McIntegral mc = integrate_PkR_product(
        [&phi](const DiscreteMeasure& m) { return eval_F(phi, m); },
        [&psi](const DiscreteMeasure& m) { return std::conj(eval_F(psi, m)); }, spec, n_samples,
        seed);
    out.mc = mc.value;
    out.stderr_ = mc.stderr_;
    out.n_samples = mc.n;
    const double diff = std::abs(out.mc - out.quadrature);
    out.z = (mc.stderr_ > 0.0) ? diff / mc.stderr_ : (diff == 0.0 ? 0.0 : INFINITY);
    return out;
}

cplx d2_bilinear(const SymmetricKernel& phi, const SymmetricKernel& psi,
                 const DiscreteMeasure& m1, const DiscreteMeasure& m2) {
    const VecC u = mean_gradient(phi, m1);
    const VecC v = mean_gradient(psi, m2);
    return u.cwiseProduct(v).sum();
}

IbpMeasureResult ibp_measure_check(const SymmetricKernel& phi, const SymmetricKernel& psi,
                                   const BallProductSpec& spec, int n_samples, uint64_t seed) {
    validate(spec);
    if (phi.arity() != spec.k || psi.arity() != spec.k)
        throw DimensionMismatch("kernel arity != spec.k");
    const SubsetTable table(spec.k);
    const int d = spec.dim;

    std::vector<cplx> lhs_vals(n_samples), rhs_vals(n_samples), diff_vals(n_samples);
    parallel_for(n_samples, [&](int i) {
        RngStream rng(seed, static_cast<uint64_t>(i));
        const Mat x = sample_ball_tuple(spec, rng);
        KahanC neg_lap, fpsi;
        VecC mg_phi = VecC::Zero(d), mg_psi = VecC::Zero(d);
        for (size_t q = 0; q < table.sets.size(); ++q) {
            const DiscreteMeasure sub = empirical_from_index(x, table.sets[q]);
            const double sw = table.sign_weight[q];
            neg_lap.add(sw * -laplacian_w(phi, sub, 0.0));
            fpsi.add(sw * eval_F(psi, sub));
            mg_phi += sw * mean_gradient(phi, sub);
            mg_psi += sw * mean_gradient(psi, sub);
        }
        lhs_vals[i] = table.front_factor * neg_lap.value() * fpsi.value();
        rhs_vals[i] = table.front_factor * mg_phi.cwiseProduct(mg_psi).sum();
        diff_vals[i] = lhs_vals[i] - rhs_vals[i];
    });

    const double scale = std::pow(ball_volume(spec.dim, spec.R), spec.k);
    const McIntegral lhs = reduce_scaled(lhs_vals, scale);
    const McIntegral rhs = reduce_scaled(rhs_vals, scale);
    const McIntegral diff = reduce_scaled(diff_vals, scale);
    IbpMeasureResult out;
    out.lhs = lhs.value;
    out.rhs = rhs.value;
    out.diff_stderr = diff.stderr_;
    out.n_samples = n_samples;
    out.z = (diff.stderr_ > 0.0) ? std::abs(diff.value) / diff.stderr_
                                 : (std::abs(diff.value) == 0.0 ? 0.0 : INFINITY);
    return out;
}

std::pair<Vec, Vec> gauss_legendre(int n) {
    if (n < 1) throw NonFiniteInput("quadrature order must be >= 1");
    Vec x(n), w(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    return {x, w};
}

}  // namespace wassheat
