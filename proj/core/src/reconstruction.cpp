#include "wassheat/reconstruction.hpp"

#include <cmath>

#include "wassheat/calculus.hpp"

namespace wassheat {

std::vector<std::vector<int>> subsets_of_size(int n, int r) {
    if (n < 0 || n > kMaxSubsetGround)
        throw SizeGuardExceeded("subset ground set " + std::to_string(n) + " > 20");
    if (r < 0 || r > n) throw IndexOutOfRange("subset size out of range");
    std::vector<std::vector<int>> out;
    std::vector<int> cur(r);
    // iterative lexicographic enumeration
    for (int i = 0; i < r; ++i) cur[i] = i;
    if (r == 0) {
        out.push_back({});
        return out;
    }
    while (true) {
        out.push_back(cur);
        int pos = r - 1;
        while (pos >= 0 && cur[pos] == n - r + pos) --pos;
        if (pos < 0) break;
        ++cur[pos];
        for (int q = pos + 1; q < r; ++q) cur[q] = cur[q - 1] + 1;
    }
    return out;
}

DiscreteMeasure empirical_from_index(const Mat& points, const std::vector<int>& idx) {
    if (idx.empty()) throw EmptySupport("empty index set");
    Mat sel(static_cast<int>(idx.size()), points.cols());
    for (size_t q = 0; q < idx.size(); ++q) {
        if (idx[q] < 0 || idx[q] >= points.rows()) throw IndexOutOfRange("point index");
        sel.row(static_cast<int>(q)) = points.row(idx[q]);
    }
    return empirical(sel);
}

cplx apply_Ok(const MeasureFunctional& F, const Mat& x) {
    const int k = static_cast<int>(x.rows());
    if (k < 1 || k > kMaxOkArity)
        throw ArityGuardExceeded("apply_Ok arity " + std::to_string(k));
    KahanC acc;
    for (int r = 1; r <= k; ++r) {
        const double sign = ((k - r) % 2 == 0) ? 1.0 : -1.0;
        const double coeff = sign * std::pow(static_cast<double>(r), k);
        for (const auto& I : subsets_of_size(k, r))
            acc.add(coeff * F(empirical_from_index(x, I)));
    }
    return acc.value() / factorial(k);
}

GradedFunctional make_graded(std::vector<std::pair<int, KernelPtr>> kernels) {
    if (kernels.empty()) throw EmptySupport("graded functional needs at least one kernel");
    GradedFunctional g;
    g.known_kernels = std::move(kernels);
    for (const auto& [deg, phi] : g.known_kernels) {
        if (deg < 1) throw ArityGuardExceeded("degree must be >= 1");
        if (phi->arity() != deg) throw DimensionMismatch("kernel arity != declared degree");
        g.max_degree = std::max(g.max_degree, deg);
    }
    auto kernels_copy = g.known_kernels;
    g.evaluate = [kernels_copy](const DiscreteMeasure& m) {
        KahanC acc;
        for (const auto& [deg, phi] : kernels_copy)
            acc.add(eval_F(*phi, m) / factorial(deg));
        return acc.value();
    };
    return g;
}

namespace {

double default_y_far(const GradedFunctional& F, const DiscreteMeasure& m) {
    double radius = 1.0;
    for (const auto& [deg, phi] : F.known_kernels)
        if (auto R = phi->support_radius()) radius = std::max(radius, *R);
    return 10.0 * (radius + diameter(m) + m.atoms.rowwise().norm().maxCoeff() + 1.0);
}

cplx mixture_value(const GradedFunctional& F, double lambda, const DiscreteMeasure& m,
                   double y_far) {
    Mat atoms(m.size() + 1, m.dim);
    atoms.topRows(m.size()) = m.atoms;
    Vec far = Vec::Zero(m.dim);
    far[0] = y_far;
    atoms.row(m.size()) = far.transpose();
    Vec w(m.size() + 1);
    w.head(m.size()) = lambda * m.weights;
    w[m.size()] = 1.0 - lambda;
    return F.evaluate(make_discrete(atoms, w));
}

}  // namespace

cplx extension_F_lambda(const GradedFunctional& F, double lambda, const DiscreteMeasure& m,
                        const ExtensionOptions& opt) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw NonFiniteInput("lambda must lie in [0,1], got " + std::to_string(lambda));
    if (lambda == 0.0) return 0.0;

    if (!F.known_kernels.empty() && !opt.force_mixture_path) {
        KahanC acc;
        for (const auto& [deg, phi] : F.known_kernels)
            acc.add(std::pow(lambda, deg) / factorial(deg) * eval_F(*phi, m));
        return acc.value();
    }

    // far-point mixture with stabilization: double y until the value stops
    // moving in relative terms
    double y = (opt.y_far > 0.0) ? opt.y_far : default_y_far(F, m);
    cplx prev = mixture_value(F, lambda, m, y);
    for (int it = 0; it < opt.max_doublings; ++it) {
        y *= 2.0;
        const cplx cur = mixture_value(F, lambda, m, y);
        if (std::abs(cur - prev) <= opt.stabilization_rtol * (1.0 + std::abs(cur))) return cur;
        prev = cur;
    }
    throw NotStabilized("far-point dilution did not settle after doubling");
}

cplx project_pi_k(const GradedFunctional& F, int k, const DiscreteMeasure& m,
                  const ExtensionOptions& opt) {
    const int N = F.max_degree;
    if (N < 1) throw EmptySupport("graded functional declares no degree");
    if (N > 12) throw IllConditioned("lambda-polynomial degree " + std::to_string(N) + " > 12");
    if (k < 1 || k > N) throw IndexOutOfRange("degree " + std::to_string(k));

    // no constant term: the extension vanishes at lambda = 0
    Mat V(N, N);
    VecC g(N);
    for (int j = 1; j <= N; ++j) {
        const double lam = static_cast<double>(j) / (N + 1);
        double pw = 1.0;
        for (int c = 1; c <= N; ++c) {
            pw *= lam;
            V(j - 1, c - 1) = pw;
        }
        g[j - 1] = extension_F_lambda(F, lam, m, opt);
    }
    Eigen::JacobiSVD<Mat> svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues()[0];
    const double smin = svd.singularValues()[N - 1];
    if (!(smin > 0.0) || smax / smin > 1e12)
        throw IllConditioned("Vandermonde condition " + std::to_string(smax / smin));
    const Vec g_re = g.real();
    const Vec g_im = g.imag();
    const Vec sol_re = svd.solve(g_re);
    const Vec sol_im = svd.solve(g_im);
    return {sol_re[k - 1], sol_im[k - 1]};
}

cplx recover_kernel(const GradedFunctional& F, int k, const Mat& x, const ExtensionOptions& opt) {
    const MeasureFunctional pik = [&](const DiscreteMeasure& m) {
        return project_pi_k(F, k, m, opt);
    };
    return static_cast<double>(k) * factorial(k) * apply_Ok(pik, x);
}

VecC lattice_fourier_coefficients(const SymmetricKernel& phi, double L, int n_per_axis,
                                  const std::vector<Mat>& xi_nodes) {
    const int k = phi.arity();
    if (phi.dim() != 1) throw DimensionMismatch("lattice transform is 1-d only");
    if (k > 2) throw ArityGuardExceeded("lattice transform supports arity <= 2");
    if (n_per_axis < 2) throw NonFiniteInput("need at least 2 lattice points per axis");
    const double h = 2.0 * L / (n_per_axis - 1);

    // trapezoid weights per axis
    Vec tw = Vec::Constant(n_per_axis, 1.0);
    tw[0] = tw[n_per_axis - 1] = 0.5;

    VecC out(static_cast<Eigen::Index>(xi_nodes.size()));
    std::vector<double> xs(n_per_axis);
    for (int i = 0; i < n_per_axis; ++i) xs[i] = -L + h * i;

    Mat tuple(k, 1);
    for (size_t q = 0; q < xi_nodes.size(); ++q) {
        const Mat& xi = xi_nodes[q];
        if (xi.rows() != k || xi.cols() != 1)
            throw DimensionMismatch("frequency tuple shape != arity x 1");
        KahanC acc;
        if (k == 1) {
            for (int i = 0; i < n_per_axis; ++i) {
                tuple(0, 0) = xs[i];
                const double ph = kTwoPi * xi(0, 0) * xs[i];
                acc.add(tw[i] * h * phi.value(tuple) * cplx(std::cos(ph), std::sin(ph)));
            }
        } else {
            for (int i = 0; i < n_per_axis; ++i)
                for (int j = 0; j < n_per_axis; ++j) {
                    tuple(0, 0) = xs[i];
                    tuple(1, 0) = xs[j];
                    const double ph = kTwoPi * (xi(0, 0) * xs[i] + xi(1, 0) * xs[j]);
                    acc.add(tw[i] * tw[j] * h * h * phi.value(tuple) *
                            cplx(std::cos(ph), std::sin(ph)));
                }
        }
        out[static_cast<Eigen::Index>(q)] = acc.value();
    }
    return out;
}

}  // namespace wassheat
