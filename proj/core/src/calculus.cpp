#include "wassheat/calculus.hpp"

#include <cmath>

namespace wassheat {

void check_tensor_guard(int n, int p) {
    double total = 1.0;
    for (int i = 0; i < p; ++i) {
        total *= static_cast<double>(n);
        if (total > kTensorGuard)
            throw TensorGuardExceeded(std::to_string(n) + "^" + std::to_string(p) + " tuples");
    }
}

namespace {

// Odometer over [0,n)^p in row-major order; fn(idx, weight_product).
// p == 0 yields the single empty tuple with weight 1.
template <typename Fn>
void for_each_tuple(const DiscreteMeasure& m, int p, Fn&& fn) {
    check_tensor_guard(m.size(), p);
    std::vector<int> idx(p, 0);
    while (true) {
        double wp = 1.0;
        for (int q = 0; q < p; ++q) wp *= m.weights[idx[q]];
        fn(idx, wp);
        int pos = p - 1;
        while (pos >= 0) {
            if (++idx[pos] < m.size()) break;
            idx[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
}

void fill_rows(Mat& xt, int from_row, const DiscreteMeasure& m, const std::vector<int>& idx) {
    for (size_t q = 0; q < idx.size(); ++q) xt.row(from_row + static_cast<int>(q)) = m.atoms.row(idx[q]);
}

}  // namespace

cplx eval_F(const SymmetricKernel& phi, const DiscreteMeasure& m) {
    if (phi.dim() != m.dim) throw DimensionMismatch("kernel dim != measure dim");
    const int k = phi.arity();
    Mat xt(k, m.dim);
    KahanC acc;
    for_each_tuple(m, k, [&](const std::vector<int>& idx, double wp) {
        if (wp == 0.0) return;
        fill_rows(xt, 0, m, idx);
        acc.add(wp * phi.value(xt));
    });
    return acc.value() / static_cast<double>(k);
}

VecC grad_w(const SymmetricKernel& phi, const DiscreteMeasure& m, const Vec& x1) {
    if (phi.dim() != m.dim) throw DimensionMismatch("kernel dim != measure dim");
    if (static_cast<int>(x1.size()) != phi.dim()) throw DimensionMismatch("x1 dim != kernel dim");
    const int k = phi.arity();
    Mat xt(k, m.dim);
    xt.row(0) = x1.transpose();
    VecC g = VecC::Zero(m.dim);
    for_each_tuple(m, k - 1, [&](const std::vector<int>& idx, double wp) {
        if (wp == 0.0) return;
        fill_rows(xt, 1, m, idx);
        g += wp * phi.grad1(xt);
    });
    return g;
}

MatC grad_grad_w(const SymmetricKernel& phi, const DiscreteMeasure& m, const Vec& x1) {
    if (phi.dim() != m.dim) throw DimensionMismatch("kernel dim != measure dim");
    const int k = phi.arity();
    Mat xt(k, m.dim);
    xt.row(0) = x1.transpose();
    MatC h = MatC::Zero(m.dim, m.dim);
    for_each_tuple(m, k - 1, [&](const std::vector<int>& idx, double wp) {
        if (wp == 0.0) return;
        fill_rows(xt, 1, m, idx);
        h += wp * phi.hess11(xt);
    });
    return h;
}

MatC hess_offdiag(const SymmetricKernel& phi, const DiscreteMeasure& m, const Vec& x1,
                  const Vec& x2) {
    if (phi.dim() != m.dim) throw DimensionMismatch("kernel dim != measure dim");
    const int k = phi.arity();
    if (k == 1) return MatC::Zero(m.dim, m.dim);
    Mat xt(k, m.dim);
    xt.row(0) = x1.transpose();
    xt.row(1) = x2.transpose();
    MatC h = MatC::Zero(m.dim, m.dim);
    for_each_tuple(m, k - 2, [&](const std::vector<int>& idx, double wp) {
        if (wp == 0.0) return;
        fill_rows(xt, 2, m, idx);
        h += wp * phi.hess12(xt);
    });
    return static_cast<double>(k - 1) * h;
}

VecC mean_gradient(const SymmetricKernel& phi, const DiscreteMeasure& m) {
    VecC g = VecC::Zero(m.dim);
    for (int i = 0; i < m.size(); ++i)
        g += m.weights[i] * grad_w(phi, m, m.atoms.row(i).transpose());
    return g;
}

cplx hess_quadratic_form(const SymmetricKernel& phi, const DiscreteMeasure& m, const Mat& zeta1,
                         const Mat& zeta2) {
    const int n = m.size();
    if (zeta1.rows() != n || zeta2.rows() != n || zeta1.cols() != m.dim || zeta2.cols() != m.dim)
        throw DimensionMismatch("vector field shape != atoms shape");
    KahanC acc;
    // The form is bilinear (no conjugation): zeta fields are real, so the
    // complex .dot (which conjugates its left argument) is safe here.
    for (int i = 0; i < n; ++i) {
        const MatC At = grad_grad_w(phi, m, m.atoms.row(i).transpose());
        const VecC v = At * zeta1.row(i).transpose().cast<cplx>();
        acc.add(m.weights[i] * zeta2.row(i).transpose().cast<cplx>().dot(v));
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const MatC Am =
                hess_offdiag(phi, m, m.atoms.row(i).transpose(), m.atoms.row(j).transpose());
            const VecC v = Am * zeta1.row(j).transpose().cast<cplx>();
            acc.add(m.weights[i] * m.weights[j] * zeta2.row(i).transpose().cast<cplx>().dot(v));
        }
    return acc.value();
}

cplx laplacian_w(const SymmetricKernel& phi, const DiscreteMeasure& m, double eps) {
    if (phi.dim() != m.dim) throw DimensionMismatch("kernel dim != measure dim");
    const int k = phi.arity();
    Mat xt(k, m.dim);
    KahanC acc;
    for_each_tuple(m, k, [&](const std::vector<int>& idx, double wp) {
        if (wp == 0.0) return;
        fill_rows(xt, 0, m, idx);
        cplx theta = 0.0;
        for (int j = 0; j < k; ++j) theta += (1.0 + eps) * hess_block(phi, xt, j, j).trace();
        for (int j = 0; j < k; ++j)
            for (int l = 0; l < k; ++l)
                if (l != j) theta += hess_block(phi, xt, j, l).trace();
        acc.add(wp * theta);
    });
    return acc.value() / static_cast<double>(k);
}

cplx laplacian_w_decomposed(const SymmetricKernel& phi, const DiscreteMeasure& m, double eps) {
    KahanC acc;
    const int n = m.size();
    for (int i = 0; i < n; ++i)
        acc.add((1.0 + eps) * m.weights[i] *
                grad_grad_w(phi, m, m.atoms.row(i).transpose()).trace());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            acc.add(m.weights[i] * m.weights[j] *
                    hess_offdiag(phi, m, m.atoms.row(i).transpose(), m.atoms.row(j).transpose())
                        .trace());
    return acc.value();
}

cplx empirical_laplacian(const SymmetricKernel& phi, const Mat& points, double eps,
                         LaplacianMode mode, double h) {
    const int N = static_cast<int>(points.rows());
    const int d = static_cast<int>(points.cols());
    if (N == 0) throw EmptySupport("empirical laplacian needs points");
    if (d != phi.dim()) throw DimensionMismatch("points dim != kernel dim");

    if (mode == LaplacianMode::Symbolic) {
        const DiscreteMeasure m = empirical(points);
        KahanC acc;
        for (int j = 0; j < N; ++j)
            acc.add((1.0 + eps) / N * grad_grad_w(phi, m, points.row(j).transpose()).trace());
        for (int j = 0; j < N; ++j)
            for (int l = 0; l < N; ++l)
                acc.add(1.0 / (static_cast<double>(N) * N) *
                        hess_offdiag(phi, m, points.row(j).transpose(), points.row(l).transpose())
                            .trace());
        return acc.value();
    }

    // Finite differences of u(y) = F_Phi[m_y]. The mixed sum over (j,l,c)
    // equals the eps = 0 Laplacian; the eps part needs first-slot kernel
    // blocks, taken from the FD-default derivatives of a value-only wrapper.
    const auto u = [&](const Mat& y) { return eval_F(phi, empirical(y)); };
    const cplx u0 = u(points);
    Kahan re, im;
    Mat y = points;
    for (int c = 0; c < d; ++c) {
        for (int j = 0; j < N; ++j) {
            // diagonal: centered second difference
            y(j, c) = points(j, c) + h;
            const cplx up = u(y);
            y(j, c) = points(j, c) - h;
            const cplx um = u(y);
            y(j, c) = points(j, c);
            const cplx diag = (up - 2.0 * u0 + um) / (h * h);
            re.add(diag.real());
            im.add(diag.imag());
            for (int l = j + 1; l < N; ++l) {
                // mixed: 4-point stencil, counted twice (j,l) and (l,j)
                y(j, c) = points(j, c) + h;
                y(l, c) = points(l, c) + h;
                const cplx upp = u(y);
                y(l, c) = points(l, c) - h;
                const cplx upm = u(y);
                y(j, c) = points(j, c) - h;
                const cplx umm = u(y);
                y(l, c) = points(l, c) + h;
                const cplx ump = u(y);
                y(j, c) = points(j, c);
                y(l, c) = points(l, c);
                const cplx mixed = (upp - upm - ump + umm) / (4.0 * h * h);
                re.add(2.0 * mixed.real());
                im.add(2.0 * mixed.imag());
            }
        }
    }
    cplx total(re.value(), im.value());

    if (eps != 0.0) {
        GenericCallbackKernel fd_phi(
            phi.arity(), d, [&phi](const Mat& x) { return phi.value(x); }, std::nullopt,
            std::nullopt, phi.is_real());
        const DiscreteMeasure m = empirical(points);
        cplx trace_sum = 0.0;
        for (int j = 0; j < N; ++j)
            trace_sum += grad_grad_w(fd_phi, m, points.row(j).transpose()).trace();
        total += eps / static_cast<double>(N) * trace_sum;
    }
    return total;
}

}  // namespace wassheat
