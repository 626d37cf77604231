#include "doctest.h"

#include <cmath>
#include <memory>
#include <vector>

#include <wassheat/calculus.hpp>
#include <wassheat/kernels.hpp>
#include <wassheat/measure.hpp>

#include "../support/checks.hpp"
#include "../support/oracles.hpp"
#include "../support/random_inputs.hpp"

using namespace wassheat;

namespace {

oracle::TupleFn as_fn(const SymmetricKernel& phi) {
    return [&phi](const Mat& x) { return phi.value(x); };
}

// A small zoo of kernels for property tests: (kernel, sensible sample box).
struct Zoo {
    KernelPtr phi;
    double box;
};

std::vector<Zoo> kernel_zoo(testin::Rng& rng, int k, int d) {
    std::vector<Zoo> zoo;
    zoo.push_back({std::make_shared<ExponentialKernel>(testin::frequencies(rng, k, d)), 1.0});
    Eigen::MatrixXi e(k, d);
    for (int j = 0; j < k; ++j)
        for (int c = 0; c < d; ++c) e(j, c) = rng.uint(0, 2);
    if (e.sum() == 0) e(0, 0) = 2;
    zoo.push_back({std::make_shared<TensorPolynomialKernel>(e), 1.0});
    zoo.push_back({std::make_shared<BumpProductKernel>(k, d, 2.0, 0.3), 1.0});
    if (k == 2)
        zoo.push_back({std::make_shared<RadialDifferenceKernel>(
                           d, RadialDifferenceKernel::Profile::Gauss, 0.9),
                       1.0});
    return zoo;
}

// integral of Phi(x1, x2, .) over m^(k-2) with the first two slots pinned,
// realized independently of the library (plain odometer).
oracle::TupleFn pinned_two_average(const SymmetricKernel& phi, const DiscreteMeasure& m) {
    return [&phi, &m](const Mat& x12) {
        const int k = phi.arity();
        const int n = m.size();
        const int d = m.dim;
        if (k == 2) return phi.value(x12);
        std::vector<int> idx(k - 2, 0);
        cplx total{0.0, 0.0};
        while (true) {
            Mat x(k, d);
            x.row(0) = x12.row(0);
            x.row(1) = x12.row(1);
            double w = 1.0;
            for (int q = 0; q < k - 2; ++q) {
                w *= m.weights[idx[q]];
                x.row(q + 2) = m.atoms.row(idx[q]);
            }
            total += w * phi.value(x);
            int pos = k - 3;
            while (pos >= 0 && ++idx[pos] == n) idx[pos--] = 0;
            if (pos < 0) break;
        }
        return total;
    };
}

}  // namespace

TEST_SUITE("calculus") {

TEST_CASE("eval_F matches the enumeration oracle") {
    testin::Rng rng(1001);
    for (int rep = 0; rep < 6; ++rep) {
        int k = rng.uint(1, 3), d = rng.uint(1, 2);
        auto m = testin::measure(rng, rng.uint(1, 4), d);
        for (const auto& z : kernel_zoo(rng, k, d)) {
            cplx got = eval_F(*z.phi, m);
            cplx want = oracle::eval_F(as_fn(*z.phi), k, m.atoms, m.weights);
            CHECK(checks::close_rel(got, want, 1e-13));
        }
    }
}

TEST_CASE("eval_F of the constant kernel is 1/k") {
    testin::Rng rng(1002);
    for (int k = 1; k <= 4; ++k) {
        GenericCallbackKernel one(k, 1, [](const Mat&) { return cplx(1.0, 0.0); });
        auto m = testin::measure(rng, 3, 1);
        CHECK(checks::close(eval_F(one, m), cplx(1.0 / k, 0.0), 1e-14));
    }
}

TEST_CASE("grad_w and grad_grad_w match finite differences of the slot average") {
    testin::Rng rng(1003);
    for (int rep = 0; rep < 5; ++rep) {
        int k = rng.uint(1, 3), d = rng.uint(1, 2);
        auto m = testin::measure(rng, rng.uint(1, 3), d);
        Vec x1 = rng.vec(d, -1.0, 1.0);
        Mat x1m = x1.transpose();
        for (const auto& z : kernel_zoo(rng, k, d)) {
            auto fn = as_fn(*z.phi);
            oracle::TupleFn avg = [&](const Mat& xm) {
                return oracle::slot1_average(fn, k, m.atoms, m.weights, xm.row(0).transpose());
            };
            CHECK(checks::vec_close(grad_w(*z.phi, m, x1), oracle::fd_grad_slot(avg, x1m, 0, 1e-5),
                                    1e-6));
            CHECK(checks::mat_close(grad_grad_w(*z.phi, m, x1),
                                    oracle::fd_hess_slots(avg, x1m, 0, 0, 1e-4), 2e-4));
        }
    }
}

TEST_CASE("hess_offdiag matches the pinned-two-slot finite difference") {
    testin::Rng rng(1004);
    for (int rep = 0; rep < 4; ++rep) {
        int k = rng.uint(2, 4), d = rng.uint(1, 2);
        auto m = testin::measure(rng, rng.uint(1, 3), d);
        Vec x1 = rng.vec(d, -1.0, 1.0), x2 = rng.vec(d, -1.0, 1.0);
        Mat x12(2, d);
        x12.row(0) = x1.transpose();
        x12.row(1) = x2.transpose();
        ExponentialKernel phi(testin::frequencies(rng, k, d));
        auto pinned = pinned_two_average(phi, m);
        MatC want = static_cast<double>(k - 1) * oracle::fd_hess_slots(pinned, x12, 0, 1, 1e-4);
        CHECK(checks::mat_close(hess_offdiag(phi, m, x1, x2), want, 2e-4));
    }
}

TEST_CASE("hess_offdiag vanishes for arity one") {
    testin::Rng rng(1005);
    Eigen::MatrixXi e(1, 2);
    e << 2, 1;
    TensorPolynomialKernel phi(e);
    auto m = testin::measure(rng, 2, 2);
    CHECK(checks::mat_close(hess_offdiag(phi, m, rng.vec(2, -1.0, 1.0), rng.vec(2, -1.0, 1.0)),
                            MatC::Zero(2, 2), 0.0));
}

TEST_CASE("mean_gradient is the weighted sum of atom gradients") {
    testin::Rng rng(1006);
    auto m = testin::measure(rng, 4, 2);
    ExponentialKernel phi(testin::frequencies(rng, 2, 2));
    VecC acc = VecC::Zero(2);
    for (int i = 0; i < m.size(); ++i)
        acc += m.weights[i] * grad_w(phi, m, m.atoms.row(i).transpose());
    CHECK(checks::vec_close(mean_gradient(phi, m), acc, 1e-13));
}

TEST_CASE("hess_quadratic_form is the mixed second variation along displacements") {
    testin::Rng rng(1007);
    for (int rep = 0; rep < 4; ++rep) {
        int k = rng.uint(1, 3), d = rng.uint(1, 2);
        auto m = testin::measure(rng, rng.uint(2, 3), d);
        Mat z1 = rng.mat(m.size(), d, -1.0, 1.0);
        Mat z2 = rng.mat(m.size(), d, -1.0, 1.0);
        for (const auto& z : kernel_zoo(rng, k, d)) {
            // u(s,t) = F[(id + s z1 + t z2)_# m]; mixed FD in (s,t) at 0.
            auto u = [&](double s, double t) {
                return eval_F(*z.phi, displace(displace(m, z1, s), z2, t));
            };
            const double h = 1e-4;
            cplx fd = (u(h, h) - u(h, -h) - u(-h, h) + u(-h, -h)) / (4.0 * h * h);
            cplx got = hess_quadratic_form(*z.phi, m, z1, z2);
            CHECK(checks::close(got, fd, 2e-4 * (1.0 + std::abs(got))));
        }
    }
}

TEST_CASE("hess_quadratic_form is symmetric in its two fields") {
    testin::Rng rng(1008);
    auto m = testin::measure(rng, 3, 2);
    Mat z1 = rng.mat(3, 2, -1.0, 1.0), z2 = rng.mat(3, 2, -1.0, 1.0);
    for (const auto& z : kernel_zoo(rng, 3, 2)) {
        cplx a = hess_quadratic_form(*z.phi, m, z1, z2);
        cplx b = hess_quadratic_form(*z.phi, m, z2, z1);
        CHECK(checks::close_rel(a, b, 1e-12));
    }
}

TEST_CASE("laplacian_w agrees with its trace decomposition") {
    testin::Rng rng(1009);
    for (int rep = 0; rep < 5; ++rep) {
        int k = rng.uint(1, 3), d = rng.uint(1, 2);
        auto m = testin::measure(rng, rng.uint(1, 4), d);
        double eps = rng.uni(0.0, 1.0);
        for (const auto& z : kernel_zoo(rng, k, d)) {
            cplx a = laplacian_w(*z.phi, m, eps);
            cplx b = laplacian_w_decomposed(*z.phi, m, eps);
            CHECK(checks::close_rel(a, b, 1e-11));
        }
    }
}

TEST_CASE("laplacian_w: frozen closed forms") {
    testin::Rng rng(1010);
    SUBCASE("arity one, quadratic kernel") {
        // Phi(x) = x^2 on R: the slot Hessian is the constant 2, so the
        // perturbed Laplacian is 2(1+eps) for every measure.
        Eigen::MatrixXi e(1, 1);
        e << 2;
        TensorPolynomialKernel phi(e);
        auto m = testin::measure(rng, 3, 1);
        CHECK(checks::close(laplacian_w(phi, m, 0.0), cplx(2.0, 0.0), 1e-13));
        CHECK(checks::close(laplacian_w(phi, m, 0.25), cplx(2.5, 0.0), 1e-13));
    }
    SUBCASE("arity two, product kernel") {
        // Phi = x1 * x2: diagonal blocks vanish, both cross blocks are 1, so
        // Theta_eps = 2 and F_Theta[m] = (1/2) * 2 = 1 for every measure.
        Eigen::MatrixXi e(2, 1);
        e << 1, 1;
        TensorPolynomialKernel phi(e);
        auto m = testin::measure(rng, 4, 1);
        CHECK(checks::close(laplacian_w(phi, m, 0.0), cplx(1.0, 0.0), 1e-13));
        CHECK(checks::close(laplacian_w(phi, m, 0.7), cplx(1.0, 0.0), 1e-13));
    }
    SUBCASE("radial difference kernels are harmonic at eps = 0") {
        RadialDifferenceKernel phi(2, RadialDifferenceKernel::Profile::Gauss, 0.8);
        auto m = testin::measure(rng, 3, 2);
        CHECK(std::abs(laplacian_w(phi, m, 0.0)) < 1e-12);
        CHECK(std::abs(laplacian_w(phi, m, 0.5)) > 1e-3);  // perturbation breaks it
    }
}

TEST_CASE("empirical_laplacian: symbolic equals the measure-level laplacian") {
    testin::Rng rng(1011);
    for (int rep = 0; rep < 4; ++rep) {
        int k = rng.uint(1, 3), d = rng.uint(1, 2), n = rng.uint(1, 4);
        Mat pts = rng.mat(n, d, -1.0, 1.0);
        double eps = rng.uni(0.0, 1.0);
        for (const auto& z : kernel_zoo(rng, k, d)) {
            cplx sym = empirical_laplacian(*z.phi, pts, eps, LaplacianMode::Symbolic);
            cplx ref = laplacian_w(*z.phi, empirical(pts), eps);
            CHECK(checks::close_rel(sym, ref, 1e-12));
        }
    }
}

TEST_CASE("empirical_laplacian: finite differences confirm the symbolic value") {
    testin::Rng rng(1012);
    for (int rep = 0; rep < 3; ++rep) {
        int k = rng.uint(1, 3), d = rng.uint(1, 2), n = rng.uint(2, 3);
        Mat pts = rng.mat(n, d, -1.0, 1.0);
        double eps = (rep % 2 == 0) ? 0.0 : 0.5;
        ExponentialKernel phi(testin::frequencies(rng, k, d));
        cplx sym = empirical_laplacian(phi, pts, eps, LaplacianMode::Symbolic);
        cplx fd = empirical_laplacian(phi, pts, eps, LaplacianMode::FiniteDifference);
        CHECK(checks::close(sym, fd, 1e-5 * (1.0 + std::abs(sym))));
    }
}

TEST_CASE("tensor guard rejects oversized nested sums") {
    GenericCallbackKernel one(4, 1, [](const Mat&) { return cplx(1.0, 0.0); });
    Mat big = Mat::Zero(100, 1);  // 100^4 = 1e8 tuples
    CHECK_THROWS_AS(eval_F(one, empirical(big)), TensorGuardExceeded);
    Mat ok = Mat::Zero(20, 1);  // 20^4 = 1.6e5, well under the guard
    CHECK(checks::close(eval_F(one, empirical(ok)), cplx(0.25, 0.0), 1e-12));
}

TEST_CASE("dimension mismatches are rejected") {
    Mat xi(1, 2);
    xi << 0.5, 0.5;
    ExponentialKernel phi(xi);
    Mat pts(2, 1);
    pts << 0.0, 1.0;
    auto m = make_discrete(pts);
    CHECK_THROWS_AS(eval_F(phi, m), DimensionMismatch);
    CHECK_THROWS_AS(grad_w(phi, m, Vec::Zero(2)), DimensionMismatch);
}

}  // TEST_SUITE("calculus")
