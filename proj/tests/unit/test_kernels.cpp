#include "doctest.h"

#include <cmath>
#include <memory>
#include <vector>

#include <wassheat/kernels.hpp>
#include <wassheat/types.hpp>

#include "../support/checks.hpp"
#include "../support/oracles.hpp"
#include "../support/random_inputs.hpp"

using namespace wassheat;

namespace {

// Wrap a kernel's value() so the FD oracles can drive it.
oracle::TupleFn as_fn(const SymmetricKernel& phi) {
    return [&phi](const Mat& x) { return phi.value(x); };
}

// Full (k*d) x (k*d) Hessian assembled from analytic blocks.
MatC full_hessian(const SymmetricKernel& phi, const Mat& x) {
    const int k = phi.arity(), d = phi.dim();
    MatC H(k * d, k * d);
    for (int j = 0; j < k; ++j)
        for (int l = 0; l < k; ++l)
            H.block(j * d, l * d, d, d) = hess_block(phi, x, j, l);
    return H;
}

double opnorm(const MatC& H) {
    return H.jacobiSvd().singularValues().size() ? H.jacobiSvd().singularValues()[0] : 0.0;
}

void check_derivatives_match_fd(const SymmetricKernel& phi, const Mat& x) {
    auto fn = as_fn(phi);
    CHECK(checks::vec_close(phi.grad1(x), oracle::fd_grad_slot(fn, x, 0, 1e-5), 1e-6));
    CHECK(checks::mat_close(phi.hess11(x), oracle::fd_hess_slots(fn, x, 0, 0, 1e-4), 2e-4));
    if (phi.arity() >= 2)
        CHECK(checks::mat_close(phi.hess12(x), oracle::fd_hess_slots(fn, x, 0, 1, 1e-4), 2e-4));
}

void check_permutation_invariance(const SymmetricKernel& phi, const Mat& x, testin::Rng& rng) {
    Mat y = x;
    for (int i = static_cast<int>(y.rows()) - 1; i > 0; --i) {
        int j = rng.uint(0, i);
        y.row(i).swap(y.row(j));
    }
    CHECK(checks::close(phi.value(x), phi.value(y), 1e-13 * (1.0 + std::abs(phi.value(x)))));
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("exponential kernel: frozen arity-1 value and metadata") {
    Mat xi(1, 2);
    xi << 0.5, -0.25;
    ExponentialKernel phi(xi);
    CHECK_FALSE(phi.is_real());
    CHECK(phi.sup_hess().has_value());
    CHECK(*phi.sup_hess() == doctest::Approx(4.0 * kPi * kPi * xi.squaredNorm()));

    Mat x(1, 2);
    x << 1.0, 2.0;
    // exp(-2 pi i <xi, x>) with <xi,x> = 0.
    CHECK(checks::close(phi.value(x), cplx(1.0, 0.0), 1e-15));
    x << 0.5, 0.0;  // <xi,x> = 0.25 => exp(-i pi/2) = -i
    CHECK(checks::close(phi.value(x), cplx(0.0, -1.0), 1e-15));
}

TEST_CASE("exponential kernel derivatives match finite differences") {
    testin::Rng rng(101);
    for (int rep = 0; rep < 8; ++rep) {
        int k = rng.uint(1, 3), d = rng.uint(1, 2);
        ExponentialKernel phi(testin::frequencies(rng, k, d));
        Mat x = rng.mat(k, d, -1.0, 1.0);
        check_derivatives_match_fd(phi, x);
        check_permutation_invariance(phi, x, rng);
    }
}

TEST_CASE("tensor polynomial kernel: frozen values") {
    SUBCASE("x1 * x2") {
        Eigen::MatrixXi e(2, 1);
        e << 1, 1;
        TensorPolynomialKernel phi(e);
        Mat x(2, 1);
        x << 3.0, -2.0;
        CHECK(phi.value(x).real() == doctest::Approx(-6.0));
        CHECK(phi.value(x).imag() == 0.0);
        // constant Hessian [[0,1],[1,0]], operator norm 1
        CHECK(*phi.sup_hess() == doctest::Approx(1.0));
    }
    SUBCASE("symmetrization of x1^2") {
        Eigen::MatrixXi e(2, 1);
        e << 2, 0;
        TensorPolynomialKernel phi(e);
        Mat x(2, 1);
        x << 3.0, -2.0;
        CHECK(phi.value(x).real() == doctest::Approx((9.0 + 4.0) / 2.0));
        CHECK(*phi.sup_hess() == doctest::Approx(1.0));  // Hessian diag(1,1)
    }
    SUBCASE("degree three declares no hessian bound") {
        Eigen::MatrixXi e(1, 1);
        e << 3;
        TensorPolynomialKernel phi(e);
        CHECK_FALSE(phi.sup_hess().has_value());
    }
    SUBCASE("negative exponents rejected") {
        Eigen::MatrixXi e(1, 1);
        e << -1;
        CHECK_THROWS_AS(TensorPolynomialKernel{e}, NonFiniteInput);
    }
}

TEST_CASE("tensor polynomial derivatives match finite differences") {
    testin::Rng rng(202);
    for (int rep = 0; rep < 8; ++rep) {
        int k = rng.uint(1, 3), d = rng.uint(1, 2);
        Eigen::MatrixXi e(k, d);
        for (int j = 0; j < k; ++j)
            for (int c = 0; c < d; ++c) e(j, c) = rng.uint(0, 2);
        if (e.sum() == 0) e(0, 0) = 1;
        TensorPolynomialKernel phi(e);
        Mat x = rng.mat(k, d, -1.2, 1.2);
        check_derivatives_match_fd(phi, x);
        check_permutation_invariance(phi, x, rng);
    }
}

TEST_CASE("radial difference kernels: derivatives, symmetry, cancellation") {
    testin::Rng rng(303);
    using P = RadialDifferenceKernel::Profile;
    for (P p : {P::Gauss, P::CosFreq, P::Quadratic, P::Quartic, P::InverseQuadratic}) {
        int d = rng.uint(1, 2);
        RadialDifferenceKernel phi(d, p, 0.8);
        Mat x = rng.mat(2, d, -1.5, 1.5);
        check_derivatives_match_fd(phi, x);
        check_permutation_invariance(phi, x, rng);
        // f(x1 - x2) has hess12 = -hess11 identically: the cross block is the
        // negated diagonal block, which is what makes these kernels harmonic
        // for the unperturbed operator.
        CHECK(checks::mat_close(phi.hess12(x), -phi.hess11(x), 1e-12));
    }
}

TEST_CASE("bump product kernel: support, boundary smoothness, taper") {
    const double R = 1.5;
    BumpProductKernel phi(2, 2, R, 0.4);

    SUBCASE("vanishes outside the ball, positive inside") {
        Mat x(2, 2);
        x << 0.1, 0.2, 2.0, 0.0;  // second slot outside
        CHECK(phi.value(x) == cplx(0.0, 0.0));
        CHECK(checks::vec_close(phi.grad1(x), VecC::Zero(2), 0.0));
        x << 0.1, 0.2, 0.3, -0.4;
        CHECK(phi.value(x).real() > 0.0);
    }
    SUBCASE("order-four zero at the boundary") {
        Vec y(2);
        for (double delta : {1e-2, 1e-3}) {
            y << R - delta, 0.0;
            // (1 - |y|^2/R^2)^4 ~ (2 delta / R)^4
            double scale = std::pow(2.0 * delta / R, 4.0);
            CHECK(phi.psi(y) <= 2.0 * scale);
            CHECK(phi.psi_grad(y).norm() <= 20.0 * scale / delta);
            CHECK(phi.psi_hess(y).norm() <= 300.0 * scale / (delta * delta));
        }
        y << R, 0.0;
        CHECK(phi.psi(y) == 0.0);
        CHECK(phi.psi_grad(y).norm() == 0.0);
        CHECK(phi.psi_hess(y).norm() == 0.0);
    }
    SUBCASE("derivatives match finite differences inside the support") {
        testin::Rng rng(404);
        for (int rep = 0; rep < 5; ++rep) {
            Mat x = rng.mat(2, 2, -0.7, 0.7);
            check_derivatives_match_fd(phi, x);
            check_permutation_invariance(phi, x, rng);
        }
    }
    SUBCASE("tilt factor: guard and effect") {
        Vec tilt(2);
        tilt << 0.9, 0.0;
        CHECK_THROWS(BumpProductKernel(1, 2, 1.5, 0.0, tilt));  // |tilt|*R >= 1
        tilt << 0.4, 0.0;
        BumpProductKernel tilted(1, 2, 1.5, 0.0, tilt);
        Mat x(1, 2);
        x << 0.5, 0.0;
        Mat xm(1, 2);
        xm << -0.5, 0.0;
        // the affine factor breaks the y -> -y symmetry
        CHECK(std::abs(tilted.value(x)) != doctest::Approx(std::abs(tilted.value(xm))));
        check_derivatives_match_fd(tilted, x);
    }
    SUBCASE("declared metadata") {
        CHECK(phi.support_radius().has_value());
        CHECK(*phi.support_radius() == doctest::Approx(R));
        CHECK(phi.sup_hess().has_value());
    }
}

TEST_CASE("declared sup_hess dominates sampled operator norms") {
    testin::Rng rng(505);
    std::vector<KernelPtr> kernels;
    kernels.push_back(std::make_shared<ExponentialKernel>(testin::frequencies(rng, 2, 2)));
    Eigen::MatrixXi e(2, 1);
    e << 1, 1;
    kernels.push_back(std::make_shared<TensorPolynomialKernel>(e));
    kernels.push_back(std::make_shared<RadialDifferenceKernel>(
        2, RadialDifferenceKernel::Profile::Gauss, 0.7));
    kernels.push_back(std::make_shared<BumpProductKernel>(2, 1, 1.2, 0.5));
    for (const auto& phi : kernels) {
        REQUIRE(phi->sup_hess().has_value());
        const double bound = *phi->sup_hess();
        const double box = phi->support_radius() ? *phi->support_radius() / std::sqrt(2.0) : 1.5;
        for (int rep = 0; rep < 30; ++rep) {
            Mat x = rng.mat(phi->arity(), phi->dim(), -box, box);
            CHECK(opnorm(full_hessian(*phi, x)) <= bound * (1.0 + 1e-9) + 1e-9);
        }
    }
}

TEST_CASE("grad_slot and hess_block respect slot symmetry") {
    testin::Rng rng(606);
    ExponentialKernel phi(testin::frequencies(rng, 3, 2));
    Mat x = rng.mat(3, 2, -1.0, 1.0);
    auto fn = as_fn(phi);
    for (int j = 0; j < 3; ++j)
        CHECK(checks::vec_close(grad_slot(phi, x, j), oracle::fd_grad_slot(fn, x, j, 1e-5), 1e-6));
    for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) {
            CHECK(checks::mat_close(hess_block(phi, x, j, l),
                                    oracle::fd_hess_slots(fn, x, j, l, 1e-4), 2e-4));
            // d^2/dx_j dx_l = (d^2/dx_l dx_j)^T
            CHECK(checks::mat_close(hess_block(phi, x, j, l),
                                    hess_block(phi, x, l, j).transpose(), 1e-12));
        }
}

TEST_CASE("symmetrize averages a raw callback over slot permutations") {
    // raw(a, b) = a * b^2  =>  Phi(a, b) = (a b^2 + b a^2) / 2
    auto phi = symmetrize(2, 1, [](const Mat& x) { return cplx(x(0, 0) * x(1, 0) * x(1, 0), 0.0); });
    Mat x(2, 1);
    x << 2.0, 3.0;
    CHECK(phi->value(x).real() == doctest::Approx((2.0 * 9.0 + 3.0 * 4.0) / 2.0));
    Mat xs(2, 1);
    xs << 3.0, 2.0;
    CHECK(phi->value(xs) == phi->value(x));

    CHECK_THROWS_AS(symmetrize(kMaxArity + 1, 1, [](const Mat&) { return cplx(0.0, 0.0); }),
                    ArityGuardExceeded);
}

TEST_CASE("scale_kernel scales values and metadata") {
    auto base = std::make_shared<BumpProductKernel>(1, 1, 2.0, 0.3);
    auto scaled = scale_kernel(base, -2.5);
    Mat x(1, 1);
    x << 0.7;
    CHECK(checks::close(scaled->value(x), -2.5 * base->value(x), 1e-15));
    CHECK(checks::vec_close(scaled->grad1(x), -2.5 * base->grad1(x), 1e-9));
    CHECK(*scaled->sup_hess() == doctest::Approx(2.5 * *base->sup_hess()));
    CHECK(*scaled->support_radius() == doctest::Approx(2.0));
}

TEST_CASE("tuple shape is validated") {
    Mat xi(2, 1);
    xi << 0.5, -0.5;
    ExponentialKernel phi(xi);
    Mat bad(1, 1);
    bad << 0.0;
    CHECK_THROWS_AS(phi.value(bad), DimensionMismatch);
    Mat bad2(2, 2);
    bad2.setZero();
    CHECK_THROWS_AS(phi.grad1(bad2), DimensionMismatch);
}

}  // TEST_SUITE("kernels")
