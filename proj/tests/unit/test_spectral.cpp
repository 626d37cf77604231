#include "doctest.h"

#include <cmath>
#include <map>
#include <vector>

#include <wassheat/calculus.hpp>
#include <wassheat/kernels.hpp>
#include <wassheat/spectral.hpp>

#include "../support/checks.hpp"
#include "../support/oracles.hpp"
#include "../support/random_inputs.hpp"

using namespace wassheat;

namespace {

// Random coefficient set with the given degrees; one grid per degree.
SpectralCoefficients random_coeffs(testin::Rng& rng, const std::vector<int>& degrees, int d,
                                   int nodes_per_degree) {
    SpectralCoefficients A;
    for (int k : degrees) {
        std::vector<Mat> nodes;
        for (int q = 0; q < nodes_per_degree; ++q) nodes.push_back(rng.mat(k, d, -1.5, 1.5));
        Vec w(nodes_per_degree);
        for (int q = 0; q < nodes_per_degree; ++q) w[q] = 0.2 + rng.uni();
        VecC vals(nodes_per_degree);
        for (int q = 0; q < nodes_per_degree; ++q)
            vals[q] = cplx(rng.uni(-1.0, 1.0), rng.uni(-1.0, 1.0));
        A.degrees[k] = make_block(make_grid(k, d, nodes, w), vals);
    }
    return A;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("make_grid validates its inputs and hashes content") {
    std::vector<Mat> nodes{Mat::Zero(2, 1), Mat::Ones(2, 1)};
    Vec w(2);
    w << 0.5, 0.5;

    auto g = make_grid(2, 1, nodes, w);
    CHECK(g.grid_id != 0);

    auto same = make_grid(2, 1, nodes, w);
    CHECK(same.grid_id == g.grid_id);

    std::vector<Mat> other{Mat::Zero(2, 1), 2.0 * Mat::Ones(2, 1)};
    CHECK(make_grid(2, 1, other, w).grid_id != g.grid_id);

    Vec wneg(2);
    wneg << 0.5, -0.5;
    CHECK_THROWS_AS(make_grid(2, 1, nodes, wneg), NonFiniteInput);
    CHECK_THROWS_AS(make_grid(2, 1, std::vector<Mat>{}, Vec(0)), EmptySupport);
    std::vector<Mat> bad{Mat::Zero(3, 1), Mat::Ones(2, 1)};
    CHECK_THROWS_AS(make_grid(2, 1, bad, w), DimensionMismatch);
    CHECK_THROWS_AS(make_block(g, VecC::Zero(3)), DimensionMismatch);
}

TEST_CASE("eigenfunction is the averaged product of characteristic values") {
    testin::Rng rng(3001);
    for (int rep = 0; rep < 10; ++rep) {
        int k = rng.uint(1, 4), d = rng.uint(1, 2);
        auto m = testin::measure(rng, rng.uint(1, 5), d);
        Mat xi = testin::frequencies(rng, k, d);
        cplx want(1.0, 0.0);
        for (int j = 0; j < k; ++j)
            want *= oracle::char_fn(m.atoms, m.weights, xi.row(j).transpose());
        want /= static_cast<double>(k);
        CHECK(checks::close_rel(eigenfunction(xi, m), want, 1e-13));

        // and it is exactly eval_F of the matching exponential kernel
        ExponentialKernel phi(xi);
        CHECK(checks::close_rel(eigenfunction(xi, m), eval_F(phi, m), 1e-12));
    }
}

TEST_CASE("lambda_sq: frozen values and the eigenvalue identity") {
    Mat xi(2, 1);
    xi << 0.3, 0.4;
    CHECK(lambda_sq(xi, 0.0) == doctest::Approx(4.0 * kPi * kPi * 0.49).epsilon(1e-14));
    CHECK(lambda_sq(xi, 0.5) ==
          doctest::Approx(4.0 * kPi * kPi * (0.49 + 0.5 * 0.25)).epsilon(1e-14));

    // harmonic tuple: frequencies summing to zero kill the eps = 0 eigenvalue
    Mat h(2, 2);
    h << 0.7, -0.2, -0.7, 0.2;
    CHECK(lambda_sq(h, 0.0) == doctest::Approx(0.0));
    CHECK(lambda_sq(h, 0.3) > 0.0);

    // laplacian of the exponential kernel reproduces -lambda_sq * E
    testin::Rng rng(3002);
    for (int rep = 0; rep < 10; ++rep) {
        int k = rng.uint(1, 3), d = rng.uint(1, 2);
        Mat f = testin::frequencies(rng, k, d);
        auto m = testin::measure(rng, rng.uint(1, 4), d);
        double eps = rng.uni(0.0, 1.0);
        ExponentialKernel phi(f);
        cplx lhs = laplacian_w(phi, m, eps);
        cplx rhs = -lambda_sq(f, eps) * eigenfunction(f, m);
        CHECK(checks::close(lhs, rhs, 1e-10 * (1.0 + lambda_sq(f, eps))));
    }
}

TEST_CASE("eval_superposition stacks single-kernel evaluations") {
    testin::Rng rng(3003);
    auto m = testin::measure(rng, 3, 2);
    auto A = random_coeffs(rng, {1, 2, 3}, 2, 3);
    cplx want(0.0, 0.0);
    for (const auto& [k, block] : A.degrees) {
        for (size_t q = 0; q < block.grid.nodes.size(); ++q) {
            ExponentialKernel phi(block.grid.nodes[q]);
            want += block.grid.quad_weights[static_cast<int>(q)] * block.values[static_cast<int>(q)] *
                    eval_F(phi, m) / factorial(k);
        }
    }
    CHECK(checks::close_rel(eval_superposition(A, m), want, 1e-12));

    // smoothing acts through the gaussian-damped characteristic function
    auto sm = smooth(m, 0.2);
    cplx wants(0.0, 0.0);
    for (const auto& [k, block] : A.degrees) {
        for (size_t q = 0; q < block.grid.nodes.size(); ++q) {
            const Mat& xi = block.grid.nodes[q];
            cplx e(1.0, 0.0);
            for (int j = 0; j < k; ++j) e *= char_fn(sm, xi.row(j).transpose());
            wants += block.grid.quad_weights[static_cast<int>(q)] *
                     block.values[static_cast<int>(q)] * e / (static_cast<double>(k) * factorial(k));
        }
    }
    CHECK(checks::close_rel(eval_superposition(A, sm), wants, 1e-12));
}

TEST_CASE("apply_laplacian_spectral multiplies coefficients by -lambda_sq") {
    testin::Rng rng(3004);
    auto m = testin::measure(rng, 3, 1);
    auto A = random_coeffs(rng, {1, 2}, 1, 4);
    A.decay = DecayDeclaration{2.0, 1.0};
    for (double eps : {0.0, 0.4}) {
        auto L = apply_laplacian_spectral(A, eps);
        CHECK_FALSE(L.decay.has_value());  // multiplier invalidates the declaration

        // value-level cross-check: sum of per-kernel laplacians
        cplx want(0.0, 0.0);
        for (const auto& [k, block] : A.degrees) {
            for (size_t q = 0; q < block.grid.nodes.size(); ++q) {
                ExponentialKernel phi(block.grid.nodes[q]);
                want += block.grid.quad_weights[static_cast<int>(q)] *
                        block.values[static_cast<int>(q)] * laplacian_w(phi, m, eps) / factorial(k);
            }
        }
        CHECK(checks::close_rel(eval_superposition(L, m), want, 1e-10));
    }
}

TEST_CASE("mean gradient coefficients match the calculus-level mean gradient") {
    testin::Rng rng(3005);
    int d = 2;
    auto m = testin::measure(rng, 3, d);
    auto A = random_coeffs(rng, {1, 2}, d, 3);

    auto per_component = mean_gradient_coefficients(A);
    REQUIRE(static_cast<int>(per_component.size()) == d);

    VecC want = VecC::Zero(d);
    for (const auto& [k, block] : A.degrees) {
        for (size_t q = 0; q < block.grid.nodes.size(); ++q) {
            ExponentialKernel phi(block.grid.nodes[q]);
            want += block.grid.quad_weights[static_cast<int>(q)] *
                    block.values[static_cast<int>(q)] * mean_gradient(phi, m) / factorial(k);
        }
    }
    VecC got = mean_gradient_spectral(A, m);
    CHECK(checks::vec_close(got, want, 1e-12));
    for (int c = 0; c < d; ++c)
        CHECK(checks::close_rel(eval_superposition(per_component[c], m), got[c], 1e-12));
}

TEST_CASE("hs_inner: conjugate symmetry, weights, grid discipline") {
    testin::Rng rng(3006);
    auto A = random_coeffs(rng, {1, 2}, 1, 3);
    SpectralCoefficients B;
    for (const auto& [k, block] : A.degrees) {
        VecC vals(block.values.size());
        for (int q = 0; q < vals.size(); ++q) vals[q] = cplx(rng.uni(-1.0, 1.0), rng.uni(-1.0, 1.0));
        B.degrees[k] = make_block(block.grid, vals);  // same grids as A
    }

    SUBCASE("conjugate symmetry and positivity") {
        cplx ab = hs_inner(A, B, 0.0);
        cplx ba = hs_inner(B, A, 0.0);
        CHECK(checks::close(ab, std::conj(ba), 1e-13));
        CHECK(hs_norm_sq(A, 0.0) > 0.0);
        CHECK(hs_norm_sq(A, 1.0) >= hs_norm_sq(A, 0.0));  // (1 + lambda^2) >= 1
    }
    SUBCASE("manual reweighting reproduces s = 1") {
        cplx want(0.0, 0.0);
        for (const auto& [k, block] : A.degrees) {
            const auto& bb = B.degrees.at(k);
            for (int q = 0; q < block.values.size(); ++q)
                want += block.grid.quad_weights[q] * block.values[q] * std::conj(bb.values[q]) *
                        (1.0 + lambda_sq(block.grid.nodes[q], 0.0)) / factorial(k);
        }
        CHECK(checks::close_rel(hs_inner(A, B, 1.0), want, 1e-12));
    }
    SUBCASE("one-sided degrees contribute zero") {
        SpectralCoefficients only1, only2;
        only1.degrees[1] = A.degrees.at(1);
        only2.degrees[2] = B.degrees.at(2);
        CHECK(hs_inner(only1, only2, 0.0) == cplx(0.0, 0.0));
    }
    SUBCASE("shared degree on different grids is an error") {
        SpectralCoefficients C;
        std::vector<Mat> nodes{Mat::Ones(1, 1)};
        Vec w(1);
        w << 1.0;
        C.degrees[1] = make_block(make_grid(1, 1, nodes, w), VecC::Ones(1));
        CHECK_THROWS_AS(hs_inner(A, C, 0.0), GridMismatch);
    }
}

TEST_CASE("integration by parts holds in spectral form") {
    testin::Rng rng(3007);
    for (int rep = 0; rep < 10; ++rep) {
        int d = rng.uint(1, 2);
        auto A = random_coeffs(rng, {1, 2, 3}, d, 4);
        SpectralCoefficients B;
        for (const auto& [k, block] : A.degrees) {
            VecC vals(block.values.size());
            for (int q = 0; q < vals.size(); ++q)
                vals[q] = cplx(rng.uni(-1.0, 1.0), rng.uni(-1.0, 1.0));
            B.degrees[k] = make_block(block.grid, vals);
        }
        auto [lhs, rhs] = ibp_check(A, B);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
        // sign sanity on the diagonal: -<lap F; F> = |mean grad F|^2 >= 0
        auto [l2, r2] = ibp_check(A, A);
        CHECK((-l2).real() >= -1e-12);
        CHECK(std::abs(l2.imag()) <= 1e-12 * (1.0 + std::abs(l2)));
    }
}

TEST_CASE("decay_check verifies declared bounds per degree") {
    // Single degree k = 2, one node; all integrals are explicit products.
    std::vector<Mat> nodes{Mat(2, 1)};
    nodes[0] << 0.6, -0.8;
    Vec w(1);
    w << 1.0;
    const double absa = 0.4;
    VecC vals(1);
    vals[0] = cplx(0.0, -absa);

    SpectralCoefficients A;
    A.degrees[2] = make_block(make_grid(2, 1, nodes, w), vals);

    SUBCASE("no declaration is an error") {
        CHECK_THROWS_AS(decay_check(A, DecayCondition::Uniform), ConfigError);
    }

    // int |a| = 0.4; uniform bound C 2!/2^delta.
    SUBCASE("uniform: pass and fail straddle the measured integral") {
        A.decay = DecayDeclaration{0.3, 1.0};  // bound 0.3 * 2 / 2 = 0.3 < 0.4
        auto bad = decay_check(A, DecayCondition::Uniform);
        CHECK_FALSE(bad.pass);
        REQUIRE(bad.rows.size() == 1);
        CHECK(bad.rows[0].measured_a == doctest::Approx(absa).epsilon(1e-12));
        CHECK(bad.rows[0].bound_a == doctest::Approx(0.3).epsilon(1e-12));

        A.decay = DecayDeclaration{0.5, 1.0};  // bound 0.5 > 0.4
        CHECK(decay_check(A, DecayCondition::Uniform).pass);
    }

    SUBCASE("grad1 uses symmetrized slot moments") {
        // mean |xi_j| = (0.6 + 0.8)/2 = 0.7, mean |xi_j|^2 = (0.36+0.64)/2 = 0.5
        A.decay = DecayDeclaration{1.0, 1.0};  // bounds: 1 * 2!/2^2 = 0.5 for both
        auto rep = decay_check(A, DecayCondition::Grad1);
        REQUIRE(rep.rows.size() == 1);
        CHECK(rep.rows[0].measured_a == doctest::Approx(absa * 0.7).epsilon(1e-12));
        CHECK(rep.rows[0].measured_b == doctest::Approx(absa * 0.5).epsilon(1e-12));
        CHECK(rep.pass);
    }

    SUBCASE("cross moment for two slots is the product of distinct slots") {
        // symmetrized |xi_1||xi_2| = 0.6 * 0.8 = 0.48, measured 0.4 * 0.48 = 0.192
        A.decay = DecayDeclaration{1.0, 1.0};  // bound 2!/2^3 = 0.25
        auto rep = decay_check(A, DecayCondition::Cross);
        REQUIRE(rep.rows.size() == 1);
        CHECK(rep.rows[0].measured_a == doctest::Approx(absa * 0.48).epsilon(1e-12));
        CHECK(rep.pass);
        A.decay = DecayDeclaration{0.5, 1.0};  // bound 0.125 < 0.192
        CHECK_FALSE(decay_check(A, DecayCondition::Cross).pass);
    }

    SUBCASE("third: the mixed square-cross integral can be the binding one") {
        // mean |xi_j|^3 = (0.216 + 0.512)/2 = 0.364     (first integral)
        // sym |xi_1|^2 |xi_2| = (0.36*0.8 + 0.64*0.6)/2 = 0.336  (second)
        A.decay = DecayDeclaration{1.2, 1.0};  // bounds 0.6 and 0.15
        auto ok = decay_check(A, DecayCondition::Third);
        REQUIRE(ok.rows.size() == 1);
        CHECK(ok.rows[0].measured_a == doctest::Approx(absa * 0.364).epsilon(1e-12));
        CHECK(ok.rows[0].measured_b == doctest::Approx(absa * 0.336).epsilon(1e-12));
        CHECK(ok.pass);
        A.decay = DecayDeclaration{1.0, 1.0};  // second bound 0.125 < 0.1344
        auto bad = decay_check(A, DecayCondition::Third);
        CHECK(bad.rows[0].measured_a <= bad.rows[0].bound_a);  // first still fine
        CHECK_FALSE(bad.pass);
    }

    SUBCASE("strong3 tightens the uniform bound") {
        A.decay = DecayDeclaration{3.0, 0.5};  // bound 3 * 2 / 2^3.5 = 0.53 > 0.4
        CHECK(decay_check(A, DecayCondition::Strong3).pass);
        A.decay = DecayDeclaration{1.0, 1.0};  // bound 2/16 = 0.125 < 0.4
        CHECK_FALSE(decay_check(A, DecayCondition::Strong3).pass);
    }
}

}  // TEST_SUITE("spectral")
