#include "doctest.h"

#include <cmath>
#include <complex>

#include <wassheat/measure.hpp>
#include <wassheat/types.hpp>

#include "../support/checks.hpp"
#include "../support/oracles.hpp"
#include "../support/random_inputs.hpp"

using namespace wassheat;

TEST_SUITE("types") {

TEST_CASE("factorial and binomial, small values") {
    CHECK(factorial(0) == 1.0);
    CHECK(factorial(1) == 1.0);
    CHECK(factorial(5) == 120.0);
    CHECK(factorial(10) == 3628800.0);
    CHECK(binomial(4, 2) == 6.0);
    CHECK(binomial(5, 0) == 1.0);
    CHECK(binomial(6, 6) == 1.0);
    CHECK(binomial(10, 3) == 120.0);
}

TEST_CASE("kahan summation survives catastrophic cancellation") {
    Kahan acc;
    acc.add(1e16);
    acc.add(1.0);
    acc.add(-1e16);
    CHECK(acc.value() == 1.0);

    KahanC cacc;
    cacc.add(cplx(1e16, -1e16));
    cacc.add(cplx(1.0, 2.0));
    cacc.add(cplx(-1e16, 1e16));
    CHECK(cacc.value() == cplx(1.0, 2.0));
}

TEST_CASE("error types are catchable through the common base") {
    bool caught = false;
    try {
        throw TensorGuardExceeded("too many tuples");
    } catch (const Error& e) {
        caught = true;
        CHECK(std::string(e.what()).find("too many tuples") != std::string::npos);
    }
    CHECK(caught);
}

}  // TEST_SUITE("types")

TEST_SUITE("rng") {

TEST_CASE("streams are deterministic in (seed, index)") {
    RngStream a(42, 7), b(42, 7);
    for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());

    RngStream c(42, 8);
    int differs = 0;
    RngStream a2(42, 7);
    for (int i = 0; i < 64; ++i)
        if (a2.next_u64() != c.next_u64()) ++differs;
    CHECK(differs > 32);  // distinct stream indices decorrelate
}

TEST_CASE("uniform moments") {
    RngStream rng(2024, 0);
    const int n = 100000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        s += u;
        s2 += u * u;
    }
    double mean = s / n;
    double var = s2 / n - mean * mean;
    CHECK(std::abs(mean - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::abs(var - 1.0 / 12.0) < 0.002);
}

TEST_CASE("normal moments and spare caching") {
    RngStream rng(7, 3);
    const int n = 100000;
    double s = 0.0, s2 = 0.0, s4 = 0.0;
    for (int i = 0; i < n; ++i) {
        double g = rng.normal();
        s += g;
        s2 += g * g;
        s4 += g * g * g * g;
    }
    CHECK(std::abs(s / n) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(s2 / n - 1.0) < 0.02);
    CHECK(std::abs(s4 / n - 3.0) < 0.15);  // gaussian kurtosis
}

TEST_CASE("uniform_in_ball stays inside and fills the volume") {
    RngStream rng(11, 0);
    const int d = 2, n = 40000;
    const double R = 1.5;
    int inside_half = 0;
    Vec acc = Vec::Zero(d);
    for (int i = 0; i < n; ++i) {
        Vec x = rng.uniform_in_ball(d, R);
        CHECK(x.norm() <= R + 1e-12);
        if (x.norm() <= R / 2) ++inside_half;
        acc += x;
    }
    // P(|X| <= R/2) = (1/2)^d for the uniform ball law.
    double p = std::pow(0.5, d);
    double se = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(static_cast<double>(inside_half) / n - p) < 4.0 * se);
    CHECK((acc / n).norm() < 4.0 * R / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("pick_weighted frequencies follow the weights") {
    RngStream rng(5, 1);
    Vec w(3);
    w << 0.2, 0.5, 0.3;
    const int n = 60000;
    int counts[3] = {0, 0, 0};
    for (int i = 0; i < n; ++i) ++counts[rng.pick_weighted(w)];
    for (int j = 0; j < 3; ++j) {
        double se = std::sqrt(w[j] * (1 - w[j]) / n);
        CHECK(std::abs(static_cast<double>(counts[j]) / n - w[j]) < 4.0 * se);
    }
}

}  // TEST_SUITE("rng")

TEST_SUITE("measure") {

TEST_CASE("make_discrete validates and renormalizes") {
    Mat pts(2, 1);
    pts << 0.0, 1.0;

    SUBCASE("uniform default") {
        auto m = make_discrete(pts);
        CHECK(m.size() == 2);
        CHECK(m.weights[0] == doctest::Approx(0.5));
        CHECK(m.weights.sum() == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("weights rescaled to total mass one") {
        Vec w(2);
        w << 2.0, 2.0;
        auto m = make_discrete(pts, w);
        CHECK(m.weights[0] == doctest::Approx(0.5));
        CHECK(m.weights[1] == doctest::Approx(0.5));
    }
    SUBCASE("empty support rejected") {
        Mat none(0, 1);
        CHECK_THROWS_AS(make_discrete(none), EmptySupport);
    }
    SUBCASE("negative weight rejected") {
        Vec w(2);
        w << 0.5, -0.1;
        CHECK_THROWS_AS(make_discrete(pts, w), NegativeWeight);
    }
    SUBCASE("degenerate total mass rejected") {
        Vec w(2);
        w << 1e-12, 1e-12;
        CHECK_THROWS_AS(make_discrete(pts, w), DegenerateWeightSum);
    }
    SUBCASE("weight count must match atom count") {
        Vec w(3);
        w << 0.3, 0.3, 0.4;
        CHECK_THROWS_AS(make_discrete(pts, w), DimensionMismatch);
    }
    SUBCASE("non-finite input rejected") {
        Mat bad(2, 1);
        bad << 0.0, std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(make_discrete(bad), NonFiniteInput);
        Vec w(2);
        w << 0.5, std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(make_discrete(pts, w), NonFiniteInput);
    }
}

TEST_CASE("char_fn: frozen value on the uniform two-point measure") {
    // m = (delta_0 + delta_1)/2, xi = 1/4:
    //   char = (1 + exp(-i pi/2)) / 2 = (1 - i)/2.
    Mat pts(2, 1);
    pts << 0.0, 1.0;
    auto m = make_discrete(pts);
    Vec xi(1);
    xi << 0.25;
    CHECK(checks::close(char_fn(m, xi), cplx(0.5, -0.5), 1e-15));
    CHECK(checks::close(char_fn(m, Vec::Zero(1)), cplx(1.0, 0.0), 1e-15));
}

TEST_CASE("char_fn matches the independent oracle on random measures") {
    testin::Rng rng(314159);
    for (int rep = 0; rep < 20; ++rep) {
        int d = rng.uint(1, 3);
        auto m = testin::measure(rng, rng.uint(1, 6), d, 2.0);
        Vec xi = rng.vec(d, -1.5, 1.5);
        CHECK(checks::close(char_fn(m, xi), oracle::char_fn(m.atoms, m.weights, xi), 1e-13));
    }
}

TEST_CASE("smoothing multiplies the characteristic function by a gaussian") {
    testin::Rng rng(99);
    auto m = testin::measure(rng, 4, 2, 1.0);
    double v = 0.37;
    auto sm = smooth(m, v);
    for (int rep = 0; rep < 10; ++rep) {
        Vec xi = rng.vec(2, -2.0, 2.0);
        cplx expected = char_fn(m, xi) * std::exp(-2.0 * kPi * kPi * v * xi.squaredNorm());
        CHECK(checks::close(char_fn(sm, xi), expected, 1e-14));
    }
    // variance adds under repeated smoothing
    auto sm2 = smooth(sm, 0.13);
    CHECK(sm2.variance == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(smooth(m, -0.1), NegativeVariance);
}

TEST_CASE("translate_pushforward shifts atoms and twists the phase") {
    testin::Rng rng(7);
    auto m = testin::measure(rng, 5, 2, 1.0);
    Vec c(2);
    c << 0.4, -1.1;
    auto mt = translate_pushforward(m, c);
    for (int i = 0; i < m.size(); ++i)
        CHECK((mt.atoms.row(i) - (m.atoms.row(i) + c.transpose())).norm() == 0.0);
    for (int rep = 0; rep < 8; ++rep) {
        Vec xi = rng.vec(2, -1.5, 1.5);
        cplx phase = std::exp(cplx(0.0, -kTwoPi * xi.dot(c)));
        CHECK(checks::close(char_fn(mt, xi), phase * char_fn(m, xi), 1e-14));
    }
}

TEST_CASE("displace moves each atom along its own direction row") {
    Mat pts(2, 2);
    pts << 0.0, 0.0, 1.0, 1.0;
    auto m = make_discrete(pts);
    Mat v(2, 2);
    v << 1.0, 0.0, 0.0, -2.0;
    auto md = displace(m, v, 0.25);
    CHECK(md.atoms(0, 0) == doctest::Approx(0.25));
    CHECK(md.atoms(0, 1) == doctest::Approx(0.0));
    CHECK(md.atoms(1, 1) == doctest::Approx(0.5));
    CHECK(md.weights == m.weights);
}

TEST_CASE("second_moment, mean and diameter") {
    Mat pts(2, 1);
    pts << 0.0, 1.0;
    auto m = make_discrete(pts);
    CHECK(second_moment(m) == doctest::Approx(0.5));
    CHECK(mean(m)[0] == doctest::Approx(0.5));
    CHECK(diameter(m) == doctest::Approx(1.0));
    // smoothing adds dim * variance to the second moment
    CHECK(second_moment(smooth(m, 0.3)) == doctest::Approx(0.8));

    Mat one(1, 3);
    one << 1.0, 2.0, 2.0;
    CHECK(diameter(make_discrete(one)) == 0.0);
}

TEST_CASE("sampling is deterministic and hits the right frequencies") {
    Mat pts(2, 1);
    pts << -1.0, 3.0;
    Vec w(2);
    w << 0.9, 0.1;
    auto m = make_discrete(pts, w);

    RngStream r1(123, 0), r2(123, 0);
    Mat s1 = sample(m, 500, r1);
    Mat s2 = sample(m, 500, r2);
    CHECK((s1 - s2).norm() == 0.0);

    RngStream r3(2718, 4);
    const int n = 4000;
    Mat s = sample(m, n, r3);
    int hits = 0;
    for (int i = 0; i < n; ++i)
        if (s(i, 0) == -1.0) ++hits;
    double se = std::sqrt(0.9 * 0.1 / n);
    CHECK(std::abs(static_cast<double>(hits) / n - 0.9) < 4.0 * se);
}

TEST_CASE("sampling a smoothed measure adds the gaussian variance") {
    Mat pts(1, 1);
    pts << 2.0;
    auto sm = smooth(make_discrete(pts), 0.25);
    RngStream rng(55, 0);
    const int n = 60000;
    Mat s = sample(sm, n, rng);
    double mean_hat = s.col(0).mean();
    double var_hat = (s.col(0).array() - mean_hat).square().sum() / (n - 1);
    CHECK(std::abs(mean_hat - 2.0) < 4.0 * std::sqrt(0.25 / n));
    CHECK(std::abs(var_hat - 0.25) < 0.01);
}

}  // TEST_SUITE("measure")
