// ---------------------------------------------------------------------------
// Micro benchmarks for the hot paths: tensor evaluation of polynomial
// functionals, the Laplacian assembly, exact couplings, spectral
// superpositions and the signed product-measure integrator.
// ---------------------------------------------------------------------------
#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <vector>

#include <wassheat/calculus.hpp>
#include <wassheat/coupling.hpp>
#include <wassheat/kernels.hpp>
#include <wassheat/measure.hpp>
#include <wassheat/product_measure.hpp>
#include <wassheat/spectral.hpp>

namespace ws = wassheat;

namespace {

ws::Mat random_mat(std::mt19937_64& g, int r, int c, double box) {
    std::uniform_real_distribution<double> u(-box, box);
    ws::Mat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = u(g);
    return m;
}

ws::DiscreteMeasure random_measure(std::mt19937_64& g, int n, int d) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    ws::Vec w(n);
    for (int i = 0; i < n; ++i) w[i] = u(g);
    return ws::make_discrete(random_mat(g, n, d, 1.0), w);
}

}  // namespace

// F evaluation is an n^k tuple sum; atoms on the x axis, arity as the suffix.
static void BM_EvalF(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int k = static_cast<int>(state.range(1));
    std::mt19937_64 g(17);
    const ws::ExponentialKernel phi(random_mat(g, k, 2, 1.5));
    const ws::DiscreteMeasure m = random_measure(g, n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(ws::eval_F(phi, m));
    state.SetComplexityN(n);
}
BENCHMARK(BM_EvalF)->Args({8, 1})->Args({8, 2})->Args({8, 3})->Args({32, 2})->Args({128, 2});

static void BM_LaplacianW(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int k = static_cast<int>(state.range(1));
    std::mt19937_64 g(18);
    const ws::ExponentialKernel phi(random_mat(g, k, 2, 1.5));
    const ws::DiscreteMeasure m = random_measure(g, n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(ws::laplacian_w(phi, m, 0.3));
}
BENCHMARK(BM_LaplacianW)->Args({6, 1})->Args({6, 2})->Args({6, 3})->Args({24, 2});

static void BM_OptimalCoupling(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 g(19);
    const ws::DiscreteMeasure m = random_measure(g, n, 2);
    const ws::DiscreteMeasure nu = random_measure(g, n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(ws::optimal_coupling(m, nu).cost);
    state.SetComplexityN(n);
}
BENCHMARK(BM_OptimalCoupling)->Arg(8)->Arg(16)->Arg(32)->Arg(64)->Complexity();

static void BM_EvalSuperposition(benchmark::State& state) {
    const int nodes = static_cast<int>(state.range(0));
    std::mt19937_64 g(20);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ws::SpectralCoefficients A;
    for (int k = 1; k <= 2; ++k) {
        std::vector<ws::Mat> xi;
        ws::Vec qw(nodes);
        ws::VecC vals(nodes);
        for (int i = 0; i < nodes; ++i) {
            xi.push_back(random_mat(g, k, 2, 1.2));
            qw[i] = 0.5 + 0.5 * std::abs(u(g));
            vals[i] = ws::cplx(u(g), u(g));
        }
        A.degrees[k] = ws::make_block(ws::make_grid(k, 2, std::move(xi), qw), vals);
    }
    const ws::DiscreteMeasure m = random_measure(g, 6, 2);
    for (auto _ : state) benchmark::DoNotOptimize(ws::eval_superposition(A, m));
}
BENCHMARK(BM_EvalSuperposition)->Arg(8)->Arg(32)->Arg(128);

static void BM_IntegratePkR(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const ws::BumpProductKernel phi(k, 1, 1.0, 0.3);
    const ws::BallProductSpec spec{k, 1, 1.0};
    const ws::PairFunctional H = [&phi](const ws::DiscreteMeasure& m1,
                                        const ws::DiscreteMeasure& m2) {
        return ws::eval_F(phi, m1) * ws::eval_F(phi, m2);
    };
    uint64_t seed = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(ws::integrate_PkR(H, spec, 2000, seed++).value);
}
BENCHMARK(BM_IntegratePkR)->Arg(1)->Arg(2)->Arg(3);

BENCHMARK_MAIN();
