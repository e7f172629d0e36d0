#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "gridbo/acquisition.hpp"
#include "gridbo/gp.hpp"
#include "gridbo/kernels.hpp"
#include "gridbo/rng.hpp"
#include "gridbo/solvers.hpp"

using namespace gridbo;

namespace {

Eigen::MatrixXd random_points(int n, int d, std::uint64_t seed) {
    RngStream rng(seed);
    Eigen::MatrixXd X(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) X(i, j) = rng.uniform();
    return X;
}

GpPosterior make_posterior(int n, int d) {
    const Eigen::MatrixXd X = random_points(n, d, 1);
    RngStream rng(2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = rng.normal();
    return GpPosterior(KernelSpec::matern(2.5, 0.2), 1e-6, X, y);
}

void BM_GramMatrix(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const KernelSpec kernel = KernelSpec::matern(2.5, 0.2);
    const Eigen::MatrixXd X = random_points(n, 6, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(gram_matrix(kernel, X));
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_GramMatrix)->Range(32, 512)->Complexity();

void BM_PosteriorUpdate(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GpPosterior gp = make_posterior(n, 6);
    RngStream rng(4);
    Eigen::VectorXd x(6);
    for (int j = 0; j < 6; ++j) x[j] = rng.uniform();
    for (auto _ : state) {
        benchmark::DoNotOptimize(gp.updated(x, 0.5));
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_PosteriorUpdate)->Range(32, 512)->Complexity();

void BM_PosteriorBatchQuery(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GpPosterior gp = make_posterior(n, 6);
    const Eigen::MatrixXd Q = random_points(1000, 6, 5);
    Eigen::VectorXd mean, var;
    for (auto _ : state) {
        gp.mean_var_batch(Q, mean, var);
        benchmark::DoNotOptimize(mean.sum() + var.sum());
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_PosteriorBatchQuery)->Range(32, 512)->Complexity();

void BM_UniformGridSolve(benchmark::State& state) {
    const int t = static_cast<int>(state.range(0));
    const GpPosterior gp = make_posterior(60, 6);
    const UcbSurface surface(gp, 1.5, 0.0);
    const BoxDomain box = BoxDomain::cube(6, 0.0, 1.0);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        RngStream rng(seed++);
        benchmark::DoNotOptimize(solve_uniform_grid(surface, box, t, 100, rng));
    }
    state.SetComplexityN(t);
}
BENCHMARK(BM_UniformGridSolve)->Range(1, 64)->Complexity();

void BM_TsGridDraw(benchmark::State& state) {
    const int grid_size = static_cast<int>(state.range(0));
    const GpPosterior gp = make_posterior(60, 6);
    const Eigen::MatrixXd grid = random_points(grid_size, 6, 6);
    RngStream rng(7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ts_build(gp, grid, 1.5, 0.0, 0.1, 1.0, rng));
    }
    state.SetComplexityN(grid_size);
}
BENCHMARK(BM_TsGridDraw)->Range(64, 1024)->Complexity();

}  // namespace

BENCHMARK_MAIN();
