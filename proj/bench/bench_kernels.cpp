// Serial reference vs OpenMP paths. Set OMP_NUM_THREADS to compare team sizes.

#include "cklms/experiment.hpp"
#include "cklms/kernel.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace cklms;

namespace {

std::vector<ComplexVector> points(std::size_t n, std::size_t dim) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0.0, 0.5);
    std::vector<ComplexVector> out;
    for (std::size_t i = 0; i < n; ++i) {
        ComplexVector v(dim);
        for (auto& c : v) c = {g(rng), g(rng)};
        out.push_back(v);
    }
    return out;
}

void BM_GramSerial(benchmark::State& state) {
    const auto pts = points(static_cast<std::size_t>(state.range(0)), 6);
    for (auto _ : state) benchmark::DoNotOptimize(gram_serial(pts, KernelSpec::complex_gaussian(5.0)));
}

void BM_GramParallel(benchmark::State& state) {
    const auto pts = points(static_cast<std::size_t>(state.range(0)), 6);
    for (auto _ : state) benchmark::DoNotOptimize(gram(pts, KernelSpec::complex_gaussian(5.0)));
}

template <bool Parallel>
void BM_KernelRow(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto pts = points(n, 6);
    std::vector<cplx> flat;
    for (const auto& p : pts) flat.insert(flat.end(), p.begin(), p.end());
    GaussianKernel k(KernelSpec::complex_gaussian(5.0));
    std::vector<cplx> out(n);
    for (auto _ : state) {
        if constexpr (Parallel)
            kernel_row(k, pts[0], flat, 6, out);
        else
            kernel_row_serial(k, pts[0], flat, 6, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

ExperimentConfig small_experiment() {
    ExperimentConfig cfg;
    cfg.signal.n_samples = 1000;
    cfg.snr_db = 15.0;
    FilterConfig k;
    k.mu = 0.25;
    k.novelty = {0.1, 0.2};
    k.normalization = StepNormalization::self_kernel;
    FilterConfig n;
    n.algorithm = Algorithm::nclms;
    n.mu = 0.0625;
    cfg.algorithms = {{"cklms", k}, {"nclms", n}};
    cfg.mc_runs = 8;
    cfg.master_seed = 1;
    return cfg;
}

void BM_ExperimentSerial(benchmark::State& state) {
    const auto cfg = small_experiment();
    for (auto _ : state) benchmark::DoNotOptimize(run_experiment(cfg, Execution::serial));
}

void BM_ExperimentParallel(benchmark::State& state) {
    const auto cfg = small_experiment();
    for (auto _ : state) benchmark::DoNotOptimize(run_experiment(cfg, Execution::parallel));
}

} // namespace

BENCHMARK(BM_GramSerial)->Arg(50)->Arg(400);
BENCHMARK(BM_GramParallel)->Arg(50)->Arg(400);
BENCHMARK(BM_KernelRow<false>)->Arg(1000)->Arg(5000);
BENCHMARK(BM_KernelRow<true>)->Arg(1000)->Arg(5000);
BENCHMARK(BM_ExperimentSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExperimentParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
