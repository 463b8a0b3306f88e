#include <benchmark/benchmark.h>

#include "stablenoise/fractional.hpp"
#include "stablenoise/grid_noise.hpp"
#include "stablenoise/parser.hpp"
#include "stablenoise/shot_noise.hpp"
#include "stablenoise/stable.hpp"

using namespace stablenoise;

static void sample_stable_draws(benchmark::State& st) {
    const stable_params p(static_cast<double>(st.range(0)) / 10.0, 1.0, 0.3);
    std::uint64_t seed = 0;
    for (auto _ : st) benchmark::DoNotOptimize(sample_stable(p, 100000, ++seed));
    st.SetItemsProcessed(st.iterations() * 100000);
}
BENCHMARK(sample_stable_draws)->Arg(7)->Arg(15)->Arg(20);

static void pareto_innovations(benchmark::State& st) {
    const auto G = innovation_sampler::pareto({1.5, 0.3, 0.7}, 1);
    std::int64_t k = 0;
    for (auto _ : st) benchmark::DoNotOptimize(G.at1(++k, 0));
    st.SetItemsProcessed(st.iterations());
}
BENCHMARK(pareto_innovations);

static void grid_prepare(benchmark::State& st) {
    const grid_noise n(grid_spec(1, 1.0 / static_cast<double>(st.range(0))),
                       innovation_sampler::exact(stable_params(1.5, 1.0, 0.0), 1));
    const kernel f = parse_kernel("exp(-x*x)", 1);
    for (auto _ : st) benchmark::DoNotOptimize(n.prepare(f));
}
BENCHMARK(grid_prepare)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

static void grid_eval(benchmark::State& st) {
    const grid_noise n(grid_spec(1, 1.0 / static_cast<double>(st.range(0))),
                       innovation_sampler::pareto({1.5, 0.5, 0.5}, 1));
    const noise_functional nf = n.prepare(kernel::indicator(box::cube(1, 0.0, 1.0)));
    std::uint64_t r = 0;
    for (auto _ : st) benchmark::DoNotOptimize(nf.eval(n.innovations(), ++r));
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(nf.weights.size()));
}
BENCHMARK(grid_eval)->Arg(10)->Arg(100)->Arg(1000);

static void grid_eval_2d(benchmark::State& st) {
    const grid_noise n(grid_spec(2, 0.05), innovation_sampler::exact(stable_params(1.5, 1.0, 0.0), 1));
    const noise_functional nf = n.prepare(kernel::indicator(box::cube(2, 0.0, 1.0)));
    std::uint64_t r = 0;
    for (auto _ : st) benchmark::DoNotOptimize(nf.eval(n.innovations(), ++r));
}
BENCHMARK(grid_eval_2d);

static void shot_noise_replica(benchmark::State& st) {
    const space_ptr E = make_box_space(box::cube(1, 0.0, 1.0));
    const auto G = innovation_sampler::pareto({1.5, 0.5, 0.5}, 2);
    const space_fn f = [](std::span<const double> x) { return 1.0 - x[0]; };
    const double lambda = static_cast<double>(st.range(0));
    std::uint64_t r = 0;
    for (auto _ : st) benchmark::DoNotOptimize(shot_noise_eval(sample_poisson_cloud(*E, lambda, G, ++r), f));
}
BENCHMARK(shot_noise_replica)->Arg(100)->Arg(10000);

static void fractional_convolution_point(benchmark::State& st) {
    const kernel f = kernel::indicator(box::cube(1, 0.0, 1.0));
    const homogeneous_profile p{0.8, 1.0, 0.6};
    double x = -3.0;
    for (auto _ : st) {
        benchmark::DoNotOptimize(fractional_convolution(f, p, x));
        x = x > 4.0 ? -3.0 : x + 0.37;
    }
}
BENCHMARK(fractional_convolution_point);

static void fractional_scale(benchmark::State& st) {
    const kernel f = kernel::indicator(box::cube(1, 0.0, 1.0));
    for (auto _ : st) benchmark::DoNotOptimize(fractional_eval_params(f, {0.8, 1.0, 0.6}, stable_params(1.5, 1.0, 0.0)));
}
BENCHMARK(fractional_scale)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
