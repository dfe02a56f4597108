/*******************************************************************************
 * @file:   batchcut_bench.cc
 * @brief:  Microbenchmarks for graph construction, embedding and assignment.
 ******************************************************************************/
#include <random>

#include <benchmark/benchmark.h>

#include "batchcut/capkmeans.h"
#include "batchcut/dataset.h"
#include "batchcut/partition.h"
#include "batchcut/simgraph.h"
#include "batchcut/spectral.h"

namespace {

using namespace batchcut;

Dataset planted(const std::size_t n) {
    return generate_planted({n, static_cast<std::uint32_t>(n / 32), 20, 2, 0.05, 1}).first;
}

void BM_BuildGraph(benchmark::State& state) {
    const Dataset dataset = planted(static_cast<std::size_t>(state.range(0)));
    for (auto _: state) {
        benchmark::DoNotOptimize(build_graph(dataset));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildGraph)->Arg(1024)->Arg(4096)->Arg(16384)->Unit(benchmark::kMillisecond);

void BM_Embed(benchmark::State& state) {
    const auto graph = build_graph(planted(static_cast<std::size_t>(state.range(0))));
    for (auto _: state) {
        benchmark::DoNotOptimize(embed(graph, {.k_prime = 8}));
    }
}
BENCHMARK(BM_Embed)->Arg(512)->Arg(2048)->Arg(8192)->Unit(benchmark::kMillisecond);

void BM_AssignStep(benchmark::State& state) {
    const auto      n = static_cast<Eigen::Index>(state.range(0));
    const auto      k = static_cast<BatchID>(state.range(1));
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd points(n, 8);
    Eigen::MatrixXd centers(k, 8);
    for (Eigen::Index i = 0; i < points.size(); ++i) {
        points.data()[i] = normal(rng);
    }
    for (Eigen::Index i = 0; i < centers.size(); ++i) {
        centers.data()[i] = normal(rng);
    }
    const auto capacities = make_capacities(static_cast<std::size_t>(n), k);
    for (auto _: state) {
        benchmark::DoNotOptimize(assign_step(points, centers, capacities));
    }
}
BENCHMARK(BM_AssignStep)->Args({2000, 63})->Args({20000, 625})->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
