// Serial reference vs OpenMP kernels.
//
//   ./build/bench_kernels --benchmark_filter=Aggregate

#include <benchmark/benchmark.h>
#include <omp.h>

#include <filesystem>

#include "fedsust/fedsim.hpp"
#include "fedsust/federation_config.hpp"
#include "fedsust/kernels.hpp"

using namespace fedsust;

namespace {

std::vector<kernels::Vector> make_updates(std::int64_t count, std::int64_t dim) {
    std::vector<kernels::Vector> updates(count, kernels::Vector(dim));
    for (std::int64_t i = 0; i < count; ++i) {
        SplitMix64 rng(derive_key(1, {static_cast<std::uint64_t>(i)}));
        for (auto& x : updates[i]) x = 2.0 * rng.uniform() - 1.0;
    }
    return updates;
}

void BM_AggregateSerial(benchmark::State& state) {
    const auto updates = make_updates(state.range(0), kModelVectorCap);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::aggregate_model_serial(updates));
    state.SetItemsProcessed(state.iterations() * state.range(0) * kModelVectorCap);
}

void BM_AggregateOmp(benchmark::State& state) {
    const auto updates = make_updates(state.range(0), kModelVectorCap);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::aggregate_model(updates));
    state.SetItemsProcessed(state.iterations() * state.range(0) * kModelVectorCap);
    state.counters["threads"] = omp_get_max_threads();
}

void BM_LocalUpdateSerial(benchmark::State& state) {
    kernels::Vector global(kModelVectorCap, 0.25), out(kModelVectorCap);
    std::uint64_t key = 0;
    for (auto _ : state) {
        kernels::local_update_serial(global, ++key, out);
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_LocalUpdateOmp(benchmark::State& state) {
    kernels::Vector global(kModelVectorCap, 0.25), out(kModelVectorCap);
    std::uint64_t key = 0;
    for (auto _ : state) {
        kernels::local_update(global, ++key, out);
        benchmark::DoNotOptimize(out.data());
    }
}

FederationConfig bench_config(std::int64_t clients) {
    FederationConfig c;
    c.num_clients = clients;
    c.selection_rate = 0.1;
    c.sample_size = std::max<std::int64_t>(1, clients / 10);
    c.total_rounds = 20;
    c.local_rounds = {5};
    c.dataset_sizes = std::vector<double>{2000};
    c.model_size = 1e6;
    c.client_hardware.entries = {{1.0, "Intel Core i5-1335U"}};
    c.client_locations.entries = {{1.0, "DE"}};
    c.server_hardware = "AMD Ryzen 7 5800X";
    c.server_location = "LU";
    c.seed = 7;
    return c;
}

void run_simulation(benchmark::State& state, Execution execution) {
    const auto ref = load_reference_data(default_data_dir());
    const auto config = bench_config(state.range(0));
    SimulationOptions opts;
    opts.execution = execution;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_federation(config, ref, opts));
}

void BM_SimulateSerial(benchmark::State& state) { run_simulation(state, Execution::serial); }
void BM_SimulateOmp(benchmark::State& state) { run_simulation(state, Execution::parallel); }

}  // namespace

BENCHMARK(BM_AggregateSerial)->Arg(10)->Arg(100)->Arg(1000);
BENCHMARK(BM_AggregateOmp)->Arg(10)->Arg(100)->Arg(1000);
BENCHMARK(BM_LocalUpdateSerial);
BENCHMARK(BM_LocalUpdateOmp);
BENCHMARK(BM_SimulateSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateOmp)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
