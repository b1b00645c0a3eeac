#include <benchmark/benchmark.h>

#include "lpt/netlist.hpp"
#include "lpt/simcore.hpp"
#include "lpt/swarm.hpp"

namespace {

lpt::Circuit& s27() {
    static lpt::Circuit c = lpt::parse_bench_file(std::string(LPT_FIXTURES_DIR) + "/s27.bench");
    return c;
}

void BM_FaultSimSerial(benchmark::State& state) {
    const lpt::Circuit& c = s27();
    auto vectors = lpt::init_population(7, static_cast<int>(state.range(0)), 42);
    auto faults = lpt::enumerate_faults(c, true);
    for (auto _ : state) {
        auto rep = lpt::fault_simulate_serial(c, vectors, faults, lpt::SimMode::Scan);
        benchmark::DoNotOptimize(rep);
    }
}
BENCHMARK(BM_FaultSimSerial)->Arg(16)->Arg(64)->Arg(256);

void BM_FaultSimParallel(benchmark::State& state) {
    const lpt::Circuit& c = s27();
    auto vectors = lpt::init_population(7, static_cast<int>(state.range(0)), 42);
    auto faults = lpt::enumerate_faults(c, true);
    for (auto _ : state) {
        auto rep = lpt::fault_simulate_parallel(c, vectors, faults, lpt::SimMode::Scan);
        benchmark::DoNotOptimize(rep);
    }
}
BENCHMARK(BM_FaultSimParallel)->Arg(16)->Arg(64)->Arg(256);

void BM_Pipeline(benchmark::State& state) {
    const lpt::Circuit& c = s27();
    auto faults = lpt::enumerate_faults(c, true);
    lpt::SwarmConfig cfg;
    cfg.seed = 7;
    auto pop = lpt::init_population(7, cfg.population_size, cfg.seed);
    std::vector<double> caps(c.num_gates(), 1.0);
    for (auto _ : state) {
        auto mem = lpt::pbest_phase(c, pop, faults, cfg);
        auto frame = lpt::gbest_framing(c, mem, cfg, caps);
        benchmark::DoNotOptimize(frame);
    }
}
BENCHMARK(BM_Pipeline);

}  // namespace

BENCHMARK_MAIN();
