// Microbenchmarks for the hot paths: simulated corpus generation,
// sender-pairing attribution, keyword-set construction, and the
// recognition scan over attributed mail.

#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "honeygrid/attribution.hpp"
#include "honeygrid/layout.hpp"
#include "honeygrid/recognize.hpp"
#include "honeygrid/simulation.hpp"

namespace {

using namespace honeygrid;

std::vector<App> bench_apps(std::size_t count) {
    std::vector<App> apps(count);
    for (std::size_t k = 0; k < count; ++k) {
        apps[k].id = "app-" + std::to_string(k);
        apps[k].name = "vendor " + std::to_string(k);
        apps[k].host_domain = "vendor-" + std::to_string(k) + ".example";
    }
    return apps;
}

std::vector<Honeytoken> bench_tokens(std::size_t count) {
    std::vector<Honeytoken> pool(count);
    for (std::size_t i = 0; i < count; ++i) {
        pool[i] = {"person-" + std::to_string(i) + "@traps.example", "", 0, i};
    }
    return pool;
}

// 1,024 apps on a 32x32 grid, a tenth of them leaking.
std::vector<BehaviorSpec> bench_specs(const std::vector<App>& apps) {
    std::vector<BehaviorSpec> specs(apps.size());
    for (std::size_t k = 0; k < apps.size(); ++k) {
        specs[k].app_id = apps[k].id;
        specs[k].sender_address = "service@" + apps[k].host_domain;
        specs[k].epsilon = 0.05;
        if (k % 10 == 0) {
            specs[k].leak = LeakSpec{"intruder@rogue" + std::to_string(k) + ".xyz", 2,
                                     ContentClass::Unrelated};
        }
    }
    return specs;
}

void BM_SimulateCampaign(benchmark::State& state) {
    std::vector<App> apps = bench_apps(1024);
    FrameworkLayout grid = build_tensor_layout(apps, bench_tokens(64), 2, {32, 32});
    std::vector<BehaviorSpec> specs = bench_specs(apps);

    std::size_t emitted = 0;
    for (auto _ : state) {
        SimulationResult sim = simulate(grid, specs, state.range(0), 2026);
        emitted += sim.corpus.size();
        benchmark::DoNotOptimize(sim);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(emitted));
}
BENCHMARK(BM_SimulateCampaign)->Arg(1)->Arg(4);

void BM_AttributeMatrix(benchmark::State& state) {
    std::vector<App> apps = bench_apps(1024);
    FrameworkLayout grid = build_tensor_layout(apps, bench_tokens(64), 2, {32, 32});
    SimulationResult sim = simulate(grid, bench_specs(apps), state.range(0), 2026);

    std::size_t resolved = 0;
    for (auto _ : state) {
        std::vector<AttributionOutcome> outcomes = attribute(grid, sim.corpus);
        resolved += outcomes.size();
        benchmark::DoNotOptimize(outcomes);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(resolved));
}
BENCHMARK(BM_AttributeMatrix)->Arg(1)->Arg(4);

void BM_GenerateKeywordSets(benchmark::State& state) {
    std::vector<App> apps = bench_apps(state.range(0));
    for (auto _ : state) {
        std::vector<KeywordSet> sets = generate_keyword_sets(apps);
        benchmark::DoNotOptimize(sets);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateKeywordSets)->Arg(64)->Arg(1024);

void BM_ClassifyAttributed(benchmark::State& state) {
    std::vector<App> apps = bench_apps(1024);
    FrameworkLayout grid = build_tensor_layout(apps, bench_tokens(64), 2, {32, 32});
    SimulationResult sim = simulate(grid, bench_specs(apps), 4, 2026);
    std::vector<AttributionOutcome> outcomes = attribute(grid, sim.corpus);

    std::size_t labeled = 0;
    for (auto _ : state) {
        auto labels = classify_attributed(outcomes, sim.corpus, apps);
        labeled += labels.size();
        benchmark::DoNotOptimize(labels);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(labeled));
}
BENCHMARK(BM_ClassifyAttributed);

} // namespace

BENCHMARK_MAIN();
