#include <benchmark/benchmark.h>

#include "weave/batch.hpp"

namespace {

std::vector<weave::CraftWorld> worlds(int n) {
    std::vector<weave::CraftWorld> out;
    for (int i = 0; i < n; ++i) out.push_back(weave::random_craft_world(1000 + i));
    return out;
}

// Each task: main thread spawns `fan` children, each of which acts once and prints.
std::vector<weave::BatchTask> tasks(int n, int fan) {
    auto playbook = std::make_shared<weave::Playbook>();
    playbook->on_pattern("\nSub [0-9]+\\.$", "> get 1 oak log");
    playbook->on_pattern("<=$", "print('got it')\n#END#", weave::StopReason::EndOfOutput);
    for (int k = 0; k < fan; ++k) {
        const std::string line = "Sub " + std::to_string(k) + ".";
        if (k == 0) {
            playbook->on_suffix("\nBuild.", "\n" + line);
        } else {
            playbook->on_suffix("Sub " + std::to_string(k - 1) + ". =>got it<=", "\n" + line);
        }
    }
    playbook->on_suffix("Sub " + std::to_string(fan - 1) + ". =>got it<=", "\ndone\n#END#", weave::StopReason::EndOfOutput);
    std::shared_ptr<const weave::Playbook> pb = playbook;
    weave::CraftWorld world({}, {"oak log"}, "oak log");

    std::vector<weave::BatchTask> out;
    for (int i = 0; i < n; ++i) {
        weave::BatchTask t;
        t.seed = "Build.";
        t.make_generator = [pb] { return std::make_unique<weave::ScriptedGenerator>(pb); };
        t.make_environment = [world] { return world.clone(); };
        out.push_back(std::move(t));
    }
    return out;
}

void BM_OracleSweepSerial(benchmark::State& state) {
    const auto w = worlds(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(weave::oracle_sweep_serial(w));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_OracleSweepParallel(benchmark::State& state) {
    const auto w = worlds(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(weave::oracle_sweep_parallel(w));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BatchSerial(benchmark::State& state) {
    const auto t = tasks(static_cast<int>(state.range(0)), 8);
    for (auto _ : state) benchmark::DoNotOptimize(weave::run_batch_serial(t));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BatchParallel(benchmark::State& state) {
    const auto t = tasks(static_cast<int>(state.range(0)), 8);
    for (auto _ : state) benchmark::DoNotOptimize(weave::run_batch_parallel(t));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_OracleSweepSerial)->Arg(100)->Arg(400);
BENCHMARK(BM_OracleSweepParallel)->Arg(100)->Arg(400);
BENCHMARK(BM_BatchSerial)->Arg(64)->Arg(256);
BENCHMARK(BM_BatchParallel)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
