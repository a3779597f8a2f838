#include <benchmark/benchmark.h>

#include "chemoeda/hboa.hpp"
#include "chemoeda/linkage.hpp"
#include "chemoeda/model.hpp"
#include "chemoeda/optimizers.hpp"

using namespace chemo;

namespace {

Chromosome random_chromosome(const ProblemInstance& inst, std::uint64_t seed) {
    Rng rng(seed);
    return Chromosome::random(inst.chromosome_length(), rng);
}

void BM_decode(benchmark::State& state) {
    ProblemInstance inst = ProblemInstance::defaults();
    Chromosome x = random_chromosome(inst, 1);
    for (auto _ : state) benchmark::DoNotOptimize(decode(x, inst));
}
BENCHMARK(BM_decode);

void BM_trajectory(benchmark::State& state) {
    ProblemInstance inst = ProblemInstance::defaults();
    DoseSchedule c = decode(random_chromosome(inst, 2), inst);
    for (auto _ : state) benchmark::DoNotOptimize(tumour_trajectory(c, inst));
}
BENCHMARK(BM_trajectory);

void BM_fitness(benchmark::State& state) {
    ProblemInstance inst = ProblemInstance::defaults();
    Evaluator eval(inst);
    Chromosome x = random_chromosome(inst, 3);
    for (auto _ : state) benchmark::DoNotOptimize(eval.report(x));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_fitness);

void BM_ode_oracle(benchmark::State& state) {
    ProblemInstance inst = ProblemInstance::defaults();
    DoseSchedule c = decode(random_chromosome(inst, 4), inst);
    for (auto _ : state) benchmark::DoNotOptimize(ode_trajectory(c, inst, 1e-3));
}
BENCHMARK(BM_ode_oracle);

void BM_model_build(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int length = static_cast<int>(state.range(1));
    Rng rng(5);
    std::vector<Chromosome> data;
    data.reserve(n);
    for (int i = 0; i < n; ++i) data.push_back(Chromosome::random(length, rng));
    // correlate half the variables so the builder has splits to accept
    for (auto& x : data)
        for (int v = 1; v < length; v += 2)
            if (rng.uniform() < 0.9) x.bits[v] = x.bits[v - 1];
    std::vector<const Chromosome*> sel;
    for (const auto& x : data) sel.push_back(&x);
    for (auto _ : state) benchmark::DoNotOptimize(hboa_build_model(sel));
}
BENCHMARK(BM_model_build)->Args({200, 50})->Args({320, 400})->Unit(benchmark::kMillisecond);

void BM_umda_generation(benchmark::State& state) {
    ProblemInstance inst = ProblemInstance::defaults();
    Evaluator eval(inst);
    Objective obj = chemo_objective(eval);
    OptimizerConfig cfg;
    cfg.population_size = 112;
    CountingOracle oracle(obj);
    Rng rng(6);
    Population pop;
    for (int i = 0; i < cfg.population_size; ++i) {
        ScoredMember m{Chromosome::random(obj.length, rng), 0.0};
        m.score = oracle.evaluate(m.genes);
        pop.members.push_back(std::move(m));
    }
    for (auto _ : state) {
        Population next = umda_step(pop, cfg, oracle, rng);
        benchmark::DoNotOptimize(next);
    }
    state.SetItemsProcessed(state.iterations() * cfg.population_size);
}
BENCHMARK(BM_umda_generation)->Unit(benchmark::kMicrosecond);

void BM_probe_pair(benchmark::State& state) {
    ProblemInstance inst = ProblemInstance::reduced4x4();
    Evaluator eval(inst);
    FitnessFn f = [&](const Chromosome& x) { return eval.report(x).fitness; };
    Chromosome x = random_chromosome(inst, 7);
    for (auto _ : state) benchmark::DoNotOptimize(probe_pair(f, x, 3, 17, 1e-9));
}
BENCHMARK(BM_probe_pair);

}  // namespace

BENCHMARK_MAIN();
