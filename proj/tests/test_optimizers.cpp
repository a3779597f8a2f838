#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "chemoeda/errors.hpp"
#include "chemoeda/objective.hpp"
#include "chemoeda/optimizers.hpp"

using namespace chemo;

namespace {

Population seeded_population(const Objective& obj, int size, CountingOracle& oracle, Rng& rng) {
    Population pop;
    for (int i = 0; i < size; ++i) {
        ScoredMember m{Chromosome::random(obj.length, rng), 0.0};
        m.score = oracle.evaluate(m.genes);
        pop.members.push_back(std::move(m));
    }
    return pop;
}

bool is_member_of(const Chromosome& x, const Population& pop) {
    for (const auto& m : pop.members)
        if (m.genes == x) return true;
    return false;
}

}  // namespace

TEST_SUITE_BEGIN("optimizers");

TEST_CASE("config validation catches the documented mistakes") {
    OptimizerConfig cfg;
    cfg.population_size = 1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.population_size = 10;
    cfg.stop.max_evaluations = 5;  // smaller than the initial population
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.stop.max_evaluations = 100;
    cfg.ga.crossover_rate = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("ga with no variation reproduces selected parents and keeps the best") {
    Objective obj = onemax_objective(30);
    OptimizerConfig cfg;
    cfg.population_size = 20;
    cfg.ga.crossover_rate = 0.0;
    cfg.ga.mutation_rate = 0.0;
    CountingOracle oracle(obj);
    Rng rng(11);
    Population pop = seeded_population(obj, 20, oracle, rng);
    double best_before = pop.best().score;
    long long evals_before = oracle.count();

    Population next = ga_step(pop, cfg, oracle, rng);
    CHECK(next.size() == 20);
    CHECK(next.best().score >= best_before);
    for (const auto& m : next.members) CHECK(is_member_of(m.genes, pop));
    // pure copies inherit cached scores; nothing new was evaluated
    CHECK(oracle.count() == evals_before);
}

TEST_CASE("mutation rate one flips every bit when crossover is off") {
    Objective obj = onemax_objective(16);
    OptimizerConfig cfg;
    cfg.population_size = 4;
    cfg.ga.crossover_rate = 0.0;
    cfg.ga.mutation_rate = 1.0;
    cfg.selection = Selection{SelectionKind::Tournament, 1, 0.5, 0};
    CountingOracle oracle(obj);
    Rng rng(12);
    Population pop = seeded_population(obj, 4, oracle, rng);
    Population next = ga_step(pop, cfg, oracle, rng);
    // skip the elite slot; every other member must be the complement of some parent
    for (int i = 1; i < next.size(); ++i) {
        Chromosome flipped = next.members[i].genes;
        for (int b = 0; b < flipped.size(); ++b) flipped.bits[b] ^= 1;
        CHECK(is_member_of(flipped, pop));
    }
}

TEST_CASE("ga solves small onemax reliably") {
    Objective obj = onemax_objective(30);
    OptimizerConfig cfg;
    cfg.population_size = 60;
    cfg.stop.max_evaluations = 6000;
    cfg.stop.target_fitness = 30.0;
    int solved = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        RunRecord r = run_optimizer(OptimizerKind::Ga, obj, cfg, seed);
        solved += r.best_fitness == 30.0;
    }
    CHECK(solved >= 9);
}

TEST_CASE("umda fixed point: identical selected set reproduces itself") {
    Objective obj = onemax_objective(12);
    OptimizerConfig cfg;
    cfg.population_size = 10;
    cfg.selection = Selection{SelectionKind::Truncation, 6, 0.5, 0};
    CountingOracle oracle(obj);
    Rng rng(13);
    Population pop;
    Chromosome proto(12);
    for (int b = 0; b < 12; b += 2) proto.bits[b] = 1;
    for (int i = 0; i < 10; ++i) {
        ScoredMember m{proto, 0.0};
        m.score = oracle.evaluate(m.genes);
        pop.members.push_back(std::move(m));
    }
    Population next = umda_step(pop, cfg, oracle, rng);
    for (const auto& m : next.members) CHECK(m.genes == proto);
}

TEST_CASE("umda marginals of uniform data sit inside the binomial band") {
    Objective obj = onemax_objective(20);
    Rng rng(14);
    std::vector<Chromosome> storage;
    std::vector<const Chromosome*> sel;
    const int n = 10000;
    for (int i = 0; i < n; ++i) storage.push_back(Chromosome::random(20, rng));
    for (const auto& x : storage) sel.push_back(&x);
    auto p = marginals(sel, 20, false);
    double sigma = std::sqrt(0.25 / n);
    for (double v : p) CHECK(std::abs(v - 0.5) < 5 * sigma);
}

TEST_CASE("laplace flag shrinks marginals toward one half") {
    std::vector<Chromosome> storage{Chromosome(4), Chromosome(4)};
    storage[0].bits = {1, 1, 0, 0};
    storage[1].bits = {1, 1, 0, 0};
    std::vector<const Chromosome*> sel{&storage[0], &storage[1]};
    auto raw = marginals(sel, 4, false);
    auto smooth = marginals(sel, 4, true);
    CHECK(raw == std::vector<double>{1.0, 1.0, 0.0, 0.0});
    CHECK(smooth == std::vector<double>{0.75, 0.75, 0.25, 0.25});
}

TEST_CASE("umda solves onemax 100 within the calibrated budget") {
    Objective obj = onemax_objective(100);
    OptimizerConfig cfg;
    cfg.population_size = 200;
    cfg.selection = Selection{SelectionKind::Truncation, 6, 0.5, 0};
    cfg.stop.max_evaluations = 20000;
    cfg.stop.target_fitness = 100.0;
    int solved = 0;
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        RunRecord r = run_optimizer(OptimizerKind::Umda, obj, cfg, seed);
        solved += r.best_fitness == 100.0;
    }
    CHECK(solved >= 9);
}

TEST_CASE("pbil with learning rate one equals the umda marginals") {
    Rng rng(15);
    std::vector<Chromosome> storage;
    std::vector<const Chromosome*> sel;
    for (int i = 0; i < 50; ++i) storage.push_back(Chromosome::random(16, rng));
    for (const auto& x : storage) sel.push_back(&x);
    std::vector<double> prob(16, 0.31);
    auto updated = pbil_update(prob, sel, 1.0);
    CHECK(updated == marginals(sel, 16, false));
}

TEST_CASE("pbil with learning rate zero leaves the vector untouched") {
    std::vector<Chromosome> storage{Chromosome(4)};
    storage[0].bits = {1, 0, 1, 0};
    std::vector<const Chromosome*> sel{&storage[0]};
    std::vector<double> prob{0.2, 0.4, 0.6, 0.8};
    CHECK(pbil_update(prob, sel, 0.0) == prob);
}

TEST_CASE("repeated pbil updates toward all-ones converge monotonically") {
    Chromosome ones(8);
    for (auto& b : ones.bits) b = 1;
    std::vector<const Chromosome*> sel{&ones};
    std::vector<double> prob(8, 0.5);
    double prev = 0.5;
    for (int step = 0; step < 100; ++step) {
        prob = pbil_update(prob, sel, 0.05);
        for (double v : prob) {
            CHECK(v >= prev - 1e-15);
            CHECK(v <= 1.0);
        }
        prev = prob[0];
    }
    CHECK(prob[0] > 0.99);
}

TEST_CASE("evaluation accounting is exact") {
    ProblemInstance inst = ProblemInstance::defaults();
    Evaluator eval(inst);
    long long calls = 0;
    Objective counted;
    counted.length = inst.chromosome_length();
    counted.tracks_feasible = true;
    counted.eval = [&](const Chromosome& x) {
        ++calls;
        FitnessReport r = eval.report(x);
        return Objective::Result{r.fitness, r.feasible};
    };
    OptimizerConfig cfg;
    cfg.population_size = 40;
    cfg.stop.max_evaluations = 600;
    for (auto kind : {OptimizerKind::Ga, OptimizerKind::Umda, OptimizerKind::Pbil,
                      OptimizerKind::Hboa}) {
        calls = 0;
        RunRecord r = run_optimizer(kind, counted, cfg, 77);
        CHECK(r.total_evaluations == calls);
    }
}

TEST_CASE("per-generation best never decreases for the elitist optimizers") {
    ProblemInstance inst = ProblemInstance::defaults();
    Evaluator eval(inst);
    Objective obj = chemo_objective(eval);
    OptimizerConfig cfg;
    cfg.population_size = 30;
    cfg.stop.max_evaluations = 1500;
    for (auto kind : {OptimizerKind::Ga, OptimizerKind::Umda, OptimizerKind::Pbil,
                      OptimizerKind::Hboa}) {
        RunRecord r = run_optimizer(kind, obj, cfg, 5);
        for (size_t g = 1; g < r.trace.size(); ++g) {
            CHECK(r.trace[g].best >= r.trace[g - 1].best);
            CHECK(r.trace[g].evaluations >= r.trace[g - 1].evaluations);
        }
        if (r.first_feasible >= 0) CHECK(r.first_feasible <= r.total_evaluations);
    }
}

TEST_CASE("same seed gives identical run records") {
    ProblemInstance inst = ProblemInstance::defaults();
    OptimizerConfig cfg;
    cfg.population_size = 24;
    cfg.stop.max_evaluations = 800;
    for (auto kind : {OptimizerKind::Ga, OptimizerKind::Umda, OptimizerKind::Pbil,
                      OptimizerKind::Hboa}) {
        RunRecord a = run_optimizer(kind, inst, cfg, 31415);
        RunRecord b = run_optimizer(kind, inst, cfg, 31415);
        CHECK(a.best == b.best);
        CHECK(a.best_fitness == b.best_fitness);
        CHECK(a.total_evaluations == b.total_evaluations);
        CHECK(a.first_feasible == b.first_feasible);
        REQUIRE(a.trace.size() == b.trace.size());
        for (size_t g = 0; g < a.trace.size(); ++g) {
            CHECK(a.trace[g].best == b.trace[g].best);
            CHECK(a.trace[g].mean == b.trace[g].mean);
            CHECK(a.trace[g].evaluations == b.trace[g].evaluations);
        }
    }
}

TEST_CASE("trivially feasible instance stops during initialization") {
    // every schedule satisfies every constraint here, so the very first
    // evaluated chromosome is feasible
    ProblemInstance inst = ProblemInstance::defaults();
    inst.max_size = inst.plateau * 2;
    inst.max_dose.assign(10, 15.0);
    inst.max_cumulative.assign(10, 150.0);
    inst.side_effect_limit.assign(5, 1000.0);
    inst.validate();
    OptimizerConfig cfg;
    cfg.population_size = 50;
    cfg.stop.max_evaluations = 10000;
    cfg.stop.stop_on_feasible = true;
    RunRecord r = run_optimizer(OptimizerKind::Umda, inst, cfg, 9);
    CHECK(r.stop_reason == "feasible");
    CHECK(r.first_feasible == 1);
    CHECK(r.total_evaluations == 50);  // stop conditions checked per generation
}

TEST_CASE("exact budget stops mid-generation at the cap") {
    Objective obj = onemax_objective(40);
    OptimizerConfig cfg;
    cfg.population_size = 32;
    cfg.stop.max_evaluations = 101;  // not a multiple of anything convenient
    cfg.stop.exact_budget = true;
    for (auto kind : {OptimizerKind::Ga, OptimizerKind::Umda, OptimizerKind::Hboa}) {
        RunRecord r = run_optimizer(kind, obj, cfg, 21);
        CHECK(r.total_evaluations == 101);
        CHECK(r.stop_reason == "budget");
    }
}

TEST_CASE("budget smaller than the population is rejected") {
    Objective obj = onemax_objective(10);
    OptimizerConfig cfg;
    cfg.population_size = 50;
    cfg.stop.max_evaluations = 49;
    CHECK_THROWS_AS(run_optimizer(OptimizerKind::Umda, obj, cfg, 1), ConfigError);
}

TEST_SUITE_END();
