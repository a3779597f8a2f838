#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chemoeda/model.hpp"
#include "chemoeda/objective.hpp"
#include "chemoeda/population.hpp"

namespace chemo {

enum class OptimizerKind { Ga, Umda, Pbil, Hboa };

std::string to_string(OptimizerKind kind);
OptimizerKind optimizer_from_string(const std::string& name);

enum class SelectionKind { Tournament, Truncation };

struct Selection {
    SelectionKind kind = SelectionKind::Tournament;
    int pool = 6;               // tournament pool size
    double keep_fraction = 0.5; // truncation: fraction kept...
    int keep_count = 0;         // ...unless a count is given

    int resolve_keep(int population_size) const;
    std::string describe() const;
};

// "tournament:6", "truncation:40", "truncation:0.5"
Selection selection_from_string(const std::string& text);

struct GaParams {
    double crossover_rate = 0.9;  // one-point
    double mutation_rate = -1.0;  // per bit; negative means 1/L
};

struct PbilParams {
    double learning_rate = 0.1;
};

struct HboaParams {
    double offspring_fraction = 0.5;  // new solutions per generation, as fraction of pop
    int rtr_window = 0;               // 0 means min(L, pop/20)
    double complexity_penalty = 0.5;  // score bits charged per extra leaf, times log2(N)

    int resolve_window(int population_size, int length) const;
};

struct StopConditions {
    long long max_evaluations = 200000;
    bool stop_on_feasible = false;
    std::optional<double> target_fitness;
    bool exact_budget = false;  // stop mid-generation exactly at the cap
};

struct OptimizerConfig {
    int population_size = 100;
    Selection selection;
    GaParams ga;
    PbilParams pbil;
    HboaParams hboa;
    StopConditions stop;
    bool umda_laplace = false;  // optional Laplace correction on marginals

    void validate() const;  // throws ConfigError
};

struct GenerationStat {
    int generation = 0;
    long long evaluations = 0;
    double best = 0.0;
    double mean = 0.0;
};

struct RunRecord {
    OptimizerKind kind = OptimizerKind::Umda;
    std::uint64_t seed = 0;
    OptimizerConfig config;
    std::vector<GenerationStat> trace;
    long long first_feasible = -1;  // 1-based evaluation index; -1 = never
    long long total_evaluations = 0;
    Chromosome best;
    double best_fitness = 0.0;
    std::optional<FitnessReport> best_report;  // filled for chemo runs
    std::string stop_reason;  // "budget" | "feasible" | "target"
};

// Counts every objective evaluation exactly once and tracks the running
// best and the first feasible evaluation index. When a cap is set, the call
// that would exceed it raises BudgetExhausted instead of evaluating.
struct BudgetExhausted {};

class CountingOracle {
  public:
    CountingOracle(const Objective& obj, long long cap = 0);

    double evaluate(const Chromosome& x);
    long long count() const { return count_; }
    long long first_feasible() const { return first_feasible_; }
    const Chromosome& best() const { return best_; }
    double best_value() const { return best_value_; }
    bool any_evaluated() const { return count_ > 0; }

  private:
    const Objective* obj_;
    long long cap_;
    long long count_ = 0;
    long long first_feasible_ = -1;
    Chromosome best_;
    double best_value_ = 0.0;
};

// One full generation of each optimizer. All are deterministic given the
// population, config and generator state; all preserve population size and
// carry the incumbent best through unchanged (hBOA does so via replacement).
Population ga_step(const Population& pop, const OptimizerConfig& cfg, CountingOracle& oracle,
                   Rng& rng);
Population umda_step(const Population& pop, const OptimizerConfig& cfg, CountingOracle& oracle,
                     Rng& rng);

// Blends the probability vector toward the selected set's marginals.
std::vector<double> pbil_update(std::vector<double> prob,
                                const std::vector<const Chromosome*>& selected,
                                double learning_rate);
Population pbil_step(const Population& pop, std::vector<double>& prob,
                     const OptimizerConfig& cfg, CountingOracle& oracle, Rng& rng);
Population hboa_step(const Population& pop, const OptimizerConfig& cfg, CountingOracle& oracle,
                     Rng& rng);

// Per-bit one-frequencies over the selected members.
std::vector<double> marginals(const std::vector<const Chromosome*>& selected, int length,
                              bool laplace = false);

// Runs one optimizer to a stop condition over a black-box objective.
RunRecord run_optimizer(OptimizerKind kind, const Objective& obj, const OptimizerConfig& cfg,
                        std::uint64_t seed);
// Chemo convenience overload; fills best_report.
RunRecord run_optimizer(OptimizerKind kind, const ProblemInstance& inst,
                        const OptimizerConfig& cfg, std::uint64_t seed);

}  // namespace chemo
