#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "chemoeda/instance.hpp"
#include "chemoeda/optimizers.hpp"
#include "chemoeda/stats.hpp"

namespace chemo {

enum class Protocol { Efficiency, Quality };

std::string to_string(Protocol p);
Protocol protocol_from_string(const std::string& name);

struct ExperimentSpec {
    std::string label;          // row label in comparisons and plot data
    std::string instance_path;  // empty means built-in defaults
    OptimizerKind optimizer = OptimizerKind::Umda;
    OptimizerConfig config;
    Protocol protocol = Protocol::Efficiency;
    int runs = 30;
    long long eval_cap = 200000;
    std::uint64_t base_seed = 1;

    void validate() const;  // throws ConfigError
};

// Same flat key = value format as instance files.
ExperimentSpec parse_experiment_spec(std::istream& in, const std::string& source_name);
ExperimentSpec load_experiment_spec(const std::string& path);

struct RunOutcome {
    int index = 0;
    std::uint64_t seed = 0;
    double metric = 0.0;  // first-feasible evaluations, or best fitness
    bool censored = false;
    long long total_evaluations = 0;
};

struct ExperimentSummary {
    ExperimentSpec spec;
    std::vector<RunOutcome> outcomes;
    SummaryStats stats;  // over non-censored metric values
    int censored = 0;
    std::uint64_t instance_digest = 0;
};

// Run i uses seed base_seed + i. Runs may execute on `jobs` threads; the
// summary is identical regardless of scheduling. Efficiency runs that never
// reach feasibility within the cap are censored and excluded from the
// statistics; if every run is censored the experiment fails.
ExperimentSummary run_efficiency(const ExperimentSpec& spec, const ProblemInstance& inst,
                                 int jobs = 1);
// Every run consumes exactly eval_cap evaluations and reports the best
// fitness it saw.
ExperimentSummary run_quality(const ExperimentSpec& spec, const ProblemInstance& inst,
                              int jobs = 1);
ExperimentSummary run_experiment(const ExperimentSpec& spec, const ProblemInstance& inst,
                                 int jobs = 1);

struct BisectionOptions {
    double target_rate = 1.0;  // required success fraction
    int trials = 10;
    int hard_cap = 1000000;
    std::uint64_t seed = 1;
};

// Smallest population size (within a factor 1.25) whose success rate over
// `trials` seeded attempts reaches target_rate. `success` gets the candidate
// size and a per-trial seed. Doubles the upper bracket first, then bisects;
// throws ConfigError if the hard cap is hit while bracketing.
int bisection_population(const std::function<bool(int, std::uint64_t)>& success, int lo, int hi,
                         const BisectionOptions& opts);

// Per-trial seed schedule used by bisection_population (path independent).
std::uint64_t bisection_trial_seed(std::uint64_t base, int size, int trial);

}  // namespace chemo
