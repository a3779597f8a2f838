#include "chemoeda/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "chemoeda/errors.hpp"

namespace chemo {

std::string to_string(Protocol p) {
    return p == Protocol::Efficiency ? "efficiency" : "quality";
}

Protocol protocol_from_string(const std::string& name) {
    if (name == "efficiency") return Protocol::Efficiency;
    if (name == "quality") return Protocol::Quality;
    throw ConfigError("unknown protocol '" + name + "' (efficiency, quality)");
}

void ExperimentSpec::validate() const {
    if (runs < 2) throw ConfigError("experiments need at least 2 runs for statistics");
    if (eval_cap < config.population_size)
        throw ConfigError("evaluation cap smaller than the population size");
    config.validate();
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

ExperimentSpec parse_experiment_spec(std::istream& in, const std::string& source_name) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::string text = trim(line);
        if (text.empty()) continue;
        auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ParseError(source_name + ":" + std::to_string(lineno) +
                             ": expected 'key = value'");
        kv[trim(text.substr(0, eq))] = trim(text.substr(eq + 1));
    }

    static const char* kKnown[] = {"label",      "instance",   "optimizer",  "protocol",
                                   "runs",       "eval_cap",   "base_seed",  "population",
                                   "selection",  "pc",         "pm",         "learning_rate",
                                   "offspring_fraction", "rtr_window", "umda_laplace"};
    for (const auto& [key, value] : kv) {
        bool known = false;
        for (const char* k : kKnown) known |= key == k;
        if (!known) throw ParseError(source_name + ": unknown key '" + key + "'");
    }

    ExperimentSpec spec;
    auto get = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    if (auto* v = get("label")) spec.label = *v;
    if (auto* v = get("instance")) spec.instance_path = *v;
    if (auto* v = get("optimizer")) spec.optimizer = optimizer_from_string(*v);
    if (auto* v = get("protocol")) spec.protocol = protocol_from_string(*v);
    if (auto* v = get("runs")) spec.runs = std::stoi(*v);
    if (auto* v = get("eval_cap")) spec.eval_cap = std::stoll(*v);
    if (auto* v = get("base_seed")) spec.base_seed = std::stoull(*v);
    if (auto* v = get("population")) spec.config.population_size = std::stoi(*v);
    if (auto* v = get("selection")) spec.config.selection = selection_from_string(*v);
    if (auto* v = get("pc")) spec.config.ga.crossover_rate = std::stod(*v);
    if (auto* v = get("pm")) spec.config.ga.mutation_rate = std::stod(*v);
    if (auto* v = get("learning_rate")) spec.config.pbil.learning_rate = std::stod(*v);
    if (auto* v = get("offspring_fraction")) spec.config.hboa.offspring_fraction = std::stod(*v);
    if (auto* v = get("rtr_window")) spec.config.hboa.rtr_window = std::stoi(*v);
    if (auto* v = get("umda_laplace")) spec.config.umda_laplace = *v == "1" || *v == "true";
    if (spec.label.empty()) spec.label = to_string(spec.optimizer);
    return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open experiment spec: " + path);
    return parse_experiment_spec(in, path);
}

namespace {

// Runs indices [0, runs) on up to `jobs` threads; outcome order is fixed by
// run index, so scheduling cannot change the summary.
void for_each_run(int runs, int jobs, const std::function<void(int)>& work) {
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        for (int i = 0; i < runs; ++i) work(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        for (int i = next.fetch_add(1); i < runs; i = next.fetch_add(1)) {
            try {
                work(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    for (int t = 0; t < std::min(jobs, runs); ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
}

ExperimentSummary summarize_outcomes(const ExperimentSpec& spec, const ProblemInstance& inst,
                                     std::vector<RunOutcome> outcomes) {
    ExperimentSummary summary;
    summary.spec = spec;
    summary.instance_digest = chemo::instance_digest(inst);
    summary.outcomes = std::move(outcomes);
    std::vector<double> kept;
    for (const auto& o : summary.outcomes) {
        if (o.censored)
            ++summary.censored;
        else
            kept.push_back(o.metric);
    }
    if (kept.size() < 2)
        throw ConfigError("experiment failed: fewer than two uncensored runs (" +
                          std::to_string(kept.size()) + " of " +
                          std::to_string(summary.outcomes.size()) + ")");
    summary.stats = summarize(kept);
    return summary;
}

}  // namespace

ExperimentSummary run_efficiency(const ExperimentSpec& spec, const ProblemInstance& inst,
                                 int jobs) {
    if (spec.protocol != Protocol::Efficiency)
        throw ConfigError("run_efficiency wants an efficiency spec");
    spec.validate();

    OptimizerConfig cfg = spec.config;
    cfg.stop.stop_on_feasible = true;
    cfg.stop.max_evaluations = spec.eval_cap;
    cfg.stop.exact_budget = false;

    std::vector<RunOutcome> outcomes(spec.runs);
    for_each_run(spec.runs, jobs, [&](int i) {
        RunRecord record =
            run_optimizer(spec.optimizer, inst, cfg, spec.base_seed + static_cast<std::uint64_t>(i));
        RunOutcome o;
        o.index = i;
        o.seed = spec.base_seed + static_cast<std::uint64_t>(i);
        o.censored = record.first_feasible < 0;
        o.metric = o.censored ? 0.0 : static_cast<double>(record.first_feasible);
        o.total_evaluations = record.total_evaluations;
        outcomes[i] = o;
    });
    return summarize_outcomes(spec, inst, std::move(outcomes));
}

ExperimentSummary run_quality(const ExperimentSpec& spec, const ProblemInstance& inst,
                              int jobs) {
    if (spec.protocol != Protocol::Quality)
        throw ConfigError("run_quality wants a quality spec");
    spec.validate();

    OptimizerConfig cfg = spec.config;
    cfg.stop.stop_on_feasible = false;
    cfg.stop.target_fitness.reset();
    cfg.stop.max_evaluations = spec.eval_cap;
    cfg.stop.exact_budget = true;  // generations truncated mid-sampling at the cap

    std::vector<RunOutcome> outcomes(spec.runs);
    for_each_run(spec.runs, jobs, [&](int i) {
        RunRecord record =
            run_optimizer(spec.optimizer, inst, cfg, spec.base_seed + static_cast<std::uint64_t>(i));
        RunOutcome o;
        o.index = i;
        o.seed = spec.base_seed + static_cast<std::uint64_t>(i);
        o.metric = record.best_fitness;
        o.censored = false;
        o.total_evaluations = record.total_evaluations;
        outcomes[i] = o;
    });
    return summarize_outcomes(spec, inst, std::move(outcomes));
}

ExperimentSummary run_experiment(const ExperimentSpec& spec, const ProblemInstance& inst,
                                 int jobs) {
    return spec.protocol == Protocol::Efficiency ? run_efficiency(spec, inst, jobs)
                                                 : run_quality(spec, inst, jobs);
}

std::uint64_t bisection_trial_seed(std::uint64_t base, int size, int trial) {
    return derive_seed(base, static_cast<std::uint64_t>(size), static_cast<std::uint64_t>(trial));
}

int bisection_population(const std::function<bool(int, std::uint64_t)>& success, int lo, int hi,
                         const BisectionOptions& opts) {
    if (lo < 1 || hi <= lo) throw ConfigError("bisection needs 1 <= lo < hi");
    if (opts.trials < 1) throw ConfigError("bisection needs at least one trial");

    auto rate_ok = [&](int size) {
        int hits = 0;
        for (int t = 0; t < opts.trials; ++t)
            hits += success(size, bisection_trial_seed(opts.seed, size, t));
        return hits >= static_cast<double>(opts.trials) * opts.target_rate;
    };

    if (rate_ok(lo)) return lo;
    while (!rate_ok(hi)) {
        lo = hi;
        hi *= 2;
        if (hi > opts.hard_cap)
            throw ConfigError("population sizing failed: no success below hard cap " +
                              std::to_string(opts.hard_cap));
    }
    while (static_cast<double>(hi) / lo > 1.25) {
        int mid = lo + (hi - lo) / 2;
        if (rate_ok(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace chemo
