#include "chemoeda/optimizers.hpp"

#include <algorithm>
#include <cmath>

#include "chemoeda/errors.hpp"
#include "chemoeda/hboa.hpp"

namespace chemo {

std::string to_string(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::Ga: return "ga";
        case OptimizerKind::Umda: return "umda";
        case OptimizerKind::Pbil: return "pbil";
        case OptimizerKind::Hboa: return "hboa";
    }
    return "?";
}

OptimizerKind optimizer_from_string(const std::string& name) {
    if (name == "ga") return OptimizerKind::Ga;
    if (name == "umda") return OptimizerKind::Umda;
    if (name == "pbil") return OptimizerKind::Pbil;
    if (name == "hboa") return OptimizerKind::Hboa;
    throw ConfigError("unknown optimizer '" + name + "' (ga, umda, pbil, hboa)");
}

int Selection::resolve_keep(int population_size) const {
    int keep = keep_count > 0
                   ? keep_count
                   : static_cast<int>(std::lround(keep_fraction * population_size));
    keep = std::clamp(keep, 1, population_size);
    return keep;
}

std::string Selection::describe() const {
    if (kind == SelectionKind::Tournament) return "tournament:" + std::to_string(pool);
    if (keep_count > 0) return "truncation:" + std::to_string(keep_count);
    char buf[32];
    std::snprintf(buf, sizeof buf, "truncation:%g", keep_fraction);
    return buf;
}

Selection selection_from_string(const std::string& text) {
    Selection sel;
    auto colon = text.find(':');
    std::string kind = text.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "tournament") {
        sel.kind = SelectionKind::Tournament;
        sel.pool = arg.empty() ? 6 : std::stoi(arg);
    } else if (kind == "truncation") {
        sel.kind = SelectionKind::Truncation;
        if (!arg.empty()) {
            double v = std::stod(arg);
            if (v < 1.0) {
                sel.keep_fraction = v;
                sel.keep_count = 0;
            } else {
                sel.keep_count = static_cast<int>(v);
            }
        }
    } else {
        throw ConfigError("unknown selection '" + text + "' (tournament:K, truncation:K)");
    }
    return sel;
}

int HboaParams::resolve_window(int population_size, int length) const {
    if (rtr_window > 0) return rtr_window;
    return std::max(1, std::min(length, population_size / 20));
}

void OptimizerConfig::validate() const {
    if (population_size < 2) throw ConfigError("population size must be >= 2");
    if (selection.kind == SelectionKind::Tournament && selection.pool < 1)
        throw ConfigError("tournament pool must be >= 1");
    if (selection.kind == SelectionKind::Truncation) {
        int keep = selection.resolve_keep(population_size);
        if (keep < 1 || keep > population_size)
            throw ConfigError("truncation keep count out of range");
    }
    if (ga.crossover_rate < 0.0 || ga.crossover_rate > 1.0)
        throw ConfigError("crossover rate outside [0, 1]");
    if (ga.mutation_rate > 1.0) throw ConfigError("mutation rate above 1");
    if (pbil.learning_rate < 0.0 || pbil.learning_rate > 1.0)
        throw ConfigError("learning rate outside [0, 1]");
    if (hboa.offspring_fraction <= 0.0 || hboa.offspring_fraction > 1.0)
        throw ConfigError("offspring fraction outside (0, 1]");
    if (stop.max_evaluations < population_size)
        throw ConfigError("evaluation budget smaller than the initial population");
}

CountingOracle::CountingOracle(const Objective& obj, long long cap) : obj_(&obj), cap_(cap) {}

double CountingOracle::evaluate(const Chromosome& x) {
    if (cap_ > 0 && count_ >= cap_) throw BudgetExhausted{};
    Objective::Result r = obj_->eval(x);
    ++count_;
    if (count_ == 1 || r.value > best_value_) {
        best_value_ = r.value;
        best_ = x;
    }
    if (first_feasible_ < 0 && r.feasible) first_feasible_ = count_;
    return r.value;
}

namespace {

// Selected member indices used to fit a model (UMDA/PBIL/hBOA) or to act as
// the GA mating pool. Tournament draws population-size winners.
std::vector<int> select_set(const Population& pop, const Selection& sel, Rng& rng) {
    if (sel.kind == SelectionKind::Tournament)
        return tournament_select(pop, sel.pool, pop.size(), rng);
    return truncation_select(pop, sel.resolve_keep(pop.size()));
}

std::vector<const Chromosome*> gather(const Population& pop, const std::vector<int>& idx) {
    std::vector<const Chromosome*> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(&pop.members[i].genes);
    return out;
}

Population sample_from_probabilities(const Population& pop, const std::vector<double>& prob,
                                     CountingOracle& oracle, Rng& rng) {
    Population next;
    next.generation = pop.generation + 1;
    next.members.reserve(pop.size());
    next.members.push_back(pop.best());  // elite, cached score
    const int length = static_cast<int>(prob.size());
    for (int m = 1; m < pop.size(); ++m) {
        Chromosome x(length);
        for (int b = 0; b < length; ++b)
            x.bits[b] = static_cast<std::uint8_t>(rng.chance(prob[b]));
        ScoredMember member{std::move(x), 0.0};
        member.score = oracle.evaluate(member.genes);
        next.members.push_back(std::move(member));
    }
    return next;
}

}  // namespace

std::vector<double> marginals(const std::vector<const Chromosome*>& selected, int length,
                              bool laplace) {
    if (selected.empty()) throw ConfigError("marginals of an empty selection");
    std::vector<double> p(length, 0.0);
    for (const Chromosome* x : selected)
        for (int b = 0; b < length; ++b) p[b] += x->bits[b];
    const double n = static_cast<double>(selected.size());
    for (int b = 0; b < length; ++b)
        p[b] = laplace ? (p[b] + 1.0) / (n + 2.0) : p[b] / n;
    return p;
}

Population ga_step(const Population& pop, const OptimizerConfig& cfg, CountingOracle& oracle,
                   Rng& rng) {
    const int n = pop.size();
    const int length = pop.members[0].genes.size();
    const double pm =
        cfg.ga.mutation_rate >= 0.0 ? cfg.ga.mutation_rate : 1.0 / static_cast<double>(length);

    std::vector<int> pool = select_set(pop, cfg.selection, rng);
    auto draw_parent = [&]() -> int { return pool[rng.index(static_cast<int>(pool.size()))]; };

    Population next;
    next.generation = pop.generation + 1;
    next.members.reserve(n);
    next.members.push_back(pop.best());  // elite

    while (next.size() < n) {
        int pa = draw_parent();
        int pb = draw_parent();
        Chromosome c1 = pop.members[pa].genes;
        Chromosome c2 = pop.members[pb].genes;
        bool crossed = rng.chance(cfg.ga.crossover_rate);
        if (crossed && length > 1) {
            int cut = 1 + rng.index(length - 1);
            for (int b = cut; b < length; ++b) std::swap(c1.bits[b], c2.bits[b]);
        }
        bool m1 = false, m2 = false;
        for (int b = 0; b < length; ++b)
            if (rng.chance(pm)) {
                c1.flip(b);
                m1 = true;
            }
        for (int b = 0; b < length; ++b)
            if (rng.chance(pm)) {
                c2.flip(b);
                m2 = true;
            }
        // untouched copies keep the parent's cached score instead of burning
        // an evaluation
        ScoredMember s1{std::move(c1), 0.0};
        s1.score = (!crossed && !m1) ? pop.members[pa].score : oracle.evaluate(s1.genes);
        next.members.push_back(std::move(s1));
        if (next.size() < n) {
            ScoredMember s2{std::move(c2), 0.0};
            s2.score = (!crossed && !m2) ? pop.members[pb].score : oracle.evaluate(s2.genes);
            next.members.push_back(std::move(s2));
        }
    }
    return next;
}

Population umda_step(const Population& pop, const OptimizerConfig& cfg, CountingOracle& oracle,
                     Rng& rng) {
    const int length = pop.members[0].genes.size();
    std::vector<int> sel = select_set(pop, cfg.selection, rng);
    std::vector<double> p = marginals(gather(pop, sel), length, cfg.umda_laplace);
    return sample_from_probabilities(pop, p, oracle, rng);
}

std::vector<double> pbil_update(std::vector<double> prob,
                                const std::vector<const Chromosome*>& selected,
                                double learning_rate) {
    if (learning_rate < 0.0 || learning_rate > 1.0)
        throw ConfigError("learning rate outside [0, 1]");
    std::vector<double> m = marginals(selected, static_cast<int>(prob.size()), false);
    for (size_t b = 0; b < prob.size(); ++b)
        prob[b] = (1.0 - learning_rate) * prob[b] + learning_rate * m[b];
    return prob;
}

Population pbil_step(const Population& pop, std::vector<double>& prob,
                     const OptimizerConfig& cfg, CountingOracle& oracle, Rng& rng) {
    std::vector<int> sel = select_set(pop, cfg.selection, rng);
    prob = pbil_update(std::move(prob), gather(pop, sel), cfg.pbil.learning_rate);
    return sample_from_probabilities(pop, prob, oracle, rng);
}

Population hboa_step(const Population& pop, const OptimizerConfig& cfg, CountingOracle& oracle,
                     Rng& rng) {
    const int length = pop.members[0].genes.size();
    std::vector<int> sel = select_set(pop, cfg.selection, rng);
    BayesianNetworkModel model =
        hboa_build_model(gather(pop, sel), cfg.hboa.complexity_penalty);
    const int count =
        std::max(1, static_cast<int>(std::lround(cfg.hboa.offspring_fraction * pop.size())));
    std::vector<Chromosome> sampled = hboa_sample(model, count, rng);
    std::vector<ScoredMember> offspring;
    offspring.reserve(sampled.size());
    for (auto& x : sampled) {
        ScoredMember m{std::move(x), 0.0};
        m.score = oracle.evaluate(m.genes);
        offspring.push_back(std::move(m));
    }
    Population next = rtr_replace(pop, offspring, cfg.hboa.resolve_window(pop.size(), length),
                                  rng);
    next.generation = pop.generation + 1;
    return next;
}

namespace {

Population initial_population(int size, int length, CountingOracle& oracle, Rng& rng) {
    Population pop;
    pop.generation = 0;
    pop.members.reserve(size);
    for (int i = 0; i < size; ++i) {
        ScoredMember m{Chromosome::random(length, rng), 0.0};
        m.score = oracle.evaluate(m.genes);
        pop.members.push_back(std::move(m));
    }
    return pop;
}

}  // namespace

RunRecord run_optimizer(OptimizerKind kind, const Objective& obj, const OptimizerConfig& cfg,
                        std::uint64_t seed) {
    cfg.validate();
    if (obj.length < 1) throw ConfigError("objective length must be >= 1");

    RunRecord record;
    record.kind = kind;
    record.seed = seed;
    record.config = cfg;

    CountingOracle oracle(obj, cfg.stop.exact_budget ? cfg.stop.max_evaluations : 0);
    Rng rng(seed);
    std::vector<double> pbil_prob(obj.length, 0.5);

    auto note_generation = [&](const Population& pop) {
        record.trace.push_back(GenerationStat{pop.generation, oracle.count(),
                                              pop.best().score, pop.mean_score()});
    };
    auto stop_reason = [&]() -> std::string {
        if (cfg.stop.stop_on_feasible && oracle.first_feasible() >= 0) return "feasible";
        if (cfg.stop.target_fitness && oracle.best_value() >= *cfg.stop.target_fitness)
            return "target";
        if (oracle.count() >= cfg.stop.max_evaluations) return "budget";
        return "";
    };

    try {
        Population pop = initial_population(cfg.population_size, obj.length, oracle, rng);
        note_generation(pop);
        while (stop_reason().empty()) {
            switch (kind) {
                case OptimizerKind::Ga: pop = ga_step(pop, cfg, oracle, rng); break;
                case OptimizerKind::Umda: pop = umda_step(pop, cfg, oracle, rng); break;
                case OptimizerKind::Pbil: pop = pbil_step(pop, pbil_prob, cfg, oracle, rng); break;
                case OptimizerKind::Hboa: pop = hboa_step(pop, cfg, oracle, rng); break;
            }
            note_generation(pop);
        }
        record.stop_reason = stop_reason();
    } catch (const BudgetExhausted&) {
        record.stop_reason = "budget";  // cap reached mid-generation
    }

    record.first_feasible = oracle.first_feasible();
    record.total_evaluations = oracle.count();
    record.best = oracle.best();
    record.best_fitness = oracle.best_value();
    return record;
}

RunRecord run_optimizer(OptimizerKind kind, const ProblemInstance& inst,
                        const OptimizerConfig& cfg, std::uint64_t seed) {
    Evaluator eval(inst);
    Objective obj = chemo_objective(eval);
    RunRecord record = run_optimizer(kind, obj, cfg, seed);
    record.best_report = eval.report(record.best);
    return record;
}

}  // namespace chemo
