#pragma once

#include <functional>
#include <vector>

#include "chemoeda/encoding.hpp"
#include "chemoeda/model.hpp"

namespace chemo {

// Black-box bit-string objective. Feasibility rides along with the value so
// one oracle call never costs two fitness computations; objectives without
// a feasibility notion report false and clear tracks_feasible.
struct Objective {
    struct Result {
        double value = 0.0;
        bool feasible = false;
    };

    int length = 0;
    std::function<Result(const Chromosome&)> eval;
    bool tracks_feasible = false;
};

// Binds the treatment-design fitness. The evaluator (and its instance) must
// outlive the objective.
Objective chemo_objective(const Evaluator& eval);

// Benchmark functions used by the optimizer sanity suites.
Objective onemax_objective(int length);
Objective linear_objective(std::vector<double> weights);

// Concatenated deceptive 5-bit traps: a block scores 5 when all ones,
// otherwise 4 minus the number of ones. Optimum is the all-ones string.
Objective trap5_objective(int blocks);

// Two symmetric peaks at all-zeros and all-ones: f = max(#ones, #zeros).
Objective twopeak_objective(int length);

}  // namespace chemo
