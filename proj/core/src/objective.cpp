#include "chemoeda/objective.hpp"

#include <utility>

namespace chemo {

Objective chemo_objective(const Evaluator& eval) {
    Objective obj;
    obj.length = eval.instance().chromosome_length();
    obj.tracks_feasible = true;
    obj.eval = [&eval](const Chromosome& x) {
        FitnessReport r = eval.report(x);
        return Objective::Result{r.fitness, r.feasible};
    };
    return obj;
}

Objective onemax_objective(int length) {
    Objective obj;
    obj.length = length;
    obj.eval = [](const Chromosome& x) {
        int ones = 0;
        for (auto b : x.bits) ones += b;
        return Objective::Result{static_cast<double>(ones), false};
    };
    return obj;
}

Objective linear_objective(std::vector<double> weights) {
    Objective obj;
    obj.length = static_cast<int>(weights.size());
    obj.eval = [w = std::move(weights)](const Chromosome& x) {
        double sum = 0.0;
        for (size_t i = 0; i < w.size(); ++i)
            if (x.bits[i]) sum += w[i];
        return Objective::Result{sum, false};
    };
    return obj;
}

Objective trap5_objective(int blocks) {
    Objective obj;
    obj.length = 5 * blocks;
    obj.eval = [blocks](const Chromosome& x) {
        double total = 0.0;
        for (int b = 0; b < blocks; ++b) {
            int ones = 0;
            for (int k = 0; k < 5; ++k) ones += x.bits[5 * b + k];
            total += ones == 5 ? 5.0 : static_cast<double>(4 - ones);
        }
        return Objective::Result{total, false};
    };
    return obj;
}

Objective twopeak_objective(int length) {
    Objective obj;
    obj.length = length;
    obj.eval = [length](const Chromosome& x) {
        int ones = 0;
        for (auto b : x.bits) ones += b;
        double v = static_cast<double>(ones > length - ones ? ones : length - ones);
        return Objective::Result{v, false};
    };
    return obj;
}

}  // namespace chemo
