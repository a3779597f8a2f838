#include "chemoeda/population.hpp"

#include <algorithm>
#include <numeric>

#include "chemoeda/errors.hpp"

namespace chemo {

int Population::best_index() const {
    if (members.empty()) throw ConfigError("empty population");
    int best = 0;
    for (int i = 1; i < size(); ++i)
        if (members[i].score > members[best].score) best = i;
    return best;
}

double Population::mean_score() const {
    if (members.empty()) throw ConfigError("empty population");
    double sum = 0.0;
    for (const auto& m : members) sum += m.score;
    return sum / size();
}

std::vector<int> tournament_select(const Population& pop, int pool, int out, Rng& rng) {
    if (pop.members.empty()) throw ConfigError("tournament over empty population");
    if (pool < 1 || out < 1) throw ConfigError("tournament pool and output must be >= 1");
    std::vector<int> winners(out);
    for (int w = 0; w < out; ++w) {
        // ties keep the earliest draw, so an all-tied pool selects uniformly
        int best = rng.index(pop.size());
        for (int k = 1; k < pool; ++k) {
            int rival = rng.index(pop.size());
            if (pop.members[rival].score > pop.members[best].score) best = rival;
        }
        winners[w] = best;
    }
    return winners;
}

std::vector<int> truncation_select(const Population& pop, int keep) {
    if (keep < 1 || keep > pop.size())
        throw ConfigError("truncation keep count out of range");
    std::vector<int> order(pop.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return pop.members[a].score > pop.members[b].score;
    });
    order.resize(keep);
    return order;
}

}  // namespace chemo
