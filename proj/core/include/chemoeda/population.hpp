#pragma once

#include <vector>

#include "chemoeda/encoding.hpp"
#include "chemoeda/rng.hpp"

namespace chemo {

struct ScoredMember {
    Chromosome genes;
    double score = 0.0;
};

struct Population {
    std::vector<ScoredMember> members;
    int generation = 0;

    int size() const { return static_cast<int>(members.size()); }
    // highest score; ties broken by lowest index
    int best_index() const;
    const ScoredMember& best() const { return members[best_index()]; }
    double mean_score() const;
};

// Each winner is the fittest of `pool` members drawn uniformly with
// replacement; ties go to the lowest index. Returns member indices.
std::vector<int> tournament_select(const Population& pop, int pool, int out, Rng& rng);

// The `keep` fittest member indices, score descending, ties by lowest index.
std::vector<int> truncation_select(const Population& pop, int keep);

}  // namespace chemo
