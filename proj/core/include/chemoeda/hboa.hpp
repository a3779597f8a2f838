#pragma once

#include <vector>

#include "chemoeda/encoding.hpp"
#include "chemoeda/population.hpp"
#include "chemoeda/rng.hpp"

namespace chemo {

// Binary decision tree over parent variables; leaves hold P(bit = 1 | path).
struct TreeNode {
    int split_var = -1;  // -1 marks a leaf
    int child0 = -1;
    int child1 = -1;
    double p1 = 0.5;
};

struct VariableTree {
    std::vector<TreeNode> nodes;  // node 0 is the root
    bool is_leaf() const { return nodes.size() == 1; }
};

// Bayesian network with decision-tree conditionals, one tree per variable.
// The parent graph is acyclic by construction.
struct BayesianNetworkModel {
    int length = 0;
    std::vector<VariableTree> trees;
    std::vector<std::vector<int>> parents;  // parents[v]: variables v's tree splits on

    // Kahn's algorithm, lowest index first; throws StructureError on a cycle.
    std::vector<int> topological_order() const;
    int split_count() const;
    bool has_edge(int parent, int child) const;
};

// Greedy construction: repeatedly apply the highest-scoring leaf split under
// a Bayesian-Dirichlet metric (uniform prior) charging
// complexity_penalty * log2(N) score bits per extra leaf; splits that would
// make the parent graph cyclic are skipped. Leaf probabilities are the
// sample frequencies.
BayesianNetworkModel hboa_build_model(const std::vector<const Chromosome*>& selected,
                                      double complexity_penalty = 0.5);

// Ancestral sampling in topological order.
std::vector<Chromosome> hboa_sample(const BayesianNetworkModel& model, int count, Rng& rng);

// Restricted tournament replacement: each offspring challenges its nearest
// (Hamming) member of a random window and replaces it only if strictly
// fitter. Returns the updated population (generation untouched).
Population rtr_replace(Population pop, const std::vector<ScoredMember>& offspring, int window,
                       Rng& rng);

}  // namespace chemo
