#include "chemoeda/hboa.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <queue>

#include "chemoeda/errors.hpp"

namespace chemo {

std::vector<int> BayesianNetworkModel::topological_order() const {
    std::vector<int> indegree(length, 0);
    std::vector<std::vector<int>> children(length);
    for (int v = 0; v < length; ++v)
        for (int p : parents[v]) {
            children[p].push_back(v);
            ++indegree[v];
        }
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int v = 0; v < length; ++v)
        if (indegree[v] == 0) ready.push(v);
    std::vector<int> order;
    order.reserve(length);
    while (!ready.empty()) {
        int v = ready.top();
        ready.pop();
        order.push_back(v);
        for (int c : children[v])
            if (--indegree[c] == 0) ready.push(c);
    }
    if (static_cast<int>(order.size()) != length)
        throw StructureError("parent graph has a cycle");
    return order;
}

int BayesianNetworkModel::split_count() const {
    int count = 0;
    for (const auto& tree : trees)
        for (const auto& node : tree.nodes) count += node.split_var >= 0;
    return count;
}

bool BayesianNetworkModel::has_edge(int parent, int child) const {
    const auto& p = parents[child];
    return std::find(p.begin(), p.end(), parent) != p.end();
}

namespace {

using Words = std::vector<std::uint64_t>;

// Build-time bookkeeping for one still-splittable leaf. Sample membership is
// a bitmask over the selected set, so counting is popcount work.
struct BuildLeaf {
    int var = -1;   // variable whose tree owns this leaf
    int node = -1;  // node index within that tree
    Words mask;       // samples reaching this leaf
    Words mask_ones;  // mask & column(var)
    int total = 0;
    int ones = 0;
    double best_gain = 0;  // over currently legal split variables
    int best_split = -1;
    bool open = true;
};

struct HeapEntry {
    double gain;
    int leaf;
};
struct HeapLess {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
        if (a.gain != b.gain) return a.gain < b.gain;
        return a.leaf > b.leaf;  // lower leaf id wins ties
    }
};

class ModelBuilder {
  public:
    ModelBuilder(const std::vector<const Chromosome*>& data, double complexity_penalty)
        : n_(static_cast<int>(data.size())),
          length_(data[0]->size()),
          mask_words_((n_ + 63) / 64),
          reach_words_((length_ + 63) / 64),
          penalty_(complexity_penalty * std::log2(static_cast<double>(n_))) {
        log2_factorial_.resize(n_ + 2);
        log2_factorial_[0] = 0.0;
        for (int i = 1; i <= n_ + 1; ++i)
            log2_factorial_[i] = log2_factorial_[i - 1] + std::log2(static_cast<double>(i));
        // transpose: one sample-bitset per variable
        columns_.assign(static_cast<size_t>(length_) * mask_words_, 0);
        for (int s = 0; s < n_; ++s)
            for (int v = 0; v < length_; ++v)
                if (data[s]->bits[v])
                    columns_[static_cast<size_t>(v) * mask_words_ + s / 64] |=
                        1ULL << (s % 64);
        reach_.assign(static_cast<size_t>(length_) * reach_words_, 0);
    }

    BayesianNetworkModel build() {
        BayesianNetworkModel model;
        model.length = length_;
        model.trees.resize(length_);
        model.parents.resize(length_);

        Words everyone(mask_words_, 0);
        for (int s = 0; s < n_; ++s) everyone[s / 64] |= 1ULL << (s % 64);
        for (int v = 0; v < length_; ++v) {
            model.trees[v].nodes.push_back(TreeNode{});
            add_leaf(model, v, 0, everyone);
        }
        while (!heap_.empty()) {
            auto [gain, id] = heap_.top();
            heap_.pop();
            BuildLeaf& leaf = leaves_[id];
            if (!leaf.open || gain != leaf.best_gain) continue;  // stale entry
            if (reaches(leaf.var, leaf.best_split)) {
                // the cached candidate became cyclic; rescore this leaf
                rescore(leaf);
                if (leaf.best_split >= 0 && leaf.best_gain > penalty_)
                    heap_.push(HeapEntry{leaf.best_gain, id});
                continue;
            }
            apply_split(model, id);
        }
        return model;
    }

  private:
    const std::uint64_t* column(int v) const {
        return columns_.data() + static_cast<size_t>(v) * mask_words_;
    }

    static int popcount_and(const std::uint64_t* a, const std::uint64_t* b, int words) {
        int total = 0;
        for (int w = 0; w < words; ++w) total += std::popcount(a[w] & b[w]);
        return total;
    }

    bool reaches(int from, int to) const {
        return (reach_[static_cast<size_t>(from) * reach_words_ + to / 64] >> (to % 64)) & 1;
    }

    // record edge parent -> child and extend the transitive closure
    void add_edge(int parent, int child) {
        auto row = [&](int v) { return reach_.begin() + static_cast<size_t>(v) * reach_words_; };
        Words delta(row(child), row(child) + reach_words_);
        delta[child / 64] |= 1ULL << (child % 64);
        for (int a = 0; a < length_; ++a) {
            if (a != parent && !reaches(a, parent)) continue;
            auto r = row(a);
            for (int w = 0; w < reach_words_; ++w) r[w] |= delta[w];
        }
    }

    // Bayesian-Dirichlet leaf score with uniform prior, in bits
    double leaf_score(int zeros, int ones) const {
        return log2_factorial_[zeros] + log2_factorial_[ones] - log2_factorial_[zeros + ones + 1];
    }

    void rescore(BuildLeaf& leaf) {
        const double base = leaf_score(leaf.total - leaf.ones, leaf.ones);
        leaf.best_gain = 0.0;
        leaf.best_split = -1;
        const std::uint64_t* mask = leaf.mask.data();
        const std::uint64_t* mask_ones = leaf.mask_ones.data();
        for (int v = 0; v < length_; ++v) {
            if (v == leaf.var || reaches(leaf.var, v)) continue;
            const std::uint64_t* col = column(v);
            int n1 = popcount_and(mask, col, mask_words_);
            if (n1 == 0 || n1 == leaf.total) continue;  // empty child, zero gain
            int n11 = popcount_and(mask_ones, col, mask_words_);
            int n01 = leaf.ones - n11;
            int n00 = (leaf.total - n1) - n01;
            double gain = leaf_score(n00, n01) + leaf_score(n1 - n11, n11) - base;
            if (gain > leaf.best_gain) {
                leaf.best_gain = gain;
                leaf.best_split = v;
            }
        }
    }

    void add_leaf(BayesianNetworkModel& model, int var, int node, Words mask) {
        BuildLeaf leaf;
        leaf.var = var;
        leaf.node = node;
        leaf.mask = std::move(mask);
        leaf.mask_ones.resize(mask_words_);
        for (int w = 0; w < mask_words_; ++w) leaf.mask_ones[w] = leaf.mask[w] & column(var)[w];
        for (int w = 0; w < mask_words_; ++w) {
            leaf.total += std::popcount(leaf.mask[w]);
            leaf.ones += std::popcount(leaf.mask_ones[w]);
        }
        model.trees[var].nodes[node].p1 =
            leaf.total == 0 ? 0.5 : static_cast<double>(leaf.ones) / leaf.total;
        rescore(leaf);
        const int id = static_cast<int>(leaves_.size());
        leaves_.push_back(std::move(leaf));
        if (leaves_[id].best_split >= 0 && leaves_[id].best_gain > penalty_)
            heap_.push(HeapEntry{leaves_[id].best_gain, id});
    }

    void apply_split(BayesianNetworkModel& model, int id) {
        const int var = leaves_[id].var;
        const int node = leaves_[id].node;
        const int split = leaves_[id].best_split;
        leaves_[id].open = false;

        Words ones(mask_words_), zeros(mask_words_);
        for (int w = 0; w < mask_words_; ++w) {
            ones[w] = leaves_[id].mask[w] & column(split)[w];
            zeros[w] = leaves_[id].mask[w] & ~column(split)[w];
        }

        auto& tree = model.trees[var];
        const int c0 = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(TreeNode{});
        const int c1 = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(TreeNode{});
        tree.nodes[node].split_var = split;
        tree.nodes[node].child0 = c0;
        tree.nodes[node].child1 = c1;

        if (!model.has_edge(split, var)) {
            model.parents[var].push_back(split);
            add_edge(split, var);
        }
        add_leaf(model, var, c0, std::move(zeros));
        add_leaf(model, var, c1, std::move(ones));
    }

    const int n_;
    const int length_;
    const int mask_words_;
    const int reach_words_;
    const double penalty_;
    std::vector<double> log2_factorial_;
    Words columns_;  // length_ rows of sample bitsets
    Words reach_;    // transitive closure, length_ rows
    std::vector<BuildLeaf> leaves_;
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapLess> heap_;
};

}  // namespace

BayesianNetworkModel hboa_build_model(const std::vector<const Chromosome*>& selected,
                                      double complexity_penalty) {
    if (selected.empty()) throw ConfigError("model building needs a nonempty selection");
    return ModelBuilder(selected, complexity_penalty).build();
}

std::vector<Chromosome> hboa_sample(const BayesianNetworkModel& model, int count, Rng& rng) {
    std::vector<int> order = model.topological_order();
    std::vector<Chromosome> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        Chromosome x(model.length);
        for (int v : order) {
            const auto& nodes = model.trees[v].nodes;
            int node = 0;
            while (nodes[node].split_var >= 0)
                node = x.bits[nodes[node].split_var] ? nodes[node].child1 : nodes[node].child0;
            x.bits[v] = static_cast<std::uint8_t>(rng.chance(nodes[node].p1));
        }
        out.push_back(std::move(x));
    }
    return out;
}

Population rtr_replace(Population pop, const std::vector<ScoredMember>& offspring, int window,
                       Rng& rng) {
    if (window < 1) throw ConfigError("replacement window must be >= 1");
    const int n = pop.size();
    const int w = std::min(window, n);
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (const ScoredMember& child : offspring) {
        // partial Fisher-Yates: idx[0..w) is a uniform sample w/o replacement
        for (int k = 0; k < w; ++k) std::swap(idx[k], idx[k + rng.index(n - k)]);
        int target = -1;
        int target_distance = 0;
        for (int k = 0; k < w; ++k) {
            int member = idx[k];
            int distance = hamming_distance(child.genes, pop.members[member].genes);
            if (target < 0 || distance < target_distance ||
                (distance == target_distance && member < target)) {
                target = member;
                target_distance = distance;
            }
        }
        if (child.score > pop.members[target].score) pop.members[target] = child;
    }
    return pop;
}

}  // namespace chemo
