#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tl/rational.hpp"

namespace tl {

// Undirected simple graph with per-vertex rational label vectors of a common
// length. Vertices are 0..n-1. Immutable after construction.
class Graph {
public:
    Graph() = default;
    Graph(int n, std::vector<std::pair<int, int>> edges,
          std::vector<std::vector<Rational>> labels = {});

    int n() const { return n_; }
    int label_len() const { return label_len_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<std::vector<Rational>>& labels() const { return labels_; }
    const std::vector<Rational>& label(int v) const { return labels_[v]; }

    bool adjacent(int u, int v) const { return adj_[static_cast<std::size_t>(u) * n_ + v] != 0; }
    const std::vector<int>& neighbors(int v) const { return nbrs_[v]; }
    int degree(int v) const { return static_cast<int>(nbrs_[v].size()); }

    // Graph acted on by the vertex permutation sigma (sigma[v] = image of v):
    // edge uv present in the result iff sigma^-1(u) sigma^-1(v) was an edge.
    Graph permuted(const std::vector<int>& sigma) const;

    bool operator==(const Graph& o) const {
        return n_ == o.n_ && edges_ == o.edges_ && labels_ == o.labels_;
    }

private:
    int n_ = 0;
    int label_len_ = 0;
    std::vector<std::pair<int, int>> edges_;       // i < j, sorted, unique
    std::vector<std::vector<Rational>> labels_;
    std::vector<std::uint8_t> adj_;
    std::vector<std::vector<int>> nbrs_;
};

// Flat atomic-type vector of a k-tuple: C(k,2) equality bits in lexicographic
// (i,j) order with i<j, then C(k,2) adjacency bits, then the k label vectors.
std::vector<Rational> atomic_type(const Graph& g, std::span<const int> tuple);

// All isomorphism classes of unlabeled graphs on exactly n vertices,
// deduplicated by brute force over vertex permutations. Requires n <= 7.
std::vector<Graph> exhaustive_graphs(int n);

// Exhaustive corpus for every size 1..n_max (concatenated).
std::vector<Graph> exhaustive_corpus_up_to(int n_max);

// Erdos-Renyi style graphs on n vertices, edge probability 1/2, from a seeded
// generator. label_len > 0 attaches uniform integer labels in {0..3}.
std::vector<Graph> random_corpus(int n, int count, std::uint64_t seed, int label_len = 0);

// Named small graphs used throughout the test suites.
Graph path_graph(int n);
Graph cycle_graph(int n);
Graph complete_graph(int n);
Graph disjoint_union(const Graph& a, const Graph& b);

} // namespace tl
