#include "tl/graph.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "tl/error.hpp"

namespace tl {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges,
             std::vector<std::vector<Rational>> labels)
    : n_(n), edges_(std::move(edges)), labels_(std::move(labels)) {
    if (n_ < 0) throw Error("graph: negative vertex count");
    if (labels_.empty()) labels_.assign(n_, {});
    if (static_cast<int>(labels_.size()) != n_)
        throw Error("graph: labels array has " + std::to_string(labels_.size()) +
                    " entries for " + std::to_string(n_) + " vertices");
    label_len_ = labels_.empty() ? 0 : static_cast<int>(labels_[0].size());
    for (int v = 0; v < n_; ++v) {
        if (static_cast<int>(labels_[v].size()) != label_len_)
            throw Error("graph: ragged label vectors (vertex " + std::to_string(v) + ")");
    }
    for (auto& [u, v] : edges_) {
        if (u == v) throw Error("graph: self-loop at vertex " + std::to_string(u));
        if (u < 0 || v < 0 || u >= n_ || v >= n_)
            throw Error("graph: edge endpoint out of range: (" + std::to_string(u) + "," +
                        std::to_string(v) + ")");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    adj_.assign(static_cast<std::size_t>(n_) * n_, 0);
    nbrs_.assign(n_, {});
    for (auto [u, v] : edges_) {
        adj_[static_cast<std::size_t>(u) * n_ + v] = 1;
        adj_[static_cast<std::size_t>(v) * n_ + u] = 1;
        nbrs_[u].push_back(v);
        nbrs_[v].push_back(u);
    }
    for (auto& ns : nbrs_) std::sort(ns.begin(), ns.end());
}

Graph Graph::permuted(const std::vector<int>& sigma) const {
    if (static_cast<int>(sigma.size()) != n_) throw Error("permutation size mismatch");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(edges_.size());
    for (auto [u, v] : edges_) edges.emplace_back(sigma[u], sigma[v]);
    std::vector<std::vector<Rational>> labels(n_);
    for (int v = 0; v < n_; ++v) labels[sigma[v]] = labels_[v];
    return Graph(n_, std::move(edges), std::move(labels));
}

std::vector<Rational> atomic_type(const Graph& g, std::span<const int> tuple) {
    const int k = static_cast<int>(tuple.size());
    if (k < 1) throw Error("atomic_type: empty tuple");
    for (int v : tuple)
        if (v < 0 || v >= g.n()) throw Error("atomic_type: vertex out of range");
    std::vector<Rational> out;
    out.reserve(static_cast<std::size_t>(k) * (k - 1) + static_cast<std::size_t>(k) * g.label_len());
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) out.emplace_back(tuple[i] == tuple[j] ? 1 : 0);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) out.emplace_back(g.adjacent(tuple[i], tuple[j]) ? 1 : 0);
    for (int i = 0; i < k; ++i)
        for (const Rational& r : g.label(tuple[i])) out.push_back(r);
    return out;
}

namespace {

// Edge bitmask over the fixed pair ordering (0,1),(0,2)..(0,n-1),(1,2),...
int pair_index(int n, int i, int j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

// True iff mask is the lexicographically smallest among its permuted copies.
bool is_canonical(int n, std::uint32_t mask, const std::vector<std::vector<int>>& perms) {
    const int m = n * (n - 1) / 2;
    for (const auto& p : perms) {
        std::uint32_t pm = 0;
        for (int e = 0; e < m; ++e) {
            if (!(mask & (1u << e))) continue;
            // invert pair index back to (i, j)
            int i = 0, rem = e;
            while (rem >= n - 1 - i) {
                rem -= n - 1 - i;
                ++i;
            }
            int j = i + 1 + rem;
            pm |= 1u << pair_index(n, p[i], p[j]);
            if (pm > mask) break; // already larger, cannot become smaller
        }
        if (pm < mask) return false;
    }
    return true;
}

} // namespace

std::vector<Graph> exhaustive_graphs(int n) {
    if (n < 1 || n > 7) throw Error("exhaustive corpus requires 1 <= n <= 7");
    std::vector<std::vector<int>> perms;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    while (std::next_permutation(p.begin(), p.end())) perms.push_back(p); // identity skipped
    const int m = n * (n - 1) / 2;
    std::vector<Graph> out;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        if (!is_canonical(n, mask, perms)) continue;
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (mask & (1u << pair_index(n, i, j))) edges.emplace_back(i, j);
        out.emplace_back(n, std::move(edges));
    }
    return out;
}

std::vector<Graph> exhaustive_corpus_up_to(int n_max) {
    std::vector<Graph> out;
    for (int n = 1; n <= n_max; ++n) {
        auto part = exhaustive_graphs(n);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

std::vector<Graph> random_corpus(int n, int count, std::uint64_t seed, int label_len) {
    std::mt19937_64 rng(seed);
    std::vector<Graph> out;
    out.reserve(count);
    for (int c = 0; c < count; ++c) {
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng() & 1u) edges.emplace_back(i, j);
        std::vector<std::vector<Rational>> labels;
        if (label_len > 0) {
            labels.assign(n, {});
            for (int v = 0; v < n; ++v)
                for (int s = 0; s < label_len; ++s)
                    labels[v].emplace_back(static_cast<long long>(rng() % 4));
        }
        out.emplace_back(n, std::move(edges), std::move(labels));
    }
    return out;
}

Graph path_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph(n, std::move(edges));
}

Graph cycle_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    if (n > 2) edges.emplace_back(0, n - 1);
    return Graph(n, std::move(edges));
}

Graph complete_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return Graph(n, std::move(edges));
}

Graph disjoint_union(const Graph& a, const Graph& b) {
    std::vector<std::pair<int, int>> edges = a.edges();
    for (auto [u, v] : b.edges()) edges.emplace_back(u + a.n(), v + a.n());
    std::vector<std::vector<Rational>> labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
    return Graph(a.n() + b.n(), std::move(edges), std::move(labels));
}

} // namespace tl
