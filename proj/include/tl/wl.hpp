#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "tl/graph.hpp"

namespace tl {

// Interned color labels: two labels get the same id iff their canonical byte
// encodings are identical. Ids are process-local; the table is shared and
// insert-if-absent.
class Interner {
public:
    int intern(const std::string& bytes);
    const std::string& bytes_of(int id) const;
    static Interner& global();

private:
    mutable std::mutex mu_;
    std::unordered_map<std::string, int> ids_;
    std::deque<std::string> rev_; // stable references under growth
};

enum class WlAlgo { CR, WLk };

// Per-round labelling of items (vertices for CR, k-tuples for folklore k-WL),
// with early stop at stability and class-wise extension for later rounds.
class RefinementTrace {
public:
    WlAlgo algo() const { return algo_; }
    int k() const { return k_; }
    int n() const { return n_; }
    std::size_t item_count() const { return items_; }
    // First t whose partition equals round t-1's.
    int stable_round() const { return stable_round_; }
    int computed_rounds() const { return static_cast<int>(rounds_.size()) - 1; }

    int label_at(std::size_t item, int t);       // interned id of an item at round t
    int vertex_label(int v, int t);              // diagonal-tuple label
    int graph_label(int t);                      // interned multiset of round-t labels
    std::vector<int> class_counts(int t);        // sorted class sizes at round t

    // Tuple index in row-major order (first coordinate most significant).
    std::size_t tuple_index(std::span<const int> tuple) const;

private:
    friend RefinementTrace color_refinement(const Graph&, int);
    friend RefinementTrace wl_k(const Graph&, int, int, std::size_t);

    WlAlgo algo_ = WlAlgo::CR;
    int k_ = 1;
    int n_ = 0;
    std::size_t items_ = 0;
    int stable_round_ = -1;
    std::vector<std::vector<int>> rounds_; // rounds_[t][item] for computed t

    // Class-wise extension beyond the stable prefix.
    std::vector<int> item_class_;                       // item -> class at stability
    std::vector<std::vector<std::vector<int>>> tmpl_;   // class -> multiset rows (class refs)
    std::vector<std::vector<int>> ext_class_ids_;       // per extended round, id per class
    void extend_to(int t);
};

// t_max < 0 means run until stable. CR stabilizes within n rounds.
RefinementTrace color_refinement(const Graph& g, int t_max = -1);

// Folklore k-WL on all n^k tuples; memory-guarded by tuple_cap.
RefinementTrace wl_k(const Graph& g, int k, int t_max = -1,
                     std::size_t tuple_cap = 2'000'000);

// Hex digest of the canonical encoding of a label id (process-local).
std::string label_digest(int id);

} // namespace tl
