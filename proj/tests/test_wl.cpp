#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <doctest.h>

#include "tl/error.hpp"
#include "tl/graph.hpp"
#include "tl/wl.hpp"

using namespace tl;

namespace {

// partition of items by label at round t, as sets of item sets
std::set<std::set<int>> partition_at(RefinementTrace& tr, int t) {
    std::map<int, std::set<int>> by_label;
    for (std::size_t i = 0; i < tr.item_count(); ++i)
        by_label[tr.label_at(i, t)].insert(static_cast<int>(i));
    std::set<std::set<int>> out;
    for (auto& [id, items] : by_label) out.insert(items);
    return out;
}

bool refines_partition(const std::set<std::set<int>>& fine, const std::set<std::set<int>>& coarse) {
    for (const auto& f : fine) {
        bool inside = false;
        for (const auto& c : coarse)
            if (std::includes(c.begin(), c.end(), f.begin(), f.end())) inside = true;
        if (!inside) return false;
    }
    return true;
}

} // namespace

TEST_CASE("color refinement on P4") {
    Graph p4 = path_graph(4);
    auto tr = color_refinement(p4);
    CHECK(partition_at(tr, 1) == std::set<std::set<int>>{{0, 3}, {1, 2}});
    CHECK(partition_at(tr, 2) == std::set<std::set<int>>{{0, 3}, {1, 2}});
    CHECK(tr.stable_round() == 2);
}

TEST_CASE("color refinement on C6 is constant") {
    Graph c6 = cycle_graph(6);
    auto tr = color_refinement(c6);
    for (int t = 0; t <= 3; ++t) CHECK(partition_at(tr, t).size() == 1);
}

TEST_CASE("color refinement with labels") {
    Graph k3(3, {{0, 1}, {0, 2}, {1, 2}}, {{Rational(1)}, {Rational(1)}, {Rational(2)}});
    auto tr = color_refinement(k3);
    CHECK(partition_at(tr, 0) == std::set<std::set<int>>{{0, 1}, {2}});
    CHECK(partition_at(tr, 1) == std::set<std::set<int>>{{0, 1}, {2}});
    CHECK(tr.stable_round() == 1);
}

TEST_CASE("CR stabilizes within n rounds") {
    for (const auto& g : exhaustive_graphs(5)) {
        auto tr = color_refinement(g);
        CHECK(tr.stable_round() >= 1);
        CHECK(tr.stable_round() <= g.n());
    }
}

TEST_CASE("refinement monotonicity") {
    auto corpus = exhaustive_graphs(5);
    for (std::size_t gi = 0; gi < corpus.size(); gi += 3) {
        auto tr = color_refinement(corpus[gi]);
        for (int t = 0; t < tr.stable_round(); ++t)
            CHECK(refines_partition(partition_at(tr, t + 1), partition_at(tr, t)));
        auto tw = wl_k(corpus[gi], 2);
        for (int t = 0; t < tw.stable_round(); ++t)
            CHECK(refines_partition(partition_at(tw, t + 1), partition_at(tw, t)));
    }
}

TEST_CASE("C6 vs 2C3: CR equal at every round, 2-WL separates by round 2") {
    Graph c6 = cycle_graph(6);
    Graph two_c3 = disjoint_union(cycle_graph(3), cycle_graph(3));

    auto ta = color_refinement(c6);
    auto tb = color_refinement(two_c3);
    for (int t = 0; t <= 6; ++t) CHECK(ta.graph_label(t) == tb.graph_label(t));

    auto wa = wl_k(c6, 2, 3);
    auto wb = wl_k(two_c3, 2, 3);
    CHECK(wa.graph_label(0) == wb.graph_label(0));
    CHECK(wa.graph_label(2) != wb.graph_label(2));

    // k=1 multisets stay equal at every round (classic CR-indistinguishable pair)
    auto va = wl_k(c6, 1);
    auto vb = wl_k(two_c3, 1);
    for (int t = 0; t <= 6; ++t) CHECK(va.graph_label(t) == vb.graph_label(t));
}

TEST_CASE("vwl1 at t=1 on P4 matches the CR classes") {
    Graph p4 = path_graph(4);
    auto tr = wl_k(p4, 1, 1);
    CHECK(partition_at(tr, 1) == std::set<std::set<int>>{{0, 3}, {1, 2}});
}

TEST_CASE("P4 2-WL endpoint vs midpoint diagonals at t=1") {
    Graph p4 = path_graph(4);
    auto tr = wl_k(p4, 2, 2);
    CHECK(tr.vertex_label(0, 1) == tr.vertex_label(3, 1));
    CHECK(tr.vertex_label(1, 1) == tr.vertex_label(2, 1));
    CHECK(tr.vertex_label(0, 1) != tr.vertex_label(1, 1));
}

TEST_CASE("vertex-transitive graphs have uniform 2-WL vertex labels") {
    Graph c5 = cycle_graph(5);
    auto tr = wl_k(c5, 2);
    for (int t = 0; t <= 3; ++t)
        for (int v = 1; v < 5; ++v) CHECK(tr.vertex_label(v, t) == tr.vertex_label(0, t));
}

TEST_CASE("graph labels are equivariant") {
    std::mt19937_64 rng(3);
    for (const auto& g : random_corpus(6, 6, 77, 1)) {
        std::vector<int> sigma(g.n());
        std::iota(sigma.begin(), sigma.end(), 0);
        std::shuffle(sigma.begin(), sigma.end(), rng);
        Graph pg = g.permuted(sigma);
        auto ta = color_refinement(g);
        auto tb = color_refinement(pg);
        for (int t = 0; t <= 4; ++t) CHECK(ta.graph_label(t) == tb.graph_label(t));
        auto wa = wl_k(g, 2, 3);
        auto wb = wl_k(pg, 2, 3);
        for (int t = 0; t <= 3; ++t) CHECK(wa.graph_label(t) == wb.graph_label(t));
    }
}

TEST_CASE("vwl hierarchy on the n=4 corpus") {
    // vwl_{k+1} refines vwl_k; vwl_1 refines cr (items = vertices across corpus)
    auto corpus = exhaustive_graphs(4);
    for (int t = 0; t <= 2; ++t) {
        std::vector<int> cr_ids, w1_ids, w2_ids;
        for (const auto& g : corpus) {
            auto tc = color_refinement(g, std::max(t, 1));
            auto t1 = wl_k(g, 1, std::max(t, 1));
            auto t2 = wl_k(g, 2, std::max(t, 1));
            for (int v = 0; v < g.n(); ++v) {
                cr_ids.push_back(tc.label_at(v, t));
                w1_ids.push_back(t1.vertex_label(v, t));
                w2_ids.push_back(t2.vertex_label(v, t));
            }
        }
        // w2 refines w1 refines cr: equal w2 labels imply equal w1 labels, etc.
        std::map<int, std::set<int>> w2_to_w1, w1_to_cr;
        for (std::size_t i = 0; i < cr_ids.size(); ++i) {
            w2_to_w1[w2_ids[i]].insert(w1_ids[i]);
            w1_to_cr[w1_ids[i]].insert(cr_ids[i]);
        }
        for (const auto& [k, vs] : w2_to_w1) CHECK(vs.size() == 1);
        for (const auto& [k, vs] : w1_to_cr) CHECK(vs.size() == 1);
    }
}

TEST_CASE("real-valued labels are interned by exact value") {
    Graph a(2, {{0, 1}}, {{Rational(1, 3)}, {Rational(1, 3)}});
    Graph b(2, {{0, 1}}, {{Rational(1, 3)}, {Rational(333333333, 1000000000)}});
    auto ta = color_refinement(a);
    auto tb = color_refinement(b);
    CHECK(partition_at(ta, 0).size() == 1);
    CHECK(partition_at(tb, 0).size() == 2);
}

TEST_CASE("wl_k memory guard") {
    Graph g = complete_graph(7);
    CHECK_THROWS_WITH_AS(wl_k(g, 3, 1, 300), doctest::Contains("cap"), Error);
}

TEST_CASE("label digests are stable within a process") {
    Graph p4 = path_graph(4);
    auto t1 = color_refinement(p4);
    auto t2 = color_refinement(p4);
    CHECK(label_digest(t1.graph_label(2)) == label_digest(t2.graph_label(2)));
}
