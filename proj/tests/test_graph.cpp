#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <random>

#include <doctest.h>

#include "tl/error.hpp"
#include "tl/graph.hpp"
#include "tl/graph_io.hpp"

using namespace tl;

TEST_CASE("graph json loading") {
    Graph k3 = graph_from_json_text(R"({"n":3,"edges":[[0,1],[1,2],[0,2]],"labels":[[],[],[]]})");
    CHECK(k3.n() == 3);
    CHECK(k3.label_len() == 0);
    CHECK(k3.edges().size() == 3);
    CHECK(k3.adjacent(0, 2));

    Graph p4 = graph_from_json_text(
        R"({"n":4,"edges":[[0,1],[1,2],[2,3]],"labels":[[1.0],[2.0],[3.0],[1.0]]})");
    CHECK(p4.label_len() == 1);
    CHECK(p4.label(1)[0] == Rational(2));
    CHECK(p4.label(2)[0] == Rational(3));

    // decimal label text stays exact
    Graph g = graph_from_json_text(R"({"n":1,"edges":[],"labels":[[0.1]]})");
    CHECK(g.label(0)[0] == Rational(1, 10));

    CHECK_THROWS_WITH_AS(graph_from_json_text(R"({"n":2,"edges":[[0,0]]})"),
                         doctest::Contains("self-loop"), Error);
    CHECK_THROWS_WITH_AS(graph_from_json_text(R"({"n":2,"edges":[[0,5]]})"),
                         doctest::Contains("out of range"), Error);
    CHECK_THROWS_WITH_AS(graph_from_json_text(R"({"n":2,"edges":[],"labels":[[1],[1,2]]})"),
                         doctest::Contains("ragged"), Error);
    CHECK_THROWS_AS(graph_from_json_text("not json"), Error);

    // round trip
    Graph back = graph_from_json_text(graph_to_json_text(p4));
    CHECK(back == p4);
}

TEST_CASE("atomic type layout") {
    // single edge (0,1), l = 1, labels [1.0],[1.0]
    Graph g(2, {{0, 1}}, {{Rational(1)}, {Rational(1)}});
    std::vector<int> t01 = {0, 1};
    auto atp = atomic_type(g, t01);
    CHECK(atp == std::vector<Rational>{Rational(0), Rational(1), Rational(1), Rational(1)});
    std::vector<int> t00 = {0, 0};
    atp = atomic_type(g, t00);
    CHECK(atp == std::vector<Rational>{Rational(1), Rational(0), Rational(1), Rational(1)});

    Graph k3 = complete_graph(3);
    std::vector<int> t = {0, 1, 2};
    auto a3 = atomic_type(k3, t);
    CHECK(a3 == std::vector<Rational>{Rational(0), Rational(0), Rational(0), Rational(1),
                                      Rational(1), Rational(1)});

    std::vector<int> bad = {0, 9};
    CHECK_THROWS_AS(atomic_type(k3, bad), Error);
}

TEST_CASE("atomic type is equivariant") {
    std::mt19937_64 rng(11);
    auto corpus = random_corpus(6, 10, 99, 2);
    for (const auto& g : corpus) {
        std::vector<int> sigma(g.n());
        std::iota(sigma.begin(), sigma.end(), 0);
        std::shuffle(sigma.begin(), sigma.end(), rng);
        Graph pg = g.permuted(sigma);
        std::vector<int> tuple = {static_cast<int>(rng() % g.n()), static_cast<int>(rng() % g.n()),
                                  static_cast<int>(rng() % g.n())};
        std::vector<int> ptuple;
        for (int v : tuple) ptuple.push_back(sigma[v]);
        CHECK(atomic_type(g, tuple) == atomic_type(pg, ptuple));
    }
}

TEST_CASE("exhaustive corpora match the known counts") {
    CHECK(exhaustive_graphs(1).size() == 1);
    CHECK(exhaustive_graphs(2).size() == 2);
    CHECK(exhaustive_graphs(3).size() == 4);
    CHECK(exhaustive_graphs(4).size() == 11);
    CHECK(exhaustive_graphs(5).size() == 34);
    CHECK(exhaustive_graphs(6).size() == 156);
    CHECK_THROWS_AS(exhaustive_graphs(8), Error);
}

TEST_CASE("exhaustive corpus has no two permutation-related graphs") {
    auto corpus = exhaustive_graphs(4);
    std::vector<int> sigma(4);
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
        for (std::size_t a = 0; a < corpus.size(); ++a) {
            Graph pa = corpus[a].permuted(sigma);
            for (std::size_t b = 0; b < corpus.size(); ++b) {
                if (a == b) continue;
                CHECK(!(pa == corpus[b]));
            }
        }
    } while (std::next_permutation(sigma.begin(), sigma.end()));
}

TEST_CASE("random corpus is seed-deterministic") {
    auto c1 = random_corpus(7, 5, 7);
    auto c2 = random_corpus(7, 5, 7);
    REQUIRE(c1.size() == 5);
    for (std::size_t i = 0; i < c1.size(); ++i) CHECK(c1[i] == c2[i]);
    auto c3 = random_corpus(7, 5, 8);
    bool all_same = true;
    for (std::size_t i = 0; i < c1.size(); ++i)
        if (!(c1[i] == c3[i])) all_same = false;
    CHECK(!all_same);
}

TEST_CASE("jsonl corpus round trip") {
    auto corpus = exhaustive_graphs(3);
    std::string path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                       "/tl_test_corpus.jsonl";
    save_corpus_jsonl(corpus, path);
    auto back = load_corpus_jsonl(path);
    REQUIRE(back.size() == corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) CHECK(back[i] == corpus[i]);
}
