#include <algorithm>
#include <numeric>
#include <random>

#include <doctest.h>

#include "tl/analysis.hpp"
#include "tl/error.hpp"
#include "tl/evaluate.hpp"
#include "tl/graph.hpp"
#include "tl/parser.hpp"

using namespace tl;

namespace {

ExprPtr theta() { return parse("sum x2 : sum x3 : E(x1,x2)*E(x2,x3)"); }
ExprPtr tau() { return parse("sum x1 : sum x2 : sum x3 : E(x1,x2)*E(x2,x3)*E(x1,x3)"); }

// independent oracle: paths of length two from v by brute-force triple loop
long long paths2_oracle(const Graph& g, int v) {
    long long count = 0;
    for (int u = 0; u < g.n(); ++u)
        for (int w = 0; w < g.n(); ++w)
            if (g.adjacent(v, u) && g.adjacent(u, w)) ++count;
    return count;
}

// independent oracle: ordered triangles by brute force over ordered triples
long long triangles_oracle(const Graph& g) {
    long long count = 0;
    for (int a = 0; a < g.n(); ++a)
        for (int b = 0; b < g.n(); ++b)
            for (int c = 0; c < g.n(); ++c)
                if (g.adjacent(a, b) && g.adjacent(b, c) && g.adjacent(a, c)) ++count;
    return count;
}

} // namespace

TEST_CASE("theta on P4") {
    Graph p4 = path_graph(4);
    std::vector<long long> expected;
    for (int v = 0; v < 4; ++v) expected.push_back(paths2_oracle(p4, v));
    CHECK(expected == std::vector<long long>{2, 3, 3, 2}); // frozen from the oracle
    for (int v = 0; v < 4; ++v) {
        Valuation nu{{1, v}};
        CHECK(evaluate_exact(theta(), p4, nu) == Rational(expected[v]));
    }
}

TEST_CASE("closed triangle count tau") {
    Graph k3 = complete_graph(3);
    Graph c6 = cycle_graph(6);
    Graph two_c3 = disjoint_union(cycle_graph(3), cycle_graph(3));
    CHECK(triangles_oracle(k3) == 6);
    CHECK(triangles_oracle(c6) == 0);
    CHECK(triangles_oracle(two_c3) == 12);
    Valuation empty;
    CHECK(evaluate_exact(tau(), k3, empty) == Rational(6));
    CHECK(evaluate_exact(tau(), c6, empty) == Rational(0));
    CHECK(evaluate_exact(tau(), two_c3, empty) == Rational(12));
}

TEST_CASE("identity equality predicates") {
    Graph g = path_graph(2);
    Valuation nu{{1, 0}};
    CHECK(evaluate_exact(parse("[x1=x1]"), g, nu) == Rational(1));
    CHECK(evaluate_exact(parse("[x1!=x1]"), g, nu) == Rational(0));
}

TEST_CASE("running example matches the dense layer") {
    // psi_s(x1) = sigma(sum_x2 E(x1,x2) * sum_t W_ts P_t(x2)) reproduces
    // sigma(A * F * W) entrywise; sigma = relu, exact weights.
    std::mt19937_64 rng(5);
    auto corpus = random_corpus(6, 5, 31, 2);
    std::vector<std::vector<Rational>> W = {{Rational(1, 2), Rational(-1)},
                                            {Rational(2), Rational(1, 3)}};
    for (const auto& g : corpus) {
        for (int s = 0; s < 2; ++s) {
            auto lin = add(scale(W[0][s], label_pred(1, 2)), scale(W[1][s], label_pred(2, 2)));
            auto psi = apply("relu", {sum_agg(2, product(edge_pred(1, 2), lin))});
            for (int v = 0; v < g.n(); ++v) {
                // dense oracle: relu(sum_u A[v][u] * (F W)[u][s])
                Rational acc(0);
                for (int u = 0; u < g.n(); ++u) {
                    if (!g.adjacent(v, u)) continue;
                    acc += W[0][s] * g.label(u)[0] + W[1][s] * g.label(u)[1];
                }
                Rational expect = acc.sign() > 0 ? acc : Rational(0);
                Valuation nu{{1, v}};
                CHECK(evaluate_exact(psi, g, nu) == expect);
            }
        }
    }
}

TEST_CASE("evaluate_bundle") {
    Graph p4(4, {{0, 1}, {1, 2}, {2, 3}},
             {{Rational(1)}, {Rational(2)}, {Rational(3)}, {Rational(1)}});
    auto table = evaluate_bundle({parse("P1(x1)")}, p4, {{0}, {1}}, EvalMode::Exact);
    REQUIRE(table.size() == 2);
    CHECK(table[0][0].rational() == Rational(1));
    CHECK(table[1][0].rational() == Rational(2));

    auto closed = evaluate_bundle({tau()}, complete_graph(3), {{}}, EvalMode::Exact);
    CHECK(closed[0][0].rational() == Rational(6));

    CHECK(evaluate_bundle({tau()}, complete_graph(3), {}, EvalMode::Exact).empty());

    CHECK_THROWS_AS(evaluate_bundle({parse("P1(x2)")}, p4, {{0}}, EvalMode::Exact), Error);
}

TEST_CASE("evaluation error paths") {
    Graph g = path_graph(3); // unlabeled
    Valuation nu{{1, 0}};
    CHECK_THROWS_WITH_AS(evaluate_exact(parse("P1(x1)"), g, nu),
                         doctest::Contains("label index"), Error);
    CHECK_THROWS_WITH_AS(evaluate_exact(parse("E(x1,x2)"), g, nu),
                         doctest::Contains("unbound"), Error);
    // empty multiset for non-sum aggregations
    Graph lone(1, {});
    Valuation nu0{{1, 0}};
    CHECK_THROWS_AS(evaluate_exact(parse("agg @max x2 | E(x1,x2) : [x2=x2]"), lone, nu0), Error);
    CHECK(evaluate_exact(parse("agg @sum x2 | E(x1,x2) : [x2=x2]"), lone, nu0) == Rational(0));
    // stdv has no exact form
    CHECK_THROWS_AS(evaluate_exact(parse("agg @stdv x2 : [x2=x2]"), g, nu0), Error);
    CHECK(evaluate_float(parse("agg @stdv x2 : [x2=x2]"), g, nu0) == doctest::Approx(0.0));
}

TEST_CASE("guarded sum equivalence and the mean counterexample") {
    auto guarded_sum = parse("agg @sum x2 | E(x1,x2) : P1(x2)");
    auto unguarded = parse("sum x2 : E(x1,x2) * P1(x2)");
    auto corpus = random_corpus(6, 10, 17, 1);
    for (const auto& g : corpus) {
        for (int v = 0; v < g.n(); ++v) {
            Valuation nu{{1, v}};
            CHECK(evaluate_exact(guarded_sum, g, nu) == evaluate_exact(unguarded, g, nu));
        }
    }
    // conditional mean of 1 is 1; mean of the guard-product is deg/n
    Graph p4 = path_graph(4);
    auto cond_mean = parse("agg @mean x2 | E(x1,x2) : [x2=x2]");
    auto prod_mean = parse("agg @mean x2 : [x2=x2] * E(x1,x2)");
    Valuation nu{{1, 0}};
    CHECK(evaluate_exact(cond_mean, p4, nu) == Rational(1));
    CHECK(evaluate_exact(prod_mean, p4, nu) == Rational(1, 4)); // deg(0)/n = 1/4
}

TEST_CASE("equivariance sampled") {
    std::mt19937_64 rng(23);
    auto corpus = random_corpus(5, 8, 101, 1);
    auto exprs = {theta(), parse("sum x2 : E(x1,x2) * P1(x2)"),
                  parse("agg @mean x2 | E(x1,x2) : P1(x2) * P1(x2)")};
    for (const auto& g : corpus) {
        std::vector<int> sigma(g.n());
        std::iota(sigma.begin(), sigma.end(), 0);
        std::shuffle(sigma.begin(), sigma.end(), rng);
        Graph pg = g.permuted(sigma);
        for (const auto& e : exprs) {
            for (int v = 0; v < g.n(); ++v) {
                Valuation nu{{1, v}};
                Valuation pnu{{1, sigma[v]}};
                bool lhs_ok = true, rhs_ok = true;
                Rational a, b;
                try {
                    a = evaluate_exact(e, g, nu);
                } catch (const Error&) {
                    lhs_ok = false;
                }
                try {
                    b = evaluate_exact(e, pg, pnu);
                } catch (const Error&) {
                    rhs_ok = false;
                }
                CHECK(lhs_ok == rhs_ok); // isolated vertices error on both sides
                if (lhs_ok && rhs_ok) CHECK(a == b);
            }
        }
    }
}

TEST_CASE("float mode agrees with exact mode on function-free expressions") {
    auto corpus = random_corpus(6, 6, 55, 1);
    auto exprs = {theta(), tau(), parse("sum x2 : E(x1,x2) * (1/2 * P1(x2) - 2 * 1)")};
    for (const auto& g : corpus) {
        for (const auto& e : exprs) {
            Valuation nu;
            if (!free_vars(e).empty()) nu.bind(1, 0);
            double exact = evaluate_exact(e, g, nu).to_double();
            double approx = evaluate_float(e, g, nu);
            CHECK(std::abs(exact - approx) <= 1e-9 * std::max(1.0, std::abs(exact)));
        }
    }
}
