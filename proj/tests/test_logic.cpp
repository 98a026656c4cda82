#include <doctest.h>

#include "tl/analysis.hpp"
#include "tl/error.hpp"
#include "tl/evaluate.hpp"
#include "tl/graph.hpp"
#include "tl/logic.hpp"
#include "tl/parser.hpp"

using namespace tl;

namespace {

// all valuations of the formula's free variables over g
std::vector<Valuation> all_valuations(const std::set<int>& fv, const Graph& g) {
    std::vector<int> vars(fv.begin(), fv.end());
    std::vector<Valuation> out;
    std::vector<int> assign(vars.size(), 0);
    while (true) {
        Valuation nu;
        for (std::size_t i = 0; i < vars.size(); ++i) nu.bind(vars[i], assign[i]);
        out.push_back(nu);
        std::size_t p = 0;
        while (p < assign.size() && ++assign[p] == g.n()) assign[p++] = 0;
        if (assign.empty() || p == assign.size()) break;
    }
    return out;
}

void check_hat_sound(const FormulaPtr& f, int n_max, const LabelValueSets& labels = {}) {
    for (int n = 1; n <= n_max; ++n) {
        auto hat = hat_translate(f, n, labels);
        CHECK(quantifier_rank(f) == sum_depth(hat));
        for (const auto& g : exhaustive_graphs(n)) {
            for (const auto& nu : all_valuations(formula_free_vars(f), g)) {
                bool truth = eval_formula(f, g, nu);
                Rational val = evaluate_exact(hat, g, nu);
                CHECK(val == Rational(truth ? 1 : 0));
            }
        }
    }
}

} // namespace

TEST_CASE("formula semantics") {
    Graph p4 = path_graph(4);
    auto two_nbrs = f_count_exists(2, 2, f_edge(1, 2));
    CHECK(eval_formula(two_nbrs, p4, Valuation{{1, 1}}));
    CHECK(!eval_formula(two_nbrs, p4, Valuation{{1, 0}}));
    CHECK(eval_formula(f_var_eq(1, 1), p4, Valuation{{1, 2}}));
    auto exact1 = f_count_exists(1, 2, f_edge(1, 2), CountKind::Exactly);
    CHECK(eval_formula(exact1, p4, Valuation{{1, 0}}));
    CHECK(!eval_formula(exact1, p4, Valuation{{1, 1}}));
    CHECK(quantifier_rank(f_not(two_nbrs)) == 1);
    CHECK(formula_free_vars(two_nbrs) == std::set<int>{1});
}

TEST_CASE("interpolation polynomials") {
    // m=1, n=2, at_least: p(x) = (3/2) x - (1/2) x^2
    auto p = interpolation_poly(1, 2, CountKind::AtLeast);
    REQUIRE(p.coeffs.size() == 3);
    CHECK(p.coeffs[0] == Rational(0));
    CHECK(p.coeffs[1] == Rational(3, 2));
    CHECK(p.coeffs[2] == Rational(-1, 2));

    // m=0 at_least is the constant 1
    auto p0 = interpolation_poly(0, 5, CountKind::AtLeast);
    CHECK(p0.degree() == 0);
    CHECK(p0.coeffs[0] == Rational(1));

    // all nodes hit exactly, for n <= 8 and every threshold, both kinds
    for (int n = 0; n <= 8; ++n) {
        for (int m = 0; m <= n; ++m) {
            auto pa = interpolation_poly(m, n, CountKind::AtLeast);
            auto pe = interpolation_poly(m, n, CountKind::Exactly);
            for (int x = 0; x <= n; ++x) {
                CHECK(pa.eval(Rational(x)) == Rational(x >= m ? 1 : 0));
                CHECK(pe.eval(Rational(x)) == Rational(x == m ? 1 : 0));
            }
        }
    }
    CHECK_THROWS_AS(interpolation_poly(3, 2, CountKind::AtLeast), Error);
}

TEST_CASE("hat translation base cases") {
    auto hat_eq = hat_translate(f_var_eq(1, 2), 3);
    CHECK(structural_equal(hat_eq, eq_pred(1, 2)));

    auto hat_not = hat_translate(f_not(f_label(1, 1)), 3);
    CHECK(structural_equal(hat_not, add(one(), scale(Rational(-1), label_pred(1, 1)))));

    // exists^{>=1} x2 E(x1,x2) at n=2: (3/2) S - (1/2) S^2 with S the guard sum
    auto f = f_count_exists(1, 2, f_edge(1, 2));
    auto hat = hat_translate(f, 2);
    auto inner = sum_agg(2, edge_pred(1, 2));
    auto expected =
        add(scale(Rational(3, 2), inner), scale(Rational(-1, 2), product(inner, inner)));
    CHECK(structural_equal(hat, expected));
    check_hat_sound(f, 4);
}

TEST_CASE("hat soundness on a library of handwritten formulas") {
    auto deg_ge = [](int m) { return f_count_exists(m, 2, f_edge(1, 2)); };
    auto closed_ge = [](int m, FormulaPtr body) { return f_count_exists(m, 1, body); };
    std::vector<FormulaPtr> library = {
        f_var_eq(1, 1),
        f_not(f_var_eq(1, 1)),
        f_var_eq(1, 2),
        f_not(f_var_eq(1, 2)),
        f_edge(1, 2),
        f_and(f_edge(1, 2), f_not(f_var_eq(1, 2))),
        deg_ge(1),
        deg_ge(2),
        deg_ge(3),
        f_not(deg_ge(1)),
        f_and(deg_ge(1), f_not(deg_ge(2))),                         // degree exactly 1
        f_count_exists(2, 2, f_edge(1, 2), CountKind::Exactly),     // degree exactly 2
        f_count_exists(1, 2, f_and(f_edge(1, 2), f_count_exists(2, 1, f_edge(2, 1)))),
        closed_ge(1, deg_ge(2)),                                    // some vertex of degree >= 2
        closed_ge(2, deg_ge(1)),
        f_not(closed_ge(1, f_not(deg_ge(1)))),                      // no isolated vertex
        f_count_exists(1, 1, f_var_eq(1, 1)),
        f_count_exists(2, 2, f_not(f_edge(1, 2))),
        f_and(f_var_eq(1, 1), f_edge(2, 1)),
        closed_ge(1, f_count_exists(2, 2, f_and(f_edge(1, 2), f_count_exists(2, 1, f_edge(2, 1))))),
        f_count_exists(1, 2, f_and(f_edge(1, 2), f_count_exists(1, 1, f_and(f_edge(2, 1), f_var_eq(1, 1))))),
    };
    REQUIRE(library.size() >= 20);
    for (const auto& f : library) {
        CAPTURE(quantifier_rank(f));
        check_hat_sound(f, 4);
    }
}

TEST_CASE("hat translation with boolean labels") {
    auto f = f_and(f_label(1, 1), f_count_exists(1, 2, f_and(f_edge(1, 2), f_not(f_label(1, 2)))));
    for (int n = 1; n <= 3; ++n) {
        auto hat = hat_translate(f, n);
        for (const auto& bare : exhaustive_graphs(n)) {
            // all 0/1 labelings
            for (int mask = 0; mask < (1 << n); ++mask) {
                std::vector<std::vector<Rational>> labels;
                for (int v = 0; v < n; ++v) labels.push_back({Rational((mask >> v) & 1)});
                Graph g(n, bare.edges(), labels);
                for (int v = 0; v < n; ++v) {
                    Valuation nu{{1, v}};
                    CHECK(evaluate_exact(hat, g, nu) ==
                          Rational(eval_formula(f, g, nu) ? 1 : 0));
                }
            }
        }
    }
}

TEST_CASE("hat translation of real-valued label tests") {
    LabelValueSets values;
    values[1] = {Rational(1, 2), Rational(3), Rational(-1)};
    auto f = f_label_eq(1, Rational(1, 2), 1);
    auto hat = hat_translate(f, 3, values);
    std::vector<Rational> pool = {Rational(1, 2), Rational(3), Rational(-1)};
    for (int a = 0; a < 3; ++a) {
        Graph g(3, {{0, 1}}, {{pool[a]}, {pool[(a + 1) % 3]}, {pool[(a + 2) % 3]}});
        for (int v = 0; v < 3; ++v) {
            Valuation nu{{1, v}};
            CHECK(evaluate_exact(hat, g, nu) == Rational(g.label(v)[0] == Rational(1, 2) ? 1 : 0));
        }
    }
}

TEST_CASE("guarded formulas hat-translate into the guarded fragment") {
    auto f = f_count_exists(2, 2, f_and(f_edge(1, 2), f_count_exists(1, 1, f_and(f_edge(2, 1), f_var_eq(1, 1)))));
    auto hat = hat_translate(f, 4);
    CHECK(analyze(hat).guarded);
    CHECK(sum_depth(hat) == 2);
}

TEST_CASE("distinguisher: P4 endpoint vs C4 vertex") {
    Graph p4 = path_graph(4);
    Graph c4 = cycle_graph(4);
    auto expr = synthesize_cr_distinguisher(p4, 0, c4, 0, 1);
    REQUIRE(expr.has_value());
    auto rep = analyze(*expr);
    CHECK(rep.guarded);
    CHECK(rep.sum_depth <= 1);
    CHECK(evaluate_exact(*expr, p4, Valuation{{1, 0}}) == Rational(1));
    CHECK(evaluate_exact(*expr, c4, Valuation{{1, 0}}) == Rational(0));
}

TEST_CASE("distinguisher: none for CR-equivalent pairs") {
    Graph c6 = cycle_graph(6);
    Graph two_c3 = disjoint_union(cycle_graph(3), cycle_graph(3));
    for (int t : {1, 2, 3, 6}) {
        CHECK(!synthesize_cr_distinguisher(c6, 0, two_c3, 0, t).has_value());
    }
    CHECK(!synthesize_cr_distinguisher(c6, 0, c6, 3, 2).has_value());
    CHECK_THROWS_AS(synthesize_cr_distinguisher(c6, 0, path_graph(3), 0, 1), Error);
}

TEST_CASE("distinguisher characterizes the color on third graphs") {
    // formula for (P4 endpoint, t=2) evaluates 0/1 according to the round-2
    // CR color on other graphs of the same size
    Graph p4 = path_graph(4);
    Graph c4 = cycle_graph(4);
    auto expr = synthesize_cr_distinguisher(p4, 0, c4, 0, 2);
    REQUIRE(expr.has_value());
    Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
    // leaves of the star have degree 1 but their neighbor has degree 3, while
    // P4's endpoint neighbor has degree 2: colors differ at round 2
    for (int v = 0; v < 4; ++v) {
        Valuation nu{{1, v}};
        CHECK(evaluate_exact(*expr, star, nu) == Rational(0));
    }
    ExactEvalCache cache(star);
    for (int v = 0; v < 4; ++v)
        CHECK(cache.eval(*expr, Valuation{{1, v}}) == Rational(0));
}

TEST_CASE("distinguisher with labeled graphs") {
    Graph a(3, {{0, 1}, {1, 2}}, {{Rational(1, 2)}, {Rational(1, 2)}, {Rational(5)}});
    Graph b(3, {{0, 1}, {1, 2}}, {{Rational(1, 2)}, {Rational(5)}, {Rational(5)}});
    auto expr = synthesize_cr_distinguisher(a, 0, b, 0, 1);
    REQUIRE(expr.has_value());
    CHECK(evaluate_exact(*expr, a, Valuation{{1, 0}}) == Rational(1));
    CHECK(evaluate_exact(*expr, b, Valuation{{1, 0}}) == Rational(0));
}

TEST_CASE("memoized evaluation agrees with the naive evaluator") {
    Graph p4 = path_graph(4);
    Graph c4 = cycle_graph(4);
    auto expr = synthesize_cr_distinguisher(p4, 1, c4, 0, 3);
    REQUIRE(expr.has_value());
    for (const Graph* g : {&p4, &c4}) {
        ExactEvalCache cache(*g);
        for (int v = 0; v < 4; ++v) {
            Valuation nu{{1, v}};
            CHECK(cache.eval(*expr, nu) == evaluate_exact(*expr, *g, nu));
        }
    }
}
