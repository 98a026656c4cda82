#include <doctest.h>

#include "tl/analysis.hpp"
#include "tl/error.hpp"
#include "tl/harness.hpp"
#include "tl/parser.hpp"

using namespace tl;

TEST_CASE("parsing the worked examples") {
    auto e = parse("sum x2 : E(x1,x2) * P1(x2)");
    auto expected = sum_agg(2, product(edge_pred(1, 2), label_pred(1, 2)));
    CHECK(structural_equal(e, expected));

    auto theta = parse("sum x2 : sum x3 : E(x1,x2)*E(x2,x3)");
    auto t = sum_agg(2, sum_agg(3, product(edge_pred(1, 2), edge_pred(2, 3))));
    CHECK(structural_equal(theta, t));
    CHECK(analyze(theta).sum_depth == 2);
}

TEST_CASE("parse errors carry spans") {
    try {
        parse("[x1=x2");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.has_span());
        CHECK(e.span().start == 0);
    }
    CHECK_THROWS_AS(parse("E(x0,x1)"), Error);      // variable index 0
    CHECK_THROWS_AS(parse("@nosuchfn(x1)"), Error); // unknown function
    CHECK_THROWS_AS(parse("agg @nosuchagg x2 : 1"), Error);
    CHECK_THROWS_AS(parse("sum x2"), Error);
    CHECK_THROWS_AS(parse("E(x1,x2) E(x1,x2)"), Error); // trailing input
}

TEST_CASE("rendering basics") {
    CHECK(render(edge_pred(1, 2)) == "E(x1,x2)");
    CHECK(render(scale(Rational(3, 2), one())) == "3/2 * 1");
    CHECK(render(eq_pred(1, 2, true)) == "[x1!=x2]");
    CHECK(render(label_pred(2, 1)) == "P2(x1)");
    CHECK(render(one()) == "1");
}

TEST_CASE("render/parse round trip on tricky shapes") {
    std::vector<ExprPtr> cases = {
        scale(Rational(1), label_pred(1, 1)),            // coefficient 1 vs One literal
        product(scale(Rational(2), one()), one()),       // scale as left factor
        product(one(), scale(Rational(2), one())),       // scale as right factor
        scale(Rational(2), scale(Rational(3), one())),   // nested scales
        scale(Rational(-1, 2), edge_pred(1, 2)),
        add(one(), scale(Rational(-1), label_pred(1, 1))),          // subtraction sugar
        add(one(), scale(Rational(-2), one())),                     // not sugar
        add(add(one(), one()), one()),
        add(one(), add(one(), one())),                              // right-nested add
        product(product(edge_pred(1, 2), edge_pred(2, 3)), edge_pred(1, 3)),
        product(edge_pred(1, 2), product(edge_pred(2, 3), edge_pred(1, 3))),
        sum_agg(2, add(edge_pred(1, 2), one())),
        add(sum_agg(2, edge_pred(1, 2)), one()),                    // binder not in tail
        product(sum_agg(2, edge_pred(1, 2)), label_pred(1, 1)),
        product(label_pred(1, 1), sum_agg(2, edge_pred(1, 2))),     // binder in tail
        apply("relu", {sum_agg(2, product(edge_pred(1, 2), label_pred(1, 2)))}),
        apply("sign", {one(), label_pred(1, 1)}),
        uncond_agg("mean", 1, label_pred(1, 1)),
        guarded_agg("max", 1, 2, label_pred(1, 2)),
        scale(Rational(2), sum_agg(2, edge_pred(1, 2))),
        sum_agg(1, sum_agg(1, eq_pred(1, 1))), // shadowing
    };
    for (const auto& e : cases) {
        auto text = render(e);
        CAPTURE(text);
        auto back = parse(text);
        CHECK(structural_equal(back, e));
    }
}

TEST_CASE("rendered text is idempotent through one normalization") {
    std::vector<std::string> inputs = {
        "sum x2 : E(x1,x2) * P1(x2)",
        "1/2 * E(x1,x2) + [x1=x1] - 2 * 1",
        "agg @mean x2 | E(x1,x2) : P1(x2)",
        "agg @sum x2 : P1(x2) * P1(x2)",
        "@relu(E(x1,x2), 0.5 * 1)",
        "(sum x2 : E(x1,x2)) * (sum x3 : E(x1,x3))",
    };
    for (const auto& in : inputs) {
        auto e = parse(in);
        auto text = render(e);
        CAPTURE(in);
        CAPTURE(text);
        CHECK(structural_equal(parse(text), e));
        CHECK(render(parse(text)) == text);
    }
}

TEST_CASE("round trip over 1000 seeded random ASTs") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        bool guarded = seed % 3 == 0;
        bool closed = seed % 5 == 0;
        auto e = random_expr(guarded ? 2 : 3, 2, guarded, seed, 1, closed && !guarded);
        auto text = render(e);
        CAPTURE(text);
        CHECK(structural_equal(parse(text), e));
    }
}

TEST_CASE("decimals parse to exact rationals") {
    auto e = parse("0.5 * P1(x1)");
    REQUIRE(e->kind == ExprKind::Scale);
    CHECK(e->a == Rational(1, 2));
}
