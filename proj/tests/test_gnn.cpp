#include <cmath>

#include <doctest.h>

#include "gnn_fixtures.hpp"
#include "tl/analysis.hpp"
#include "tl/error.hpp"
#include "tl/evaluate.hpp"
#include "tl/gnn.hpp"
#include "tl/parser.hpp"
#include "tl/treewidth.hpp"

using namespace tl;
using tlt::seeded_graph;
using tlt::seeded_spec;

namespace {

std::vector<std::vector<int>> bundle_tuples(int n, int arity) {
    if (arity == 0) return {{}};
    std::vector<std::vector<int>> out;
    std::vector<int> t(arity, 0);
    while (true) {
        out.push_back(t);
        int p = arity - 1;
        while (p >= 0 && ++t[p] == n) t[p--] = 0;
        if (p < 0) break;
    }
    return out;
}

void check_encode_oracle_agreement(const GnnLayerSpec& spec, const Graph& g) {
    EncodeResult enc = encode(spec);
    EvalContext ctx;
    ctx.functions = enc.functions.get();
    auto tuples = bundle_tuples(g.n(), enc.free_arity);
    auto table = evaluate_bundle(enc.bundle, g, tuples, EvalMode::Float, ctx);
    auto oracle = oracle_forward(spec, g);
    REQUIRE(table.size() == oracle.size());
    REQUIRE(table[0].size() == oracle[0].size());
    for (std::size_t r = 0; r < table.size(); ++r) {
        for (std::size_t c = 0; c < table[r].size(); ++c) {
            double a = table[r][c].number();
            double b = oracle[r][c];
            CHECK(std::abs(a - b) <= 1e-6 * std::max({1.0, std::abs(a), std::abs(b)}));
        }
    }
}

} // namespace

TEST_CASE("gin hand example") {
    // 1 layer, l=1, mlp(a,b) = a + 2b on the path 0-1-2 with labels 1,2,3
    GnnLayerSpec spec;
    spec.arch = "gin";
    spec.layers = 1;
    spec.label_len = 1;
    MlpPayload mlp;
    mlp.layers.push_back({{{1.0, 2.0}}, {0.0}, "id"});
    spec.layer_mlps.push_back({mlp});
    Graph p3(3, {{0, 1}, {1, 2}}, {{Rational(1)}, {Rational(2)}, {Rational(3)}});

    auto oracle = oracle_forward(spec, p3);
    REQUIRE(oracle.size() == 3);
    CHECK(oracle[0][0] == doctest::Approx(5));
    CHECK(oracle[1][0] == doctest::Approx(10));
    CHECK(oracle[2][0] == doctest::Approx(7));

    EncodeResult enc = encode(spec);
    EvalContext ctx;
    ctx.functions = enc.functions.get();
    std::vector<double> got;
    for (int v = 0; v < 3; ++v)
        got.push_back(evaluate_float(enc.bundle[0], p3, Valuation{{1, v}}, ctx));
    CHECK(got[0] == doctest::Approx(5));
    CHECK(got[1] == doctest::Approx(10));
    CHECK(got[2] == doctest::Approx(7));
}

TEST_CASE("gcn hand example on K3") {
    GnnLayerSpec spec;
    spec.arch = "gcn";
    spec.layers = 1;
    spec.label_len = 1;
    spec.weights.push_back({{Rational(1)}});
    Graph k3(3, {{0, 1}, {0, 2}, {1, 2}},
             {{Rational(1)}, {Rational(1)}, {Rational(1)}});
    auto oracle = oracle_forward(spec, k3);
    for (int v = 0; v < 3; ++v) CHECK(oracle[v][0] == doctest::Approx(1.0));
    check_encode_oracle_agreement(spec, k3);
}

TEST_CASE("hom_count of a triangle rooted anywhere in K4 is 6") {
    GnnLayerSpec spec;
    spec.arch = "hom_count";
    spec.pattern = complete_graph(3);
    spec.label_len = 0;
    Graph k4 = complete_graph(4);
    auto oracle = oracle_forward(spec, k4);
    for (int v = 0; v < 4; ++v) CHECK(oracle[v][0] == doctest::Approx(6));
    EncodeResult enc = encode(spec);
    for (int v = 0; v < 4; ++v)
        CHECK(evaluate_exact(enc.bundle[0], k4, Valuation{{1, v}}) == Rational(6));
}

TEST_CASE("fgnn at zero layers is the atomic-type tensor") {
    GnnLayerSpec spec = seeded_spec("fgnn_k", 5, 1);
    spec.layers = 0;
    spec.layer_mlps.clear();
    Graph g = seeded_graph(17, 4, 1);
    auto oracle = oracle_forward(spec, g);
    EncodeResult enc = encode(spec);
    CHECK(enc.free_arity == 2);
    CHECK(enc.bundle.size() == 2u * 2u * (1u + 2u));
    check_encode_oracle_agreement(spec, g);
    // spot-check against graph-core atomic types: diagonal entries
    std::vector<int> diag = {1, 1};
    auto atp = atomic_type(g, diag);
    // equality bit of (1,1) tuple is 1
    CHECK(atp[0] == Rational(1));
    (void)oracle;
}

TEST_CASE("encoder/oracle agreement across architectures") {
    const char* archs[] = {"gin", "egin", "gcn", "sgc", "pna",
                           "fgnn_k", "kgin", "ign_layer", "chebnet"};
    for (const char* arch : archs) {
        CAPTURE(arch);
        for (std::uint64_t seed : {1ull, 2ull}) {
            GnnLayerSpec spec = seeded_spec(arch, 100 + seed, 2);
            int n = 4 + static_cast<int>(seed % 3);
            Graph g = seeded_graph(200 + seed, n, 2);
            check_encode_oracle_agreement(spec, g);
        }
    }
    for (const char* agg : {"sum", "max", "mean"}) {
        CAPTURE(agg);
        GnnLayerSpec spec = seeded_spec("graphsage", 7, 2);
        spec.aggregator = agg;
        Graph g = seeded_graph(300, 5, 2);
        check_encode_oracle_agreement(spec, g);
    }
}

TEST_CASE("readout agreement and depth increase") {
    GnnLayerSpec inner = seeded_spec("gin", 11, 2);
    GnnLayerSpec spec;
    spec.arch = "readout";
    spec.inner = std::make_shared<GnnLayerSpec>(inner);
    spec.label_len = 2;
    Graph g = seeded_graph(400, 5, 2);
    check_encode_oracle_agreement(spec, g);

    EncodeResult vertex = encode(inner);
    EncodeResult closed = encode(spec);
    for (std::size_t j = 0; j < closed.bundle.size(); ++j) {
        CHECK(free_vars(closed.bundle[j]).empty());
        CHECK(sum_depth(closed.bundle[j]) == sum_depth(vertex.bundle[j]) + 1);
    }
}

TEST_CASE("fragment conformance per architecture") {
    // gin: guarded, depth t
    {
        GnnLayerSpec spec = seeded_spec("gin", 21, 2);
        EncodeResult enc = encode(spec);
        auto rep = bound_report(enc.bundle, enc.per_layer_depth);
        CHECK(rep.guarded);
        CHECK(rep.agg_depth == spec.layers);
        CHECK(rep.bound == "cr^(" + std::to_string(spec.layers) + ")");
    }
    // egin: unguarded, 2 variables, depth t
    {
        GnnLayerSpec spec = seeded_spec("egin", 22, 2);
        EncodeResult enc = encode(spec);
        auto rep = bound_report(enc.bundle, enc.per_layer_depth);
        CHECK(!rep.guarded);
        CHECK(rep.var_count == 2);
        CHECK(rep.agg_depth == spec.layers);
        CHECK(rep.bound == "vwl_1^(" + std::to_string(spec.layers) + ")");
    }
    // fgnn_k: k+1 variables, depth t
    {
        GnnLayerSpec spec = seeded_spec("fgnn_k", 23, 2);
        EncodeResult enc = encode(spec);
        auto rep = bound_report(enc.bundle, enc.per_layer_depth);
        CHECK(rep.var_count == spec.k + 1);
        CHECK(rep.agg_depth == spec.layers);
    }
    // kgin: k variables, depth t
    {
        GnnLayerSpec spec = seeded_spec("kgin", 24, 2);
        EncodeResult enc = encode(spec);
        auto rep = bound_report(enc.bundle, enc.per_layer_depth);
        CHECK(rep.var_count == spec.k);
        CHECK(rep.agg_depth == spec.layers);
    }
    // sgc: p+1 raw variables; 2 after rewriting; guarded; depth p
    {
        GnnLayerSpec spec = seeded_spec("sgc", 25, 2);
        EncodeResult enc = encode(spec);
        auto rep = bound_report(enc.bundle, enc.per_layer_depth);
        CHECK(rep.var_count == spec.power + 1);
        CHECK(rep.opt_var_count == 2);
        CHECK(rep.sum_depth == spec.power);
        auto rewritten = rewrite_min_vars(enc.bundle[0]);
        CHECK(analyze(rewritten).guarded);
        CHECK(analyze(rewritten).sum_depth == spec.power);
    }
    // pna: guarded with general aggregations
    {
        GnnLayerSpec spec = seeded_spec("pna", 26, 2, 1);
        EncodeResult enc = encode(spec);
        auto rep = bound_report(enc.bundle, enc.per_layer_depth);
        CHECK(rep.guarded);
        CHECK(rep.agg_depth == 1);
        CHECK(rep.sum_depth == 0);
    }
    // gin + readout: closed, 2 vars, depth t+1 -> gcr^(t)
    {
        GnnLayerSpec inner = seeded_spec("gin", 27, 2);
        GnnLayerSpec spec;
        spec.arch = "readout";
        spec.inner = std::make_shared<GnnLayerSpec>(inner);
        EncodeResult enc = encode(spec);
        auto rep = bound_report(enc.bundle, enc.per_layer_depth);
        CHECK(rep.free_arity == 0);
        CHECK(rep.agg_depth == inner.layers + 1);
        CHECK(rep.bound == "gcr^(" + std::to_string(inner.layers) + ")");
    }
    // egin + readout: also closed with 2 variables, depth t+1 -> gcr^(t)
    {
        GnnLayerSpec inner = seeded_spec("egin", 28, 2);
        GnnLayerSpec spec;
        spec.arch = "readout";
        spec.inner = std::make_shared<GnnLayerSpec>(inner);
        EncodeResult enc = encode(spec);
        auto rep = bound_report(enc.bundle, enc.per_layer_depth);
        CHECK(rep.free_arity == 0);
        CHECK(rep.var_count == 2);
        CHECK(rep.agg_depth == inner.layers + 1);
        CHECK(rep.bound == "gcr^(" + std::to_string(inner.layers) + ")");
    }
    // A^3 chain layer: treewidth 1 -> reported at the vwl_1 level despite 4 raw vars
    {
        auto chain = parse("sum x2 : sum x3 : sum x4 : E(x1,x2)*E(x2,x3)*E(x3,x4)");
        auto rep = bound_report({chain});
        CHECK(rep.var_count == 4);
        CHECK(rep.opt_var_count == 2);
        CHECK(rep.bound == "cr^(3)"); // the rewrite lands in the guarded fragment
    }
}

TEST_CASE("bound_report never reports below the guarded rewrite") {
    // a clique-guard layer stays at 3 variables (treewidth 2)
    auto clique = parse("sum x2 : sum x3 : E(x1,x2)*E(x1,x3)*E(x2,x3)");
    auto rep = bound_report({clique});
    CHECK(rep.opt_var_count == 3);
    CHECK(rep.bound == "vwl_2^(2)");
}

TEST_CASE("encode validates shapes") {
    GnnLayerSpec spec = seeded_spec("gin", 31, 2);
    spec.layer_mlps[0][0].layers[0].W[0].pop_back(); // break the input width
    CHECK_THROWS_AS(encode(spec), Error);

    GnnLayerSpec hom;
    hom.arch = "hom_count";
    hom.pattern = Graph(3, {{0, 1}}); // disconnected pattern
    CHECK_THROWS_WITH_AS(encode(hom), doctest::Contains("connected"), Error);
}

TEST_CASE("gnn spec json round trip") {
    auto spec = GnnLayerSpec::from_json_text(R"({
        "arch": "gin", "layers": 1, "label_len": 1,
        "mlps": [[{"layers": [{"W": [[1, 2]], "b": [0], "act": "id"}]}]]
    })");
    CHECK(spec.arch == "gin");
    Graph p3(3, {{0, 1}, {1, 2}}, {{Rational(1)}, {Rational(2)}, {Rational(3)}});
    auto oracle = oracle_forward(spec, p3);
    CHECK(oracle[1][0] == doctest::Approx(10));

    auto hom = GnnLayerSpec::from_json_text(
        R"({"arch": "hom_count", "label_len": 0, "pattern": {"n": 3, "edges": [[0,1],[1,2],[0,2]]}})");
    CHECK(hom.pattern.has_value());
}
