#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tl/expr.hpp"
#include "tl/graph.hpp"
#include "tl/registry.hpp"

namespace tl {

using RMat = std::vector<std::vector<Rational>>; // in x out

// Declarative GNN architecture parameters. Field use by architecture:
//   gin        layers, label_len, layer_mlps[t] = {mlp: R^{2d} -> R^{d'}}
//   egin       layers, label_len, layer_mlps[t] = {mlp: R^{3d} -> R^{d'}}
//   gcn        layers, label_len, weights[t], bias[t], sigma
//   sgc        power p, label_len, weights[0], sigma
//   graphsage  layers, label_len, weights2[t]=V, weights[t]=W, bias[t],
//              aggregator, sigma
//   pna        layers, label_len, layer_mlps[t] = {pre: R^d -> R^d,
//              out: R^{12d} -> R^{d'}}, scaler_1, scaler_2
//   fgnn_k     k, layers, label_len, layer_mlps[t] = {mlp0: R^{d+b} -> R^{d'},
//              mlp1..mlpk: R^d -> R^b}
//   kgin       k, layers, label_len, layer_mlps[t] = {mlp0: R^{d+k b} -> R^{d'},
//              mlp1: R^d -> R^b}
//   ign_layer  k, layers, label_len, ign_c[t] (pattern x d x d'), ign_b[t]
//              (pattern x d'), sigma; patterns enumerate the set partitions of
//              [2k] (for c) and [k] (for b) in restricted-growth order
//   readout    inner spec + optional readout mlp (layer_mlps[0] = {ro})
//   hom_count  pattern graph rooted at vertex 0
//   chebnet    layers, power p, cheb_c, label_len, poly_weights[t][s-1], sigma
struct GnnLayerSpec {
    std::string arch;
    int layers = 1;
    int k = 2;
    int power = 3;
    int label_len = 1;
    std::string sigma = "id";
    std::string aggregator = "sum";
    std::string scaler_1 = "identity";
    std::string scaler_2 = "identity";
    Rational cheb_c = Rational(1);
    std::vector<std::vector<MlpPayload>> layer_mlps;
    std::vector<RMat> weights;
    std::vector<RMat> weights2;
    std::vector<std::vector<Rational>> bias;
    std::vector<std::vector<RMat>> poly_weights;
    std::vector<std::vector<RMat>> ign_c;
    std::vector<std::vector<std::vector<Rational>>> ign_b;
    std::optional<Graph> pattern;
    std::shared_ptr<GnnLayerSpec> inner; // readout

    static GnnLayerSpec from_json_text(const std::string& text);
};

struct EncodeResult {
    std::vector<ExprPtr> bundle;       // one expression per output feature
    int free_arity = 1;                // 0 closed, 1 vertex, k tuple
    std::vector<int> per_layer_depth;  // aggregation depth after each layer
    std::shared_ptr<FunctionRegistry> functions; // MLPs, activations, scalers
};

EncodeResult encode(const GnnLayerSpec& spec);

// Independent dense forward pass (no TL involvement): one row per item
// (graph, vertex, or k-tuple in row-major order), one column per feature.
std::vector<std::vector<double>> oracle_forward(const GnnLayerSpec& spec, const Graph& g);

struct BoundReport {
    int var_count = 0;     // raw distinct indices
    int opt_var_count = 0; // after the variable-minimizing rewrite
    int sum_depth = 0;
    int agg_depth = 0;
    std::vector<int> per_layer_depth;
    bool guarded = false;
    int free_arity = 0;
    // derived upper bound: cr^(t), vwl_k^(t), gcr^(t) or gwl_k^(inf)
    std::string bound;
    int bound_k = 0;
    int bound_t = 0;
};

BoundReport bound_report(const std::vector<ExprPtr>& bundle,
                         const std::vector<int>& per_layer_depth = {});

// Set partitions of [m] in restricted-growth order (block id per element);
// the coefficient indexing for equality-pattern layers.
std::vector<std::vector<int>> equality_patterns(int m);

} // namespace tl
