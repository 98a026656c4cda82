#include "tl/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include <json.hpp>

#include "tl/analysis.hpp"
#include "tl/error.hpp"
#include "tl/treewidth.hpp"

namespace tl {

std::vector<std::vector<int>> equality_patterns(int m) {
    std::vector<std::vector<int>> out;
    std::vector<int> blocks(m, 0);
    std::function<void(int, int)> gen = [&](int pos, int next_block) {
        if (pos == m) {
            out.push_back(blocks);
            return;
        }
        for (int b = 0; b <= next_block; ++b) {
            blocks[pos] = b;
            gen(pos + 1, std::max(next_block, b + 1));
        }
    };
    if (m > 0) gen(0, 0);
    return out;
}

namespace {

// alternate between two variable indices without growing the variable set
ExprPtr at(const ExprPtr& e, int from, int to) { return swap_vars(e, from, to); }

// sum_i W[i][j] * exprs[i]
ExprPtr lin_combo(const RMat& w, int col, const std::vector<ExprPtr>& exprs) {
    if (w.size() != exprs.size()) throw Error("weight matrix height mismatch");
    std::vector<ExprPtr> terms;
    for (std::size_t i = 0; i < exprs.size(); ++i)
        terms.push_back(scale(w[i][col], exprs[i]));
    return add_fold(terms);
}

void check_mat(const RMat& w, std::size_t in, const std::string& what) {
    if (w.size() != in) throw Error(what + ": expected " + std::to_string(in) + " rows");
    if (w.empty() || w[0].empty()) throw Error(what + ": empty weight matrix");
    for (const auto& row : w)
        if (row.size() != w[0].size()) throw Error(what + ": ragged weight matrix");
}

ExprPtr maybe_sigma(const std::string& sigma, ExprPtr e) {
    if (sigma == "id") return e;
    return apply(sigma, {std::move(e)});
}

struct Ctx {
    const GnnLayerSpec& spec;
    std::shared_ptr<FunctionRegistry> fns;

    std::vector<std::string> mlp_names(const std::string& base, const MlpPayload& p) {
        fns->add_mlp(base, p);
        std::vector<std::string> names;
        for (int j = 0; j < p.out_dim(); ++j) names.push_back(base + "_" + std::to_string(j));
        return names;
    }
};

const std::vector<MlpPayload>& layer_payloads(const GnnLayerSpec& spec, int t, std::size_t count,
                                              const std::string& what) {
    if (static_cast<int>(spec.layer_mlps.size()) < t)
        throw Error(what + ": missing mlp payloads for layer " + std::to_string(t));
    const auto& ms = spec.layer_mlps[t - 1];
    if (ms.size() != count)
        throw Error(what + ": layer " + std::to_string(t) + " needs " + std::to_string(count) +
                    " mlp payload(s)");
    return ms;
}

std::vector<ExprPtr> initial_vertex_features(int label_len) {
    std::vector<ExprPtr> out;
    for (int s = 1; s <= label_len; ++s) out.push_back(label_pred(s, 1));
    if (out.empty()) throw Error("vertex architectures need label_len >= 1");
    return out;
}

EncodeResult encode_gin(Ctx& ctx, bool extended) {
    const auto& spec = ctx.spec;
    std::vector<ExprPtr> cur = initial_vertex_features(spec.label_len);
    EncodeResult res;
    for (int t = 1; t <= spec.layers; ++t) {
        const auto& payload = layer_payloads(spec, t, 1, extended ? "egin" : "gin")[0];
        std::size_t want = (extended ? 3 : 2) * cur.size();
        if (payload.in_dim() != static_cast<int>(want))
            throw Error("mlp input width must be " + std::to_string(want));
        auto names = ctx.mlp_names((extended ? "egin_l" : "gin_l") + std::to_string(t), payload);
        std::vector<ExprPtr> args;
        for (const auto& f : cur) args.push_back(f);
        for (const auto& f : cur)
            args.push_back(sum_agg(2, product(edge_pred(1, 2), at(f, 1, 2))));
        if (extended)
            for (const auto& f : cur) args.push_back(sum_agg(1, f));
        std::vector<ExprPtr> next;
        for (const auto& name : names) next.push_back(apply(name, args));
        cur = std::move(next);
        res.per_layer_depth.push_back(t);
    }
    res.bundle = std::move(cur);
    res.free_arity = 1;
    return res;
}

EncodeResult encode_gcn(Ctx& ctx) {
    const auto& spec = ctx.spec;
    std::vector<ExprPtr> cur = initial_vertex_features(spec.label_len);
    ExprPtr deg1 = sum_agg(2, edge_pred(1, 2));
    ExprPtr deg2 = sum_agg(1, edge_pred(2, 1));
    ExprPtr f1 = apply("recip_sqrt_plus1", {deg1});
    ExprPtr f2 = apply("recip_sqrt_plus1", {deg2});
    EncodeResult res;
    for (int t = 1; t <= spec.layers; ++t) {
        if (static_cast<int>(spec.weights.size()) < t) throw Error("gcn: missing weights");
        const RMat& w = spec.weights[t - 1];
        check_mat(w, cur.size(), "gcn");
        std::size_t d_out = w[0].size();
        std::vector<ExprPtr> next;
        for (std::size_t j = 0; j < d_out; ++j) {
            ExprPtr lin1 = lin_combo(w, static_cast<int>(j), cur);
            std::vector<ExprPtr> shifted;
            for (const auto& f : cur) shifted.push_back(at(f, 1, 2));
            ExprPtr lin2 = lin_combo(w, static_cast<int>(j), shifted);
            ExprPtr diag = product(product(f1, lin1), f1);
            ExprPtr nbrs = product(f1, sum_agg(2, product(product(edge_pred(1, 2), f2), lin2)));
            ExprPtr body = add(diag, nbrs);
            if (static_cast<int>(spec.bias.size()) >= t && !spec.bias[t - 1].empty())
                body = add(body, scale(spec.bias[t - 1][j], one()));
            next.push_back(maybe_sigma(spec.sigma, body));
        }
        cur = std::move(next);
        res.per_layer_depth.push_back(2 * t); // the degree sums double the depth
    }
    res.bundle = std::move(cur);
    res.free_arity = 1;
    return res;
}

EncodeResult encode_sgc(Ctx& ctx) {
    const auto& spec = ctx.spec;
    if (spec.weights.empty()) throw Error("sgc: missing weights");
    const RMat& w = spec.weights[0];
    check_mat(w, static_cast<std::size_t>(spec.label_len), "sgc");
    int p = spec.power;
    if (p < 1) throw Error("sgc: power must be >= 1");
    std::vector<ExprPtr> base;
    for (int s = 1; s <= spec.label_len; ++s) base.push_back(label_pred(s, p + 1));
    EncodeResult res;
    for (std::size_t j = 0; j < w[0].size(); ++j) {
        std::vector<ExprPtr> factors;
        for (int q = 1; q <= p; ++q) factors.push_back(edge_pred(q, q + 1));
        factors.push_back(lin_combo(w, static_cast<int>(j), base));
        ExprPtr body = product_fold(factors);
        for (int q = p + 1; q >= 2; --q) body = sum_agg(q, body);
        res.bundle.push_back(maybe_sigma(spec.sigma, body));
    }
    res.per_layer_depth.push_back(p);
    res.free_arity = 1;
    return res;
}

EncodeResult encode_graphsage(Ctx& ctx) {
    const auto& spec = ctx.spec;
    std::vector<ExprPtr> cur = initial_vertex_features(spec.label_len);
    EncodeResult res;
    for (int t = 1; t <= spec.layers; ++t) {
        if (static_cast<int>(spec.weights.size()) < t ||
            static_cast<int>(spec.weights2.size()) < t)
            throw Error("graphsage: missing V/W weights");
        const RMat& wv = spec.weights2[t - 1];
        const RMat& ww = spec.weights[t - 1];
        check_mat(wv, cur.size(), "graphsage V");
        check_mat(ww, cur.size(), "graphsage W");
        std::size_t d_out = wv[0].size();
        if (ww[0].size() != d_out) throw Error("graphsage: V/W output widths differ");
        std::vector<ExprPtr> aggregated;
        for (const auto& f : cur)
            aggregated.push_back(guarded_agg(spec.aggregator, 1, 2, at(f, 1, 2)));
        std::vector<ExprPtr> next;
        for (std::size_t j = 0; j < d_out; ++j) {
            ExprPtr body = add(lin_combo(wv, static_cast<int>(j), cur),
                               lin_combo(ww, static_cast<int>(j), aggregated));
            if (static_cast<int>(spec.bias.size()) >= t && !spec.bias[t - 1].empty())
                body = add(body, scale(spec.bias[t - 1][j], one()));
            next.push_back(maybe_sigma(spec.sigma, body));
        }
        cur = std::move(next);
        res.per_layer_depth.push_back(t);
    }
    res.bundle = std::move(cur);
    res.free_arity = 1;
    return res;
}

EncodeResult encode_pna(Ctx& ctx) {
    const auto& spec = ctx.spec;
    std::vector<ExprPtr> cur = initial_vertex_features(spec.label_len);
    EncodeResult res;
    const char* agg_names[4] = {"mean", "stdv", "max", "min"};
    for (int t = 1; t <= spec.layers; ++t) {
        const auto& ms = layer_payloads(spec, t, 2, "pna");
        const MlpPayload& pre = ms[0];
        const MlpPayload& outm = ms[1];
        if (pre.in_dim() != static_cast<int>(cur.size()))
            throw Error("pna: pre-mlp input width mismatch");
        std::size_t d = static_cast<std::size_t>(pre.out_dim());
        if (outm.in_dim() != static_cast<int>(12 * d))
            throw Error("pna: out-mlp input width must be 12 x d");
        auto pre_names = ctx.mlp_names("pna_l" + std::to_string(t) + "_pre", pre);
        auto out_names = ctx.mlp_names("pna_l" + std::to_string(t) + "_out", outm);
        std::vector<ExprPtr> shifted;
        for (const auto& f : cur) shifted.push_back(at(f, 1, 2));
        std::vector<ExprPtr> psi;
        for (const char* agg : agg_names)
            for (std::size_t j = 0; j < d; ++j)
                psi.push_back(guarded_agg(agg, 1, 2, apply(pre_names[j], shifted)));
        ExprPtr deg = guarded_agg("sum", 1, 2, eq_pred(2, 2));
        ExprPtr s1 = apply(spec.scaler_1, {deg});
        ExprPtr s2 = apply(spec.scaler_2, {deg});
        std::vector<ExprPtr> xi = psi;
        for (const auto& p : psi) xi.push_back(product(s1, p));
        for (const auto& p : psi) xi.push_back(product(s2, p));
        std::vector<ExprPtr> next;
        for (const auto& name : out_names) next.push_back(apply(name, xi));
        cur = std::move(next);
        res.per_layer_depth.push_back(t);
    }
    res.bundle = std::move(cur);
    res.free_arity = 1;
    return res;
}

std::vector<ExprPtr> fgnn_initial(int k, int label_len) {
    std::vector<ExprPtr> out;
    for (int r = 1; r <= k; ++r)
        for (int s = 1; s <= k; ++s) {
            for (int j = 1; j <= label_len; ++j)
                out.push_back(product(eq_pred(r, s), label_pred(j, r)));
            out.push_back(edge_pred(r, s));
            out.push_back(eq_pred(r, s));
        }
    return out;
}

EncodeResult encode_fgnn(Ctx& ctx) {
    const auto& spec = ctx.spec;
    const int k = spec.k;
    if (k < 1) throw Error("fgnn_k: k must be >= 1");
    std::vector<ExprPtr> cur = fgnn_initial(k, spec.label_len);
    EncodeResult res;
    for (int t = 1; t <= spec.layers; ++t) {
        const auto& ms = layer_payloads(spec, t, static_cast<std::size_t>(k) + 1, "fgnn_k");
        const MlpPayload& m0 = ms[0];
        int b = ms[1].out_dim();
        for (int s = 1; s <= k; ++s) {
            if (ms[s].in_dim() != static_cast<int>(cur.size()) || ms[s].out_dim() != b)
                throw Error("fgnn_k: side mlp shape mismatch");
        }
        if (m0.in_dim() != static_cast<int>(cur.size()) + b)
            throw Error("fgnn_k: head mlp input width mismatch");
        auto head = ctx.mlp_names("fgnn_l" + std::to_string(t) + "_m0", m0);
        std::vector<std::vector<std::string>> side;
        for (int s = 1; s <= k; ++s)
            side.push_back(
                ctx.mlp_names("fgnn_l" + std::to_string(t) + "_m" + std::to_string(s), ms[s]));
        std::vector<ExprPtr> inner;
        for (int jp = 0; jp < b; ++jp) {
            std::vector<ExprPtr> prod;
            for (int s = 1; s <= k; ++s) {
                std::vector<ExprPtr> args;
                for (const auto& f : cur) args.push_back(at(f, s, k + 1));
                prod.push_back(apply(side[s - 1][jp], args));
            }
            inner.push_back(sum_agg(k + 1, product_fold(prod)));
        }
        std::vector<ExprPtr> next;
        for (const auto& name : head) {
            std::vector<ExprPtr> args = cur;
            args.insert(args.end(), inner.begin(), inner.end());
            next.push_back(apply(name, args));
        }
        cur = std::move(next);
        res.per_layer_depth.push_back(t);
    }
    res.bundle = std::move(cur);
    res.free_arity = k;
    return res;
}

std::vector<ExprPtr> atp_initial(int k, int label_len) {
    std::vector<ExprPtr> out;
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) out.push_back(eq_pred(i, j));
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) out.push_back(edge_pred(i, j));
    for (int i = 1; i <= k; ++i)
        for (int s = 1; s <= label_len; ++s) out.push_back(label_pred(s, i));
    if (out.empty()) throw Error("tuple architectures need k >= 2 or label_len >= 1");
    return out;
}

EncodeResult encode_kgin(Ctx& ctx) {
    const auto& spec = ctx.spec;
    const int k = spec.k;
    if (k < 2) throw Error("kgin: k must be >= 2");
    std::vector<ExprPtr> cur = atp_initial(k, spec.label_len);
    EncodeResult res;
    for (int t = 1; t <= spec.layers; ++t) {
        const auto& ms = layer_payloads(spec, t, 2, "kgin");
        const MlpPayload& m0 = ms[0];
        const MlpPayload& m1 = ms[1];
        if (m1.in_dim() != static_cast<int>(cur.size()))
            throw Error("kgin: side mlp input width mismatch");
        int b = m1.out_dim();
        if (m0.in_dim() != static_cast<int>(cur.size()) + k * b)
            throw Error("kgin: head mlp input width mismatch");
        auto head = ctx.mlp_names("kgin_l" + std::to_string(t) + "_m0", m0);
        auto side = ctx.mlp_names("kgin_l" + std::to_string(t) + "_m1", m1);
        std::vector<ExprPtr> blocks;
        for (int s = 1; s <= k; ++s)
            for (int jp = 0; jp < b; ++jp) blocks.push_back(sum_agg(s, apply(side[jp], cur)));
        std::vector<ExprPtr> next;
        for (const auto& name : head) {
            std::vector<ExprPtr> args = cur;
            args.insert(args.end(), blocks.begin(), blocks.end());
            next.push_back(apply(name, args));
        }
        cur = std::move(next);
        res.per_layer_depth.push_back(t);
    }
    res.bundle = std::move(cur);
    res.free_arity = k;
    return res;
}

ExprPtr pattern_indicator(const std::vector<int>& blocks, const std::vector<int>& vars) {
    std::vector<ExprPtr> factors;
    for (std::size_t a = 0; a < vars.size(); ++a)
        for (std::size_t b = a + 1; b < vars.size(); ++b)
            factors.push_back(eq_pred(vars[a], vars[b], blocks[a] != blocks[b]));
    return product_fold(factors);
}

EncodeResult encode_ign(Ctx& ctx) {
    const auto& spec = ctx.spec;
    const int k = spec.k;
    if (k < 2 || k > 3) throw Error("ign_layer supports 2 <= k <= 3");
    std::vector<ExprPtr> cur = atp_initial(k, spec.label_len);
    auto pat2k = equality_patterns(2 * k);
    auto patk = equality_patterns(k);
    std::vector<int> xy_vars, x_vars;
    for (int i = 1; i <= 2 * k; ++i) xy_vars.push_back(i);
    for (int i = 1; i <= k; ++i) x_vars.push_back(i);
    std::map<int, int> shift; // exchange the x and y blocks
    for (int i = 1; i <= k; ++i) {
        shift[i] = k + i;
        shift[k + i] = i;
    }

    EncodeResult res;
    for (int t = 1; t <= spec.layers; ++t) {
        if (static_cast<int>(spec.ign_c.size()) < t || static_cast<int>(spec.ign_b.size()) < t)
            throw Error("ign_layer: missing coefficients for layer " + std::to_string(t));
        const auto& c = spec.ign_c[t - 1];
        const auto& bmu = spec.ign_b[t - 1];
        if (c.size() != pat2k.size())
            throw Error("ign_layer: coefficient table must cover all equality patterns of [2k]");
        if (bmu.size() != patk.size())
            throw Error("ign_layer: bias table must cover all equality patterns of [k]");
        std::size_t d_in = cur.size();
        std::size_t d_out = c[0][0].size();
        for (const auto& mat : c) check_mat(mat, d_in, "ign_layer c");
        std::vector<ExprPtr> shifted;
        for (const auto& f : cur) shifted.push_back(rename_all_vars(f, shift));
        std::vector<ExprPtr> next;
        for (std::size_t j = 0; j < d_out; ++j) {
            std::vector<ExprPtr> terms;
            for (std::size_t gi = 0; gi < pat2k.size(); ++gi) {
                ExprPtr body = product(pattern_indicator(pat2k[gi], xy_vars),
                                       lin_combo(c[gi], static_cast<int>(j), shifted));
                for (int y = 2 * k; y > k; --y) body = sum_agg(y, body);
                terms.push_back(body);
            }
            for (std::size_t mi = 0; mi < patk.size(); ++mi)
                terms.push_back(scale(bmu[mi][j], pattern_indicator(patk[mi], x_vars)));
            next.push_back(maybe_sigma(spec.sigma, add_fold(terms)));
        }
        cur = std::move(next);
        res.per_layer_depth.push_back(t * k);
    }
    res.bundle = std::move(cur);
    res.free_arity = k;
    return res;
}

EncodeResult encode_readout(Ctx& ctx) {
    const auto& spec = ctx.spec;
    if (!spec.inner) throw Error("readout: missing inner architecture");
    EncodeResult inner = encode(*spec.inner);
    if (inner.free_arity != 1) throw Error("readout expects a vertex architecture inside");
    ctx.fns = inner.functions; // extend the inner registry
    std::vector<ExprPtr> sums;
    for (const auto& f : inner.bundle) sums.push_back(sum_agg(1, f));
    EncodeResult res;
    if (!spec.layer_mlps.empty() && !spec.layer_mlps[0].empty()) {
        const MlpPayload& ro = spec.layer_mlps[0][0];
        if (ro.in_dim() != static_cast<int>(sums.size()))
            throw Error("readout: mlp input width mismatch");
        Ctx tmp{spec, ctx.fns};
        auto names = tmp.mlp_names("readout", ro);
        for (const auto& name : names) res.bundle.push_back(apply(name, sums));
    } else {
        res.bundle = std::move(sums);
    }
    res.free_arity = 0;
    res.per_layer_depth = inner.per_layer_depth;
    int base = res.per_layer_depth.empty() ? 0 : res.per_layer_depth.back();
    res.per_layer_depth.push_back(base + 1);
    return res;
}

bool pattern_connected(const Graph& p) {
    if (p.n() == 0) return false;
    std::vector<bool> seen(p.n(), false);
    std::vector<int> stack = {0};
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : p.neighbors(v))
            if (!seen[u]) {
                seen[u] = true;
                ++count;
                stack.push_back(u);
            }
    }
    return count == p.n();
}

EncodeResult encode_hom_count(Ctx& ctx) {
    const auto& spec = ctx.spec;
    if (!spec.pattern) throw Error("hom_count: missing pattern graph");
    const Graph& p = *spec.pattern;
    if (!pattern_connected(p)) throw Error("hom_count: pattern must be connected");
    std::vector<ExprPtr> factors;
    for (auto [u, v] : p.edges()) factors.push_back(edge_pred(u + 1, v + 1));
    ExprPtr body = product_fold(factors);
    for (int q = p.n(); q >= 2; --q) body = sum_agg(q, body);
    EncodeResult res;
    res.bundle.push_back(rewrite_min_vars(body));
    res.free_arity = 1;
    res.per_layer_depth.push_back(agg_depth(res.bundle[0]));
    return res;
}

// polynomial in M = D^{-1/2} A D^{-1/2} per Chebyshev order, with the
// maximal-eigenvalue constant replaced by cheb_c
std::vector<std::vector<Rational>> cheb_poly_coeffs(int p, const Rational& c) {
    std::vector<std::vector<Rational>> polys;
    polys.push_back({Rational(1)});                     // C^(1) = I
    if (p >= 2) polys.push_back({c - Rational(1), -c}); // C^(2) = c(I - M) - I
    for (int s = 3; s <= p; ++s) {
        const auto& c2 = polys[1];
        const auto& prev = polys[s - 2];
        const auto& prev2 = polys[s - 3];
        std::vector<Rational> next(std::max(c2.size() + prev.size() - 1, prev2.size()),
                                   Rational(0));
        for (std::size_t a = 0; a < c2.size(); ++a)
            for (std::size_t b = 0; b < prev.size(); ++b)
                next[a + b] += Rational(2) * c2[a] * prev[b];
        for (std::size_t a = 0; a < prev2.size(); ++a) next[a] -= prev2[a];
        polys.push_back(std::move(next));
    }
    return polys;
}

EncodeResult encode_chebnet(Ctx& ctx) {
    const auto& spec = ctx.spec;
    if (spec.power < 1) throw Error("chebnet: power must be >= 1");
    auto polys = cheb_poly_coeffs(spec.power, spec.cheb_c);
    std::vector<ExprPtr> cur = initial_vertex_features(spec.label_len);
    auto deg_of = [](int var) {
        return sum_agg(var == 1 ? 2 : 1, edge_pred(var, var == 1 ? 2 : 1));
    };
    // one normalized propagation step: f(deg x) * sum_y E(x,y) f(deg y) g(y)
    std::function<ExprPtr(int, int, const std::function<ExprPtr(int)>&)> mpow =
        [&](int i, int var, const std::function<ExprPtr(int)>& g) -> ExprPtr {
        if (i == 0) return g(var);
        int other = var == 1 ? 2 : 1;
        ExprPtr inner = mpow(i - 1, other, g);
        return product(apply("recip_sqrt", {deg_of(var)}),
                       sum_agg(other, product(product(edge_pred(var, other),
                                                      apply("recip_sqrt", {deg_of(other)})),
                                              inner)));
    };
    EncodeResult res;
    for (int t = 1; t <= spec.layers; ++t) {
        if (static_cast<int>(spec.poly_weights.size()) < t)
            throw Error("chebnet: missing per-order weights for layer " + std::to_string(t));
        const auto& ws = spec.poly_weights[t - 1];
        if (ws.size() != static_cast<std::size_t>(spec.power))
            throw Error("chebnet: need one weight matrix per polynomial order");
        for (const auto& w : ws) check_mat(w, cur.size(), "chebnet");
        std::size_t d_out = ws[0][0].size();
        std::vector<ExprPtr> next;
        for (std::size_t j = 0; j < d_out; ++j) {
            std::vector<ExprPtr> terms;
            for (int s = 1; s <= spec.power; ++s) {
                auto g = [&, s](int var) {
                    std::vector<ExprPtr> shifted;
                    for (const auto& f : cur) shifted.push_back(at(f, 1, var));
                    return lin_combo(ws[s - 1], static_cast<int>(j), shifted);
                };
                const auto& coeffs = polys[s - 1];
                for (std::size_t i = 0; i < coeffs.size(); ++i) {
                    if (coeffs[i].is_zero()) continue;
                    terms.push_back(scale(coeffs[i], mpow(static_cast<int>(i), 1, g)));
                }
            }
            next.push_back(maybe_sigma(spec.sigma, add_fold(terms)));
        }
        cur = std::move(next);
        res.per_layer_depth.push_back(agg_depth(cur.empty() ? one() : cur[0]));
    }
    res.bundle = std::move(cur);
    res.free_arity = 1;
    return res;
}

} // namespace

EncodeResult encode(const GnnLayerSpec& spec) {
    Ctx ctx{spec, std::make_shared<FunctionRegistry>(FunctionRegistry::builtins())};
    EncodeResult res;
    if (spec.arch == "gin")
        res = encode_gin(ctx, false);
    else if (spec.arch == "egin")
        res = encode_gin(ctx, true);
    else if (spec.arch == "gcn")
        res = encode_gcn(ctx);
    else if (spec.arch == "sgc")
        res = encode_sgc(ctx);
    else if (spec.arch == "graphsage")
        res = encode_graphsage(ctx);
    else if (spec.arch == "pna")
        res = encode_pna(ctx);
    else if (spec.arch == "fgnn_k")
        res = encode_fgnn(ctx);
    else if (spec.arch == "kgin")
        res = encode_kgin(ctx);
    else if (spec.arch == "ign_layer")
        res = encode_ign(ctx);
    else if (spec.arch == "readout")
        res = encode_readout(ctx);
    else if (spec.arch == "hom_count")
        res = encode_hom_count(ctx);
    else if (spec.arch == "chebnet")
        res = encode_chebnet(ctx);
    else
        throw Error("unknown architecture '" + spec.arch + "'");
    res.functions = ctx.fns;
    return res;
}

// ---------------------------------------------------------------------------
// dense oracle

namespace {

using DMat = std::vector<std::vector<double>>;

DMat label_matrix(const Graph& g, int label_len) {
    if (g.label_len() != label_len)
        throw Error("oracle_forward: graph has " + std::to_string(g.label_len()) +
                    " labels, spec expects " + std::to_string(label_len));
    DMat f(g.n());
    for (int v = 0; v < g.n(); ++v)
        for (const auto& r : g.label(v)) f[v].push_back(r.to_double());
    return f;
}

DMat matmul_weights(const DMat& f, const RMat& w) {
    DMat out(f.size(), std::vector<double>(w[0].size(), 0.0));
    for (std::size_t v = 0; v < f.size(); ++v)
        for (std::size_t i = 0; i < w.size(); ++i)
            for (std::size_t j = 0; j < w[0].size(); ++j)
                out[v][j] += f[v][i] * w[i][j].to_double();
    return out;
}

void apply_sigma(const std::string& sigma, DMat& f) {
    if (sigma == "id") return;
    FunctionRegistry reg = FunctionRegistry::builtins();
    const auto& fn = reg.get(sigma);
    for (auto& row : f)
        for (auto& x : row) x = fn.fnum(std::span<const double>(&x, 1));
}

DMat oracle_gin(const GnnLayerSpec& spec, const Graph& g, bool extended) {
    DMat f = label_matrix(g, spec.label_len);
    for (int t = 1; t <= spec.layers; ++t) {
        const MlpPayload& mlp = spec.layer_mlps[t - 1][0];
        DMat next(g.n());
        for (int v = 0; v < g.n(); ++v) {
            std::vector<double> args = f[v];
            std::vector<double> nb(f[0].size(), 0.0);
            for (int u : g.neighbors(v))
                for (std::size_t i = 0; i < nb.size(); ++i) nb[i] += f[u][i];
            args.insert(args.end(), nb.begin(), nb.end());
            if (extended) {
                std::vector<double> all(f[0].size(), 0.0);
                for (int u = 0; u < g.n(); ++u)
                    for (std::size_t i = 0; i < all.size(); ++i) all[i] += f[u][i];
                args.insert(args.end(), all.begin(), all.end());
            }
            next[v] = mlp.forward(args);
        }
        f = std::move(next);
    }
    return f;
}

DMat oracle_gcn(const GnnLayerSpec& spec, const Graph& g) {
    DMat f = label_matrix(g, spec.label_len);
    for (int t = 1; t <= spec.layers; ++t) {
        DMat fw = matmul_weights(f, spec.weights[t - 1]);
        DMat next(g.n(), std::vector<double>(fw[0].size(), 0.0));
        for (int v = 0; v < g.n(); ++v) {
            double dv = 1.0 / std::sqrt(g.degree(v) + 1.0);
            for (std::size_t j = 0; j < fw[0].size(); ++j) {
                double acc = dv * dv * fw[v][j];
                for (int u : g.neighbors(v))
                    acc += dv * (1.0 / std::sqrt(g.degree(u) + 1.0)) * fw[u][j];
                if (static_cast<int>(spec.bias.size()) >= t && !spec.bias[t - 1].empty())
                    acc += spec.bias[t - 1][j].to_double();
                next[v][j] = acc;
            }
        }
        apply_sigma(spec.sigma, next);
        f = std::move(next);
    }
    return f;
}

DMat oracle_sgc(const GnnLayerSpec& spec, const Graph& g) {
    DMat f = label_matrix(g, spec.label_len);
    for (int q = 0; q < spec.power; ++q) {
        DMat next(g.n(), std::vector<double>(f[0].size(), 0.0));
        for (int v = 0; v < g.n(); ++v)
            for (int u : g.neighbors(v))
                for (std::size_t i = 0; i < f[0].size(); ++i) next[v][i] += f[u][i];
        f = std::move(next);
    }
    DMat out = matmul_weights(f, spec.weights[0]);
    apply_sigma(spec.sigma, out);
    return out;
}

DMat oracle_graphsage(const GnnLayerSpec& spec, const Graph& g) {
    AggregationRegistry aggs = AggregationRegistry::builtins();
    const auto& agg = aggs.get(spec.aggregator);
    DMat f = label_matrix(g, spec.label_len);
    for (int t = 1; t <= spec.layers; ++t) {
        DMat fv = matmul_weights(f, spec.weights2[t - 1]);
        DMat ag(g.n(), std::vector<double>(f[0].size(), 0.0));
        for (int v = 0; v < g.n(); ++v) {
            for (std::size_t i = 0; i < f[0].size(); ++i) {
                std::vector<double> xs;
                for (int u : g.neighbors(v)) xs.push_back(f[u][i]);
                if (xs.empty() && !agg.empty_ok)
                    throw Error("graphsage oracle: empty neighborhood");
                ag[v][i] = agg.fnum(xs);
            }
        }
        DMat aw = matmul_weights(ag, spec.weights[t - 1]);
        DMat next(g.n(), std::vector<double>(fv[0].size(), 0.0));
        for (int v = 0; v < g.n(); ++v)
            for (std::size_t j = 0; j < fv[0].size(); ++j) {
                next[v][j] = fv[v][j] + aw[v][j];
                if (static_cast<int>(spec.bias.size()) >= t && !spec.bias[t - 1].empty())
                    next[v][j] += spec.bias[t - 1][j].to_double();
            }
        apply_sigma(spec.sigma, next);
        f = std::move(next);
    }
    return f;
}

DMat oracle_pna(const GnnLayerSpec& spec, const Graph& g) {
    AggregationRegistry aggs = AggregationRegistry::builtins();
    FunctionRegistry fns = FunctionRegistry::builtins();
    DMat f = label_matrix(g, spec.label_len);
    const char* agg_names[4] = {"mean", "stdv", "max", "min"};
    for (int t = 1; t <= spec.layers; ++t) {
        const MlpPayload& pre = spec.layer_mlps[t - 1][0];
        const MlpPayload& outm = spec.layer_mlps[t - 1][1];
        std::size_t d = static_cast<std::size_t>(pre.out_dim());
        DMat next(g.n());
        for (int v = 0; v < g.n(); ++v) {
            std::vector<std::vector<double>> nbr_feats;
            for (int u : g.neighbors(v)) nbr_feats.push_back(pre.forward(f[u]));
            if (nbr_feats.empty()) throw Error("pna oracle: empty neighborhood");
            std::vector<double> psi;
            for (const char* an : agg_names) {
                const auto& agg = aggs.get(an);
                for (std::size_t j = 0; j < d; ++j) {
                    std::vector<double> xs;
                    for (const auto& nf : nbr_feats) xs.push_back(nf[j]);
                    psi.push_back(agg.fnum(xs));
                }
            }
            double deg = g.degree(v);
            double s1 = fns.get(spec.scaler_1).fnum(std::span<const double>(&deg, 1));
            double s2 = fns.get(spec.scaler_2).fnum(std::span<const double>(&deg, 1));
            std::vector<double> xi = psi;
            for (double p : psi) xi.push_back(s1 * p);
            for (double p : psi) xi.push_back(s2 * p);
            next[v] = outm.forward(xi);
        }
        f = std::move(next);
    }
    return f;
}

std::vector<std::vector<int>> all_tuples(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> t(k, 0);
    while (true) {
        out.push_back(t);
        int p = k - 1;
        while (p >= 0 && ++t[p] == n) t[p--] = 0;
        if (p < 0) break;
    }
    return out;
}

std::size_t tuple_idx(const std::vector<int>& t, int n) {
    std::size_t idx = 0;
    for (int v : t) idx = idx * n + v;
    return idx;
}

DMat fgnn_initial_oracle(const Graph& g, int k, int label_len) {
    auto tuples = all_tuples(g.n(), k);
    DMat f(tuples.size());
    for (std::size_t ti = 0; ti < tuples.size(); ++ti) {
        const auto& tp = tuples[ti];
        for (int r = 0; r < k; ++r)
            for (int s = 0; s < k; ++s) {
                for (int j = 0; j < label_len; ++j)
                    f[ti].push_back(tp[r] == tp[s] ? g.label(tp[r])[j].to_double() : 0.0);
                f[ti].push_back(g.adjacent(tp[r], tp[s]) ? 1.0 : 0.0);
                f[ti].push_back(tp[r] == tp[s] ? 1.0 : 0.0);
            }
    }
    return f;
}

DMat oracle_fgnn(const GnnLayerSpec& spec, const Graph& g) {
    const int k = spec.k;
    DMat f = fgnn_initial_oracle(g, k, spec.label_len);
    auto tuples = all_tuples(g.n(), k);
    for (int t = 1; t <= spec.layers; ++t) {
        const auto& ms = spec.layer_mlps[t - 1];
        int b = ms[1].out_dim();
        DMat next(tuples.size());
        for (std::size_t ti = 0; ti < tuples.size(); ++ti) {
            std::vector<double> inner(b, 0.0);
            std::vector<int> tp = tuples[ti];
            for (int w = 0; w < g.n(); ++w) {
                std::vector<double> prod(b, 1.0);
                for (int s = 1; s <= k; ++s) {
                    int saved = tp[s - 1];
                    tp[s - 1] = w;
                    auto vals = ms[s].forward(f[tuple_idx(tp, g.n())]);
                    tp[s - 1] = saved;
                    for (int jp = 0; jp < b; ++jp) prod[jp] *= vals[jp];
                }
                for (int jp = 0; jp < b; ++jp) inner[jp] += prod[jp];
            }
            std::vector<double> args = f[ti];
            args.insert(args.end(), inner.begin(), inner.end());
            next[ti] = ms[0].forward(args);
        }
        f = std::move(next);
    }
    return f;
}

DMat atp_initial_oracle(const Graph& g, int k, int label_len) {
    auto tuples = all_tuples(g.n(), k);
    DMat f(tuples.size());
    for (std::size_t ti = 0; ti < tuples.size(); ++ti) {
        const auto& tp = tuples[ti];
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) f[ti].push_back(tp[i] == tp[j] ? 1.0 : 0.0);
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                f[ti].push_back(g.adjacent(tp[i], tp[j]) ? 1.0 : 0.0);
        for (int i = 0; i < k; ++i)
            for (int s = 0; s < label_len; ++s) f[ti].push_back(g.label(tp[i])[s].to_double());
    }
    return f;
}

DMat oracle_kgin(const GnnLayerSpec& spec, const Graph& g) {
    const int k = spec.k;
    DMat f = atp_initial_oracle(g, k, spec.label_len);
    auto tuples = all_tuples(g.n(), k);
    for (int t = 1; t <= spec.layers; ++t) {
        const auto& ms = spec.layer_mlps[t - 1];
        int b = ms[1].out_dim();
        DMat next(tuples.size());
        for (std::size_t ti = 0; ti < tuples.size(); ++ti) {
            std::vector<double> args = f[ti];
            std::vector<int> tp = tuples[ti];
            for (int s = 1; s <= k; ++s) {
                std::vector<double> block(b, 0.0);
                int saved = tp[s - 1];
                for (int u = 0; u < g.n(); ++u) {
                    tp[s - 1] = u;
                    auto vals = ms[1].forward(f[tuple_idx(tp, g.n())]);
                    for (int jp = 0; jp < b; ++jp) block[jp] += vals[jp];
                }
                tp[s - 1] = saved;
                args.insert(args.end(), block.begin(), block.end());
            }
            next[ti] = ms[0].forward(args);
        }
        f = std::move(next);
    }
    return f;
}

bool tuple_in_pattern(const std::vector<int>& tup, const std::vector<int>& blocks) {
    for (std::size_t a = 0; a < tup.size(); ++a)
        for (std::size_t b = a + 1; b < tup.size(); ++b)
            if ((tup[a] == tup[b]) != (blocks[a] == blocks[b])) return false;
    return true;
}

DMat oracle_ign(const GnnLayerSpec& spec, const Graph& g) {
    const int k = spec.k;
    DMat f = atp_initial_oracle(g, k, spec.label_len);
    auto tuples = all_tuples(g.n(), k);
    auto pat2k = equality_patterns(2 * k);
    auto patk = equality_patterns(k);
    for (int t = 1; t <= spec.layers; ++t) {
        const auto& c = spec.ign_c[t - 1];
        const auto& bmu = spec.ign_b[t - 1];
        std::size_t d_out = c[0][0].size();
        DMat next(tuples.size(), std::vector<double>(d_out, 0.0));
        for (std::size_t vi = 0; vi < tuples.size(); ++vi) {
            std::vector<int> vw(2 * k);
            std::copy(tuples[vi].begin(), tuples[vi].end(), vw.begin());
            for (std::size_t wi = 0; wi < tuples.size(); ++wi) {
                std::copy(tuples[wi].begin(), tuples[wi].end(), vw.begin() + k);
                for (std::size_t gi = 0; gi < pat2k.size(); ++gi) {
                    if (!tuple_in_pattern(vw, pat2k[gi])) continue;
                    for (std::size_t j = 0; j < d_out; ++j) {
                        double acc = 0;
                        for (std::size_t i = 0; i < f[wi].size(); ++i)
                            acc += c[gi][i][j].to_double() * f[wi][i];
                        next[vi][j] += acc;
                    }
                }
            }
            for (std::size_t mi = 0; mi < patk.size(); ++mi) {
                if (!tuple_in_pattern(tuples[vi], patk[mi])) continue;
                for (std::size_t j = 0; j < d_out; ++j) next[vi][j] += bmu[mi][j].to_double();
            }
        }
        apply_sigma(spec.sigma, next);
        f = std::move(next);
    }
    return f;
}

DMat oracle_readout(const GnnLayerSpec& spec, const Graph& g) {
    DMat inner = oracle_forward(*spec.inner, g);
    std::vector<double> sums(inner.empty() ? 0 : inner[0].size(), 0.0);
    for (const auto& row : inner)
        for (std::size_t j = 0; j < row.size(); ++j) sums[j] += row[j];
    if (!spec.layer_mlps.empty() && !spec.layer_mlps[0].empty())
        return {spec.layer_mlps[0][0].forward(sums)};
    return {sums};
}

long long hom_count_brute(const Graph& p, const Graph& g, int root_image) {
    std::vector<int> map(p.n(), -1);
    map[0] = root_image;
    std::function<long long(int)> rec = [&](int next) -> long long {
        if (next == p.n()) {
            for (auto [u, v] : p.edges())
                if (!g.adjacent(map[u], map[v])) return 0;
            return 1;
        }
        long long acc = 0;
        for (int img = 0; img < g.n(); ++img) {
            map[next] = img;
            acc += rec(next + 1);
        }
        return acc;
    };
    return rec(1);
}

DMat oracle_hom_count(const GnnLayerSpec& spec, const Graph& g) {
    DMat out(g.n(), std::vector<double>(1, 0.0));
    for (int v = 0; v < g.n(); ++v)
        out[v][0] = static_cast<double>(hom_count_brute(*spec.pattern, g, v));
    return out;
}

DMat oracle_chebnet(const GnnLayerSpec& spec, const Graph& g) {
    const int n = g.n();
    for (int v = 0; v < n; ++v)
        if (g.degree(v) == 0) throw Error("chebnet oracle: zero-degree vertex (pole)");
    DMat m(n, std::vector<double>(n, 0.0));
    for (int v = 0; v < n; ++v)
        for (int u : g.neighbors(v))
            m[v][u] = 1.0 / std::sqrt(static_cast<double>(g.degree(v)) * g.degree(u));
    auto matmul = [&](const DMat& a, const DMat& b) {
        DMat out(a.size(), std::vector<double>(b[0].size(), 0.0));
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t q = 0; q < b.size(); ++q)
                for (std::size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][q] * b[q][j];
        return out;
    };
    // Chebyshev recurrence on the matrices directly, independent of the
    // polynomial-expansion route used by encode
    std::vector<DMat> cs;
    DMat id(n, std::vector<double>(n, 0.0));
    for (int v = 0; v < n; ++v) id[v][v] = 1.0;
    cs.push_back(id);
    if (spec.power >= 2) {
        DMat c2(n, std::vector<double>(n, 0.0));
        double c = spec.cheb_c.to_double();
        for (int v = 0; v < n; ++v)
            for (int u = 0; u < n; ++u)
                c2[v][u] = c * ((v == u ? 1.0 : 0.0) - m[v][u]) - (v == u ? 1.0 : 0.0);
        cs.push_back(c2);
    }
    for (int s = 3; s <= spec.power; ++s) {
        DMat next = matmul(cs[1], cs[s - 2]);
        for (int v = 0; v < n; ++v)
            for (int u = 0; u < n; ++u) next[v][u] = 2.0 * next[v][u] - cs[s - 3][v][u];
        cs.push_back(next);
    }
    DMat f = label_matrix(g, spec.label_len);
    for (int t = 1; t <= spec.layers; ++t) {
        const auto& ws = spec.poly_weights[t - 1];
        DMat acc;
        for (int s = 1; s <= spec.power; ++s) {
            DMat term = matmul(cs[s - 1], matmul_weights(f, ws[s - 1]));
            if (acc.empty())
                acc = std::move(term);
            else
                for (std::size_t v = 0; v < acc.size(); ++v)
                    for (std::size_t j = 0; j < acc[0].size(); ++j) acc[v][j] += term[v][j];
        }
        apply_sigma(spec.sigma, acc);
        f = std::move(acc);
    }
    return f;
}

} // namespace

std::vector<std::vector<double>> oracle_forward(const GnnLayerSpec& spec, const Graph& g) {
    if (spec.arch == "gin") return oracle_gin(spec, g, false);
    if (spec.arch == "egin") return oracle_gin(spec, g, true);
    if (spec.arch == "gcn") return oracle_gcn(spec, g);
    if (spec.arch == "sgc") return oracle_sgc(spec, g);
    if (spec.arch == "graphsage") return oracle_graphsage(spec, g);
    if (spec.arch == "pna") return oracle_pna(spec, g);
    if (spec.arch == "fgnn_k") return oracle_fgnn(spec, g);
    if (spec.arch == "kgin") return oracle_kgin(spec, g);
    if (spec.arch == "ign_layer") return oracle_ign(spec, g);
    if (spec.arch == "readout") return oracle_readout(spec, g);
    if (spec.arch == "hom_count") return oracle_hom_count(spec, g);
    if (spec.arch == "chebnet") return oracle_chebnet(spec, g);
    throw Error("unknown architecture '" + spec.arch + "'");
}

BoundReport bound_report(const std::vector<ExprPtr>& bundle,
                         const std::vector<int>& per_layer_depth) {
    if (bundle.empty()) throw Error("bound_report: empty bundle");
    BoundReport rep;
    rep.per_layer_depth = per_layer_depth;
    std::set<int> frees;
    bool all_guarded = true;
    bool opt_guarded = true; // guardedness after the variable-minimizing rewrite
    for (const auto& e : bundle) {
        auto a = analyze(e);
        rep.var_count = std::max(rep.var_count, a.var_count);
        rep.sum_depth = std::max(rep.sum_depth, a.sum_depth);
        rep.agg_depth = std::max(rep.agg_depth, a.agg_depth);
        frees.insert(a.free_vars.begin(), a.free_vars.end());
        all_guarded = all_guarded && a.guarded;
        auto opt = rewrite_min_vars(e);
        rep.opt_var_count = std::max(rep.opt_var_count, static_cast<int>(all_vars(opt).size()));
        opt_guarded = opt_guarded && analyze(opt).guarded;
    }
    rep.guarded = all_guarded;
    rep.free_arity = frees.empty() ? 0 : *frees.rbegin();
    const int t = rep.agg_depth;
    const int v = std::max(rep.opt_var_count, 1);
    const bool guarded_somewhere = all_guarded || opt_guarded;
    if (rep.free_arity == 0) {
        if (v <= 2) {
            rep.bound_k = 1;
            rep.bound_t = std::max(t - 1, 0);
            rep.bound = "gcr^(" + std::to_string(rep.bound_t) + ")";
        } else {
            rep.bound_k = v - 1;
            rep.bound_t = -1;
            rep.bound = "gwl_" + std::to_string(v - 1) + "^(inf)";
        }
    } else if (guarded_somewhere) {
        rep.bound_k = 1;
        rep.bound_t = t;
        rep.bound = "cr^(" + std::to_string(t) + ")";
    } else {
        rep.bound_k = std::max(v - 1, 1);
        rep.bound_t = t;
        rep.bound = "vwl_" + std::to_string(rep.bound_k) + "^(" + std::to_string(t) + ")";
    }
    return rep;
}

// ---------------------------------------------------------------------------
// JSON loading

namespace {

using nlohmann::json;

Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number_unsigned())
        return Rational(static_cast<long long>(j.get<unsigned long long>()));
    if (j.is_number_float()) return Rational::parse(j.dump());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw Error("gnn spec: expected a number");
}

RMat rmat_from_json(const json& j) {
    RMat m;
    for (const auto& row : j) {
        std::vector<Rational> r;
        for (const auto& x : row) r.push_back(rational_from_json(x));
        m.push_back(std::move(r));
    }
    return m;
}

GnnLayerSpec spec_from_json(const json& j) {
    GnnLayerSpec s;
    if (!j.contains("arch")) throw Error("gnn spec: missing \"arch\"");
    s.arch = j["arch"].get<std::string>();
    s.layers = j.value("layers", 1);
    s.k = j.value("k", 2);
    s.power = j.value("power", 3);
    s.label_len = j.value("label_len", 1);
    s.sigma = j.value("sigma", "id");
    s.aggregator = j.value("aggregator", "sum");
    s.scaler_1 = j.value("scaler_1", "identity");
    s.scaler_2 = j.value("scaler_2", "identity");
    if (j.contains("cheb_c")) s.cheb_c = rational_from_json(j["cheb_c"]);
    if (j.contains("mlps"))
        for (const auto& layer : j["mlps"]) {
            std::vector<MlpPayload> ms;
            for (const auto& m : layer) ms.push_back(MlpPayload::from_json_text(m.dump()));
            s.layer_mlps.push_back(std::move(ms));
        }
    if (j.contains("weights"))
        for (const auto& w : j["weights"]) s.weights.push_back(rmat_from_json(w));
    if (j.contains("weights2"))
        for (const auto& w : j["weights2"]) s.weights2.push_back(rmat_from_json(w));
    if (j.contains("bias"))
        for (const auto& b : j["bias"]) {
            std::vector<Rational> row;
            for (const auto& x : b) row.push_back(rational_from_json(x));
            s.bias.push_back(std::move(row));
        }
    if (j.contains("poly_weights"))
        for (const auto& layer : j["poly_weights"]) {
            std::vector<RMat> ws;
            for (const auto& w : layer) ws.push_back(rmat_from_json(w));
            s.poly_weights.push_back(std::move(ws));
        }
    if (j.contains("ign_c"))
        for (const auto& layer : j["ign_c"]) {
            std::vector<RMat> cs;
            for (const auto& c : layer) cs.push_back(rmat_from_json(c));
            s.ign_c.push_back(std::move(cs));
        }
    if (j.contains("ign_b"))
        for (const auto& layer : j["ign_b"]) {
            std::vector<std::vector<Rational>> bs;
            for (const auto& b : layer) {
                std::vector<Rational> row;
                for (const auto& x : b) row.push_back(rational_from_json(x));
                bs.push_back(std::move(row));
            }
            s.ign_b.push_back(std::move(bs));
        }
    if (j.contains("pattern")) {
        const auto& p = j["pattern"];
        std::vector<std::pair<int, int>> edges;
        for (const auto& e : p["edges"]) edges.emplace_back(e[0].get<int>(), e[1].get<int>());
        s.pattern = Graph(p["n"].get<int>(), std::move(edges));
    }
    if (j.contains("inner")) s.inner = std::make_shared<GnnLayerSpec>(spec_from_json(j["inner"]));
    return s;
}

} // namespace

GnnLayerSpec GnnLayerSpec::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(std::string("gnn spec: malformed JSON: ") + e.what());
    }
    return spec_from_json(j);
}

} // namespace tl
