#include "tl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "tl/analysis.hpp"
#include "tl/error.hpp"
#include "tl/logic.hpp"
#include "tl/parser.hpp"
#include "tl/wl.hpp"

namespace tl {

bool Partition::operator==(const Partition& o) const {
    if (!same_items(o) || num_classes != o.num_classes) return false;
    // equal as partitions: the class maps agree up to a bijection of ids
    std::map<int, int> fwd, bwd;
    for (std::size_t i = 0; i < class_of.size(); ++i) {
        auto f = fwd.emplace(class_of[i], o.class_of[i]);
        if (!f.second && f.first->second != o.class_of[i]) return false;
        auto b = bwd.emplace(o.class_of[i], class_of[i]);
        if (!b.second && b.first->second != class_of[i]) return false;
    }
    return true;
}

namespace {

void check_equal_sizes(const std::vector<Graph>& corpus) {
    for (const auto& g : corpus)
        if (g.n() != corpus[0].n())
            throw Error("separation harness requires graphs of equal size");
}

std::vector<std::pair<int, int>> corpus_items(const std::vector<Graph>& corpus, int arity) {
    std::vector<std::pair<int, int>> items;
    for (std::size_t gi = 0; gi < corpus.size(); ++gi) {
        if (arity == 0)
            items.emplace_back(static_cast<int>(gi), -1);
        else
            for (int v = 0; v < corpus[gi].n(); ++v) items.emplace_back(static_cast<int>(gi), v);
    }
    return items;
}

} // namespace

Partition induced_partition(const std::vector<ExprPtr>& exprs, const std::vector<Graph>& corpus,
                            int arity, EvalMode mode, const EvalContext& ctx) {
    if (corpus.empty()) throw Error("induced_partition: empty corpus");
    check_equal_sizes(corpus);
    if (arity != 0 && arity != 1) throw Error("induced_partition: arity must be 0 or 1");
    for (const auto& e : exprs)
        for (int v : free_vars(e))
            if (v > arity)
                throw Error("induced_partition: expression uses free variable x" +
                            std::to_string(v) + " beyond arity " + std::to_string(arity));

    Partition p;
    p.arity = arity;
    p.items = corpus_items(corpus, arity);
    p.class_of.assign(p.items.size(), 0);

    if (mode == EvalMode::Exact) {
        std::map<std::vector<std::string>, int> classes;
        for (std::size_t ii = 0; ii < p.items.size(); ++ii) {
            auto [gi, v] = p.items[ii];
            Valuation nu;
            if (arity == 1) nu.bind(1, v);
            std::vector<std::string> key;
            key.reserve(exprs.size());
            for (const auto& e : exprs) key.push_back(evaluate_exact(e, corpus[gi], nu, ctx).str());
            auto it = classes.emplace(std::move(key), static_cast<int>(classes.size())).first;
            p.class_of[ii] = it->second;
        }
        p.num_classes = static_cast<int>(classes.size());
        return p;
    }

    // float mode: union items whose value vectors agree within 1e-9, closed
    // transitively
    std::vector<std::vector<double>> vals(p.items.size());
    for (std::size_t ii = 0; ii < p.items.size(); ++ii) {
        auto [gi, v] = p.items[ii];
        Valuation nu;
        if (arity == 1) nu.bind(1, v);
        for (const auto& e : exprs) vals[ii].push_back(evaluate_float(e, corpus[gi], nu, ctx));
    }
    std::vector<int> parent(p.items.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t a = 0; a < vals.size(); ++a)
        for (std::size_t b = a + 1; b < vals.size(); ++b) {
            bool close = true;
            for (std::size_t c = 0; c < vals[a].size() && close; ++c)
                if (std::abs(vals[a][c] - vals[b][c]) > 1e-9) close = false;
            if (close) parent[find(static_cast<int>(a))] = find(static_cast<int>(b));
        }
    std::map<int, int> remap;
    for (std::size_t i = 0; i < p.items.size(); ++i) {
        int root = find(static_cast<int>(i));
        auto it = remap.emplace(root, static_cast<int>(remap.size())).first;
        p.class_of[i] = it->second;
    }
    p.num_classes = static_cast<int>(remap.size());
    return p;
}

Partition wl_partition(const std::vector<Graph>& corpus, const std::string& algo, int k, int t,
                       int arity) {
    if (corpus.empty()) throw Error("wl_partition: empty corpus");
    check_equal_sizes(corpus);
    Partition p;
    p.arity = arity;
    p.items = corpus_items(corpus, arity);
    std::vector<int> labels;
    for (const auto& g : corpus) {
        RefinementTrace tr = algo == "cr" ? color_refinement(g, std::max(t, g.n()))
                                          : wl_k(g, k, std::max(t, 1));
        if (arity == 0) {
            labels.push_back(tr.graph_label(t));
        } else {
            for (int v = 0; v < g.n(); ++v)
                labels.push_back(algo == "cr" ? tr.label_at(v, t) : tr.vertex_label(v, t));
        }
    }
    std::map<int, int> remap;
    for (int id : labels) {
        auto it = remap.emplace(id, static_cast<int>(remap.size())).first;
        p.class_of.push_back(it->second);
    }
    p.num_classes = static_cast<int>(remap.size());
    return p;
}

bool refines(const Partition& p, const Partition& q) {
    if (!p.same_items(q)) throw Error("refines: partitions over different item sets");
    std::map<int, int> into;
    for (std::size_t i = 0; i < p.class_of.size(); ++i) {
        auto it = into.emplace(p.class_of[i], q.class_of[i]);
        if (!it.second && it.first->second != q.class_of[i]) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// random expressions

namespace {

const Rational kCoeffs[6] = {Rational(-2), Rational(-1), Rational(-1, 2),
                             Rational(1, 2), Rational(1), Rational(2)};

class ExprSampler {
public:
    ExprSampler(int k_vars, int label_len, std::mt19937_64& rng)
        : k_vars_(k_vars), label_len_(label_len), rng_(rng) {}

    // free variables within `avail`; depth_left bounds summation nesting
    ExprPtr unguarded(std::vector<int> avail, int depth_left, int size_budget) {
        bool can_leaf = !avail.empty() || label_len_ >= 0;
        bool must_leaf = size_budget <= 1;
        int roll = static_cast<int>(rng_() % 100);
        if (!must_leaf && depth_left > 0 && roll < 35) {
            // summation over a possibly-shadowing variable
            int var = 1 + static_cast<int>(rng_() % k_vars_);
            std::vector<int> inner = avail;
            if (std::find(inner.begin(), inner.end(), var) == inner.end()) inner.push_back(var);
            return sum_agg(var, unguarded(inner, depth_left - 1, size_budget - 1));
        }
        if (!must_leaf && roll < 60) {
            int half = std::max(1, size_budget / 2);
            auto l = unguarded(avail, depth_left, half);
            auto r = unguarded(avail, depth_left, size_budget - half);
            return rng_() % 2 ? product(l, r) : add(l, r);
        }
        if (!must_leaf && roll < 70)
            return scale(kCoeffs[rng_() % 6], unguarded(avail, depth_left, size_budget - 1));
        (void)can_leaf;
        return leaf(avail);
    }

    // the guarded two-variable fragment, current free variable `cur`
    ExprPtr guarded(int cur, int depth_left, int size_budget) {
        bool must_leaf = size_budget <= 1;
        int roll = static_cast<int>(rng_() % 100);
        if (!must_leaf && depth_left > 0 && roll < 35) {
            int other = 3 - cur;
            if (rng_() % 4 == 0) return sum_agg(other, edge_pred(cur, other)); // bare guard
            return sum_agg(other, product(edge_pred(cur, other),
                                          guarded(other, depth_left - 1, size_budget - 1)));
        }
        if (!must_leaf && roll < 60) {
            int half = std::max(1, size_budget / 2);
            auto l = guarded(cur, depth_left, half);
            auto r = guarded(cur, depth_left, size_budget - half);
            return rng_() % 2 ? product(l, r) : add(l, r);
        }
        if (!must_leaf && roll < 70)
            return scale(kCoeffs[rng_() % 6], guarded(cur, depth_left, size_budget - 1));
        switch (rng_() % (label_len_ > 0 ? 4 : 3)) {
        case 0:
            return one();
        case 1:
            return eq_pred(cur, cur);
        case 2:
            return eq_pred(cur, cur, true);
        default:
            return label_pred(1 + static_cast<int>(rng_() % label_len_), cur);
        }
    }

private:
    int k_vars_;
    int label_len_;
    std::mt19937_64& rng_;

    ExprPtr leaf(const std::vector<int>& avail) {
        if (avail.empty()) return one();
        int a = avail[rng_() % avail.size()];
        int b = avail[rng_() % avail.size()];
        switch (rng_() % (label_len_ > 0 ? 4 : 3)) {
        case 0:
            return a == b ? one() : edge_pred(a, b);
        case 1:
            return eq_pred(a, b, rng_() % 2 == 0);
        case 2:
            return one();
        default:
            return label_pred(1 + static_cast<int>(rng_() % label_len_), a);
        }
    }
};

} // namespace

ExprPtr random_expr(int k_vars, int depth, bool guarded, std::uint64_t seed, int label_len,
                    bool closed) {
    if (guarded && k_vars != 2) throw Error("guarded sampling requires k_vars == 2");
    if (k_vars < 1) throw Error("random_expr: k_vars must be >= 1");
    std::mt19937_64 rng(seed);
    ExprSampler sampler(k_vars, label_len, rng);
    int size_budget = 6 + static_cast<int>(rng() % 10);
    if (guarded) {
        ExprPtr e = sampler.guarded(1, depth, size_budget);
        if (closed) e = sum_agg(1, e);
        return e;
    }
    if (closed) {
        // start under a top summation so every leaf is bound
        int var = 1 + static_cast<int>(rng() % k_vars);
        return sum_agg(var, sampler.unguarded({var}, depth - 1 < 0 ? 0 : depth - 1,
                                              size_budget));
    }
    return sampler.unguarded({1}, depth, size_budget);
}

// ---------------------------------------------------------------------------
// theorem checks

namespace {

std::string item_name(const std::vector<Graph>& corpus, std::pair<int, int> item) {
    (void)corpus;
    if (item.second < 0) return "graph#" + std::to_string(item.first);
    return "graph#" + std::to_string(item.first) + ":v" + std::to_string(item.second);
}

// upper-bound direction: wl-equal items must get equal values under every
// sampled expression
void check_upper_bound(CheckReport& rep, const std::vector<Graph>& corpus,
                       const Partition& wl_part, const std::vector<ExprPtr>& exprs, int arity) {
    Partition expr_part = induced_partition(exprs, corpus, arity, EvalMode::Exact);
    rep.exprs_sampled = static_cast<int>(exprs.size());
    // count item pairs inside wl classes
    std::map<int, long long> class_sizes;
    for (int c : wl_part.class_of) ++class_sizes[c];
    for (const auto& [c, s] : class_sizes) rep.pairs_checked += s * (s - 1) / 2;
    if (refines(wl_part, expr_part)) return;
    // locate witnesses
    for (std::size_t a = 0; a < wl_part.items.size(); ++a) {
        for (std::size_t b = a + 1; b < wl_part.items.size(); ++b) {
            if (wl_part.class_of[a] != wl_part.class_of[b]) continue;
            if (expr_part.class_of[a] == expr_part.class_of[b]) continue;
            // find the separating expression
            for (const auto& e : exprs) {
                auto [ga, va] = wl_part.items[a];
                auto [gb, vb] = wl_part.items[b];
                Valuation na, nb;
                if (arity == 1) {
                    na.bind(1, va);
                    nb.bind(1, vb);
                }
                Rational x = evaluate_exact(e, corpus[ga], na);
                Rational y = evaluate_exact(e, corpus[gb], nb);
                if (x != y) {
                    Violation viol;
                    viol.expr = render(e);
                    viol.item_a = item_name(corpus, wl_part.items[a]);
                    viol.item_b = item_name(corpus, wl_part.items[b]);
                    viol.value_a = x.str();
                    viol.value_b = y.str();
                    viol.note = "wl-equal pair separated by a sampled expression";
                    rep.violations.push_back(std::move(viol));
                    if (rep.violations.size() >= 20) return;
                    break;
                }
            }
        }
    }
}

// lower-bound direction of the color-refinement theorem: for every pair of
// items with different round-t colors, the synthesized distinguisher must
// land them in different induced classes. Verified color-class-wise: the
// distinguisher of a color evaluates to 1 exactly on the items of that color.
void check_cr_lower_bound(CheckReport& rep, const std::vector<Graph>& corpus, int t) {
    struct Item {
        int gi, v, color;
    };
    std::vector<Item> items;
    std::vector<RefinementTrace> traces;
    for (std::size_t gi = 0; gi < corpus.size(); ++gi)
        traces.push_back(color_refinement(corpus[gi], std::max<int>(t, corpus[gi].n())));
    for (std::size_t gi = 0; gi < corpus.size(); ++gi)
        for (int v = 0; v < corpus[gi].n(); ++v)
            items.push_back({static_cast<int>(gi), v, traces[gi].label_at(v, t)});

    std::map<int, std::vector<std::size_t>> by_color;
    for (std::size_t i = 0; i < items.size(); ++i) by_color[items[i].color].push_back(i);

    // pairs with differing colors, accounted once
    long long total = static_cast<long long>(items.size()) * (items.size() - 1) / 2;
    for (const auto& [c, members] : by_color)
        total -= static_cast<long long>(members.size()) * (members.size() - 1) / 2;
    rep.pairs_checked += total;

    for (const auto& [color, members] : by_color) {
        if (by_color.size() == 1) break; // nothing to distinguish
        const Item& repitem = items[members.front()];
        // any item of a different color serves as the counterpart
        const Item* other = nullptr;
        for (const auto& it : items)
            if (it.color != color) {
                other = &it;
                break;
            }
        auto expr = synthesize_cr_distinguisher(corpus[repitem.gi], repitem.v, corpus[other->gi],
                                                other->v, t);
        if (!expr) {
            Violation viol;
            viol.item_a = item_name(corpus, {repitem.gi, repitem.v});
            viol.item_b = item_name(corpus, {other->gi, other->v});
            viol.note = "synthesis returned none for a cr-separated pair";
            rep.violations.push_back(std::move(viol));
            continue;
        }
        // the characterization must hold on every item of the corpus
        std::vector<ExactEvalCache> caches;
        for (const auto& g : corpus) caches.emplace_back(g);
        for (const auto& it : items) {
            Rational got = caches[it.gi].eval(*expr, Valuation{{1, it.v}});
            Rational want(it.color == color ? 1 : 0);
            if (got != want) {
                Violation viol;
                viol.expr = render(*expr);
                viol.item_a = item_name(corpus, {repitem.gi, repitem.v});
                viol.item_b = item_name(corpus, {it.gi, it.v});
                viol.value_a = want.str();
                viol.value_b = got.str();
                viol.note = "distinguisher failed to characterize its color";
                rep.violations.push_back(std::move(viol));
                if (rep.violations.size() >= 20) return;
            }
        }
    }
}

} // namespace

CheckReport check_theorem(const std::string& tag, const std::vector<Graph>& corpus, int k, int t,
                          int n_exprs, std::uint64_t seed) {
    if (corpus.empty()) throw Error("check_theorem: empty corpus");
    check_equal_sizes(corpus);
    int label_len = corpus[0].label_len();
    for (const auto& g : corpus)
        if (g.label_len() != label_len) throw Error("check_theorem: mixed label lengths");

    CheckReport rep;
    rep.theorem = tag;
    std::mt19937_64 seeder(seed);

    if (tag == "thm2") {
        Partition wl = wl_partition(corpus, "wl", k, t, 1);
        std::vector<ExprPtr> exprs;
        for (int i = 0; i < n_exprs; ++i)
            exprs.push_back(random_expr(k + 1, t, false, seeder(), label_len));
        check_upper_bound(rep, corpus, wl, exprs, 1);
        return rep;
    }
    if (tag == "thm3") {
        Partition cr = wl_partition(corpus, "cr", 1, t, 1);
        std::vector<ExprPtr> exprs;
        for (int i = 0; i < n_exprs; ++i)
            exprs.push_back(random_expr(2, t, true, seeder(), label_len));
        check_upper_bound(rep, corpus, cr, exprs, 1);
        check_cr_lower_bound(rep, corpus, t);
        return rep;
    }
    if (tag == "thm4_1") {
        Partition gcr = wl_partition(corpus, "cr", 1, t, 0);
        Partition gwl1 = wl_partition(corpus, "wl", 1, t, 0);
        if (!(gcr == gwl1)) {
            Violation viol;
            viol.note = "graph-level CR and 1-WL partitions differ at round " + std::to_string(t);
            rep.violations.push_back(std::move(viol));
        }
        rep.pairs_checked +=
            static_cast<long long>(corpus.size()) * (corpus.size() - 1) / 2;
        std::vector<ExprPtr> exprs;
        for (int i = 0; i < n_exprs; ++i)
            exprs.push_back(random_expr(2, t + 1, false, seeder(), label_len, true));
        check_upper_bound(rep, corpus, gcr, exprs, 0);
        return rep;
    }
    throw Error("unknown theorem tag '" + tag + "' (thm2 | thm3 | thm4_1)");
}

} // namespace tl
