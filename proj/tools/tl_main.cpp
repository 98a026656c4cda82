// tl: a command-line workbench for tensor-language expressions over
// vertex-labelled graphs: parsing, analysis, evaluation, refinement
// algorithms, rewriting, GNN encodings and separation experiments.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tl/analysis.hpp"
#include "tl/error.hpp"
#include "tl/evaluate.hpp"
#include "tl/gnn.hpp"
#include "tl/graph_io.hpp"
#include "tl/harness.hpp"
#include "tl/logic.hpp"
#include "tl/parser.hpp"
#include "tl/treewidth.hpp"
#include "tl/wl.hpp"

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw tl::Error("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string read_expr_text(const std::string& inline_text, const std::string& file) {
    if (!inline_text.empty()) return inline_text;
    if (file.empty()) throw tl::Error("provide --expr or --expr-file");
    std::string text = slurp(file);
    // expression files carry raw surface syntax or {"name":..., "expr":...}
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j = json::parse(text);
        return j.at("expr").get<std::string>();
    }
    return text;
}

std::vector<tl::Graph> load_corpus_arg(const std::string& arg) {
    const std::string prefix = "exhaustive:";
    if (arg.rfind(prefix, 0) == 0) {
        int n = std::stoi(arg.substr(prefix.size()));
        return tl::exhaustive_graphs(n);
    }
    return tl::load_corpus_jsonl(arg);
}

json analysis_to_json(const tl::AnalysisReport& rep) {
    json out;
    json frees = json::array();
    for (int v : rep.free_vars) frees.push_back("x" + std::to_string(v));
    out["free"] = std::move(frees);
    out["var_count"] = rep.var_count;
    out["sum_depth"] = rep.sum_depth;
    out["agg_depth"] = rep.agg_depth;
    out["guarded"] = rep.guarded;
    out["function_free"] = rep.function_free;
    return out;
}

json report_to_json(const tl::CheckReport& rep) {
    json out;
    out["theorem"] = rep.theorem;
    out["pairs_checked"] = rep.pairs_checked;
    out["exprs_sampled"] = rep.exprs_sampled;
    json viols = json::array();
    for (const auto& v : rep.violations) {
        json jv;
        jv["expr"] = v.expr;
        jv["item_a"] = v.item_a;
        jv["item_b"] = v.item_b;
        jv["value_a"] = v.value_a;
        jv["value_b"] = v.value_b;
        jv["note"] = v.note;
        viols.push_back(std::move(jv));
    }
    out["violations"] = std::move(viols);
    return out;
}

tl::Valuation parse_assignments(const std::vector<std::string>& assigns) {
    tl::Valuation nu;
    for (const auto& a : assigns) {
        auto eq = a.find('=');
        if (eq == std::string::npos || a.size() < 4 || a[0] != 'x')
            throw tl::Error("bad --assign (expected e.g. x1=0): " + a);
        int var = std::stoi(a.substr(1, eq - 1));
        int vertex = std::stoi(a.substr(eq + 1));
        nu.bind(var, vertex);
    }
    return nu;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tensor-language workbench"};
    app.require_subcommand(1);

    int threads = 1;
    app.add_option("--threads", threads, "parallelism cap (default 1 for determinism)")
        ->check(CLI::PositiveNumber);

    // ---- parse ----
    auto* cmd_parse = app.add_subcommand("parse", "parse an expression and echo it back");
    std::string parse_expr, parse_file;
    bool parse_json = false;
    cmd_parse->add_option("--expr", parse_expr, "expression text");
    cmd_parse->add_option("--expr-file", parse_file, "expression file");
    cmd_parse->add_flag("--json", parse_json, "machine-readable output");

    // ---- analyze ----
    auto* cmd_analyze = app.add_subcommand("analyze", "syntactic analysis of an expression");
    std::string an_expr, an_file;
    bool an_json = false;
    cmd_analyze->add_option("--expr", an_expr, "expression text");
    cmd_analyze->add_option("--expr-file", an_file, "expression file");
    cmd_analyze->add_flag("--json", an_json, "machine-readable output");

    // ---- eval ----
    auto* cmd_eval = app.add_subcommand("eval", "evaluate an expression on a graph");
    std::string ev_expr, ev_file, ev_graph, ev_mode = "exact";
    std::vector<std::string> ev_assign;
    cmd_eval->add_option("--expr", ev_expr, "expression text");
    cmd_eval->add_option("--expr-file", ev_file, "expression file");
    cmd_eval->add_option("--graph", ev_graph, "graph JSON file")->required();
    cmd_eval->add_option("--assign", ev_assign, "variable assignment, e.g. x1=0");
    cmd_eval->add_option("--mode", ev_mode, "exact | float")
        ->check(CLI::IsMember({"exact", "float"}));

    // ---- wl ----
    auto* cmd_wl = app.add_subcommand("wl", "run color refinement or folklore k-WL");
    std::string wl_graph, wl_algo = "cr";
    int wl_kk = 2, wl_t = -1;
    bool wl_json = false;
    cmd_wl->add_option("--graph", wl_graph, "graph JSON file")->required();
    cmd_wl->add_option("--algo", wl_algo, "cr | wl")->check(CLI::IsMember({"cr", "wl"}));
    cmd_wl->add_option("-k,--k", wl_kk, "tuple arity for wl");
    cmd_wl->add_option("-t,--rounds", wl_t, "rounds (default: run to stability)");
    cmd_wl->add_flag("--json", wl_json, "machine-readable output");

    // ---- rewrite ----
    auto* cmd_rewrite = app.add_subcommand("rewrite", "variable-minimizing rewrite");
    std::string rw_expr, rw_file;
    bool rw_json = false;
    cmd_rewrite->add_option("--expr", rw_expr, "expression text");
    cmd_rewrite->add_option("--expr-file", rw_file, "expression file");
    cmd_rewrite->add_flag("--json", rw_json, "machine-readable output");

    // ---- encode ----
    auto* cmd_encode = app.add_subcommand("encode", "encode a GNN architecture as expressions");
    std::string en_arch, en_params;
    int en_layers = -1;
    bool en_json = false;
    cmd_encode->add_option("--arch", en_arch, "architecture name");
    cmd_encode->add_option("--layers", en_layers, "layer count override");
    cmd_encode->add_option("--params", en_params, "spec JSON file")->required();
    cmd_encode->add_flag("--json", en_json, "machine-readable output");

    // ---- synth ----
    auto* cmd_synth = app.add_subcommand("synth", "synthesize a CR distinguisher");
    std::string sy_ga, sy_gb;
    int sy_va = 0, sy_vb = 0, sy_t = 1;
    bool sy_json = false;
    cmd_synth->add_option("--graph-a", sy_ga, "first graph JSON file")->required();
    cmd_synth->add_option("--vertex-a", sy_va, "vertex in the first graph")->required();
    cmd_synth->add_option("--graph-b", sy_gb, "second graph JSON file")->required();
    cmd_synth->add_option("--vertex-b", sy_vb, "vertex in the second graph")->required();
    cmd_synth->add_option("-t,--rounds", sy_t, "refinement round")->required();
    cmd_synth->add_flag("--json", sy_json, "machine-readable output");

    // ---- separate ----
    auto* cmd_sep = app.add_subcommand("separate", "empirical separation checks");
    std::string sp_corpus, sp_theorem, sp_algo = "cr";
    int sp_k = 1, sp_t = 1, sp_exprs = 100;
    std::uint64_t sp_seed = 1;
    bool sp_json = false;
    cmd_sep->add_option("--corpus", sp_corpus, "exhaustive:N or a JSONL file")->required();
    cmd_sep->add_option("--theorem", sp_theorem, "thm2 | thm3 | thm4_1")->required();
    cmd_sep->add_option("--algo", sp_algo, "cr | wl (informational)");
    cmd_sep->add_option("-k,--k", sp_k, "tuple arity");
    cmd_sep->add_option("-t,--rounds", sp_t, "rounds");
    cmd_sep->add_option("--random-exprs", sp_exprs, "number of sampled expressions");
    cmd_sep->add_option("--seed", sp_seed, "sampler seed");
    cmd_sep->add_flag("--json", sp_json, "machine-readable output");

    // ---- corpus ----
    auto* cmd_corpus = app.add_subcommand("corpus", "generate graph corpora");
    int co_exhaustive = 0, co_random = 0, co_n = 6, co_labels = 0;
    std::uint64_t co_seed = 1;
    std::string co_out;
    cmd_corpus->add_option("--exhaustive", co_exhaustive,
                           "all isomorphism classes on exactly N vertices");
    cmd_corpus->add_option("--random", co_random, "number of seeded random graphs");
    cmd_corpus->add_option("--n", co_n, "vertex count for random graphs");
    cmd_corpus->add_option("--labels", co_labels, "label dimensions for random graphs");
    cmd_corpus->add_option("--seed", co_seed, "random corpus seed");
    cmd_corpus->add_option("--out", co_out, "output JSONL file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_parse) {
            auto e = tl::parse(read_expr_text(parse_expr, parse_file));
            if (parse_json) {
                json out;
                out["expr"] = tl::render(e);
                std::cout << out.dump() << "\n";
            } else {
                std::cout << tl::render(e) << "\n";
            }
            return 0;
        }
        if (*cmd_analyze) {
            auto e = tl::parse(read_expr_text(an_expr, an_file));
            auto rep = tl::analyze(e);
            if (an_json) {
                std::cout << analysis_to_json(rep).dump() << "\n";
            } else {
                std::cout << "free:";
                for (int v : rep.free_vars) std::cout << " x" << v;
                std::cout << "\nvar_count: " << rep.var_count
                          << "\nsum_depth: " << rep.sum_depth
                          << "\nagg_depth: " << rep.agg_depth
                          << "\nguarded: " << (rep.guarded ? "true" : "false")
                          << "\nfunction_free: " << (rep.function_free ? "true" : "false")
                          << "\n";
            }
            return 0;
        }
        if (*cmd_eval) {
            auto e = tl::parse(read_expr_text(ev_expr, ev_file));
            auto g = tl::load_graph(ev_graph);
            auto nu = parse_assignments(ev_assign);
            auto mode = ev_mode == "exact" ? tl::EvalMode::Exact : tl::EvalMode::Float;
            std::cout << tl::evaluate(e, g, nu, mode).str() << "\n";
            return 0;
        }
        if (*cmd_wl) {
            auto g = tl::load_graph(wl_graph);
            tl::RefinementTrace tr =
                wl_algo == "cr" ? tl::color_refinement(g, wl_t) : tl::wl_k(g, wl_kk, wl_t);
            int rounds = tr.computed_rounds();
            json out;
            out["algo"] = wl_algo == "cr" ? "cr" : ("wl_" + std::to_string(wl_kk));
            out["stable_round"] = tr.stable_round();
            json per_round = json::array();
            for (int t = 0; t <= rounds; ++t) {
                json r;
                r["t"] = t;
                auto sizes = tr.class_counts(t);
                r["classes"] = sizes.size();
                r["class_sizes"] = sizes;
                per_round.push_back(std::move(r));
            }
            out["rounds"] = std::move(per_round);
            int query_t = wl_t >= 0 ? wl_t : std::max(tr.stable_round(), 0);
            out["graph_label"] = tl::label_digest(tr.graph_label(query_t));
            if (wl_json) {
                std::cout << out.dump() << "\n";
            } else {
                std::cout << "stable_round: " << tr.stable_round() << "\n";
                for (int t = 0; t <= rounds; ++t)
                    std::cout << "round " << t << ": " << tr.class_counts(t).size()
                              << " classes\n";
                std::cout << "graph_label: " << out["graph_label"].get<std::string>() << "\n";
            }
            return 0;
        }
        if (*cmd_rewrite) {
            auto e = tl::parse(read_expr_text(rw_expr, rw_file));
            tl::RewriteReport rep;
            auto rewritten = tl::rewrite_min_vars(e, rep);
            json out;
            out["expr"] = tl::render(rewritten);
            out["width"] = rep.width;
            out["exact"] = rep.exact;
            out["vars_before"] = rep.vars_before;
            out["vars_after"] = rep.vars_after;
            // the elimination order of the first conjunct, when available
            try {
                auto nf = tl::normalize(e);
                if (!nf.conjuncts.empty()) {
                    const auto& conj = nf.conjuncts[0];
                    auto eo = tl::elimination_order(tl::hypergraph_of(conj),
                                                    tl::ElimStrategy::Exhaustive);
                    // bound variables carry internal renamed-apart indices;
                    // display them positionally as y1, y2, ...
                    std::map<int, std::string> shown;
                    int next_y = 1;
                    json order = json::array();
                    for (int v : eo.order) {
                        if (conj.free_vars.count(v)) {
                            order.push_back("x" + std::to_string(v));
                        } else {
                            auto it = shown.find(v);
                            if (it == shown.end())
                                it = shown.emplace(v, "y" + std::to_string(next_y++)).first;
                            order.push_back(it->second);
                        }
                    }
                    out["elimination_order"] = std::move(order);
                }
            } catch (const tl::Error&) {
                out["elimination_order"] = nullptr;
            }
            if (rw_json) {
                std::cout << out.dump() << "\n";
            } else {
                std::cout << tl::render(rewritten) << "\n";
                std::cerr << "width " << rep.width << (rep.exact ? "" : " (upper bound)")
                          << ", vars " << rep.vars_before << " -> " << rep.vars_after << "\n";
            }
            return 0;
        }
        if (*cmd_encode) {
            tl::GnnLayerSpec spec = tl::GnnLayerSpec::from_json_text(slurp(en_params));
            if (!en_arch.empty()) spec.arch = en_arch;
            if (en_layers > 0) spec.layers = en_layers;
            auto enc = tl::encode(spec);
            auto rep = tl::bound_report(enc.bundle, enc.per_layer_depth);
            json out;
            json bundle = json::array();
            for (const auto& e : enc.bundle) bundle.push_back(tl::render(e));
            out["bundle"] = std::move(bundle);
            out["free_arity"] = rep.free_arity;
            out["var_count"] = rep.var_count;
            out["opt_var_count"] = rep.opt_var_count;
            out["sum_depth"] = rep.sum_depth;
            out["agg_depth"] = rep.agg_depth;
            out["per_layer_depth"] = rep.per_layer_depth;
            out["guarded"] = rep.guarded;
            out["bound"] = rep.bound;
            if (en_json) {
                std::cout << out.dump() << "\n";
            } else {
                for (const auto& e : enc.bundle) std::cout << tl::render(e) << "\n";
                std::cerr << "bound: " << rep.bound << "\n";
            }
            return 0;
        }
        if (*cmd_synth) {
            auto ga = tl::load_graph(sy_ga);
            auto gb = tl::load_graph(sy_gb);
            auto expr = tl::synthesize_cr_distinguisher(ga, sy_va, gb, sy_vb, sy_t);
            if (!expr) {
                std::cout << (sy_json ? "{\"distinguisher\":null}" : "none") << "\n";
                return 0;
            }
            auto rep = tl::analyze(*expr);
            if (sy_json) {
                json out;
                out["distinguisher"] = tl::render(*expr);
                out["analysis"] = analysis_to_json(rep);
                std::cout << out.dump() << "\n";
            } else {
                std::cout << tl::render(*expr) << "\n";
                std::cerr << "sum_depth " << rep.sum_depth << ", guarded "
                          << (rep.guarded ? "true" : "false") << "\n";
            }
            return 0;
        }
        if (*cmd_sep) {
            auto corpus = load_corpus_arg(sp_corpus);
            auto rep = tl::check_theorem(sp_theorem, corpus, sp_k, sp_t, sp_exprs, sp_seed);
            std::cout << report_to_json(rep).dump() << "\n";
            if (!rep.ok()) {
                std::cerr << rep.violations.size() << " violation(s) found\n";
                return 1;
            }
            return 0;
        }
        if (*cmd_corpus) {
            std::vector<tl::Graph> corpus;
            if (co_exhaustive > 0)
                corpus = tl::exhaustive_graphs(co_exhaustive);
            else if (co_random > 0)
                corpus = tl::random_corpus(co_n, co_random, co_seed, co_labels);
            else
                throw tl::Error("choose --exhaustive N or --random COUNT");
            tl::save_corpus_jsonl(corpus, co_out);
            std::cerr << "wrote " << corpus.size() << " graphs to " << co_out << "\n";
            return 0;
        }
    } catch (const tl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.has_span())
            std::cerr << "  at bytes " << e.span().start << ".." << e.span().end << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
