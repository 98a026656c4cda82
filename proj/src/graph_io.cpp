#include "tl/graph_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tl/error.hpp"

namespace tl {

namespace {

using nlohmann::json;

Rational label_value(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number_unsigned()) return Rational(static_cast<long long>(j.get<unsigned long long>()));
    if (j.is_number_float()) return Rational::parse(j.dump()); // shortest decimal round-trip
    throw Error("graph: label entry is not a number");
}

Graph graph_from_json(const json& j) {
    if (!j.is_object()) throw Error("graph: expected a JSON object");
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw Error("graph: missing or non-integer field \"n\"");
    int n = j["n"].get<int>();
    std::vector<std::pair<int, int>> edges;
    if (j.contains("edges")) {
        if (!j["edges"].is_array()) throw Error("graph: field \"edges\" must be an array");
        for (const auto& e : j["edges"]) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
                throw Error("graph: each edge must be a 2-array of integers");
            edges.emplace_back(e[0].get<int>(), e[1].get<int>());
        }
    }
    std::vector<std::vector<Rational>> labels;
    if (j.contains("labels") && !j["labels"].is_null()) {
        if (!j["labels"].is_array()) throw Error("graph: field \"labels\" must be an array");
        for (const auto& row : j["labels"]) {
            if (!row.is_array()) throw Error("graph: each label entry must be an array of numbers");
            std::vector<Rational> lv;
            for (const auto& x : row) lv.push_back(label_value(x));
            labels.push_back(std::move(lv));
        }
    }
    return Graph(n, std::move(edges), std::move(labels));
}

json graph_to_json(const Graph& g) {
    json j;
    j["n"] = g.n();
    json edges = json::array();
    for (auto [u, v] : g.edges()) edges.push_back(json::array({u, v}));
    j["edges"] = std::move(edges);
    json labels = json::array();
    for (const auto& row : g.labels()) {
        json r = json::array();
        for (const auto& x : row) {
            if (x.is_integer() && x.num() <= INT64_MAX && x.num() >= INT64_MIN)
                r.push_back(static_cast<std::int64_t>(x.num()));
            else
                r.push_back(x.to_double());
        }
        labels.push_back(std::move(r));
    }
    j["labels"] = std::move(labels);
    return j;
}

} // namespace

Graph graph_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(std::string("graph: malformed JSON: ") + e.what());
    }
    return graph_from_json(j);
}

std::string graph_to_json_text(const Graph& g) { return graph_to_json(g).dump(); }

Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open graph file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return graph_from_json_text(ss.str());
}

std::vector<Graph> load_corpus_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open corpus file: " + path);
    std::vector<Graph> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(graph_from_json_text(line));
        } catch (const Error& e) {
            throw Error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

void save_corpus_jsonl(const std::vector<Graph>& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write corpus file: " + path);
    for (const auto& g : corpus) out << graph_to_json_text(g) << "\n";
}

} // namespace tl
