#pragma once

#include <string>
#include <vector>

#include "tl/graph.hpp"

namespace tl {

// Graph JSON schema: {"n": int, "edges": [[u,v],...], "labels": [[..],...]}.
// "labels" may be omitted (label length 0). Decimal label text is kept exact.
Graph graph_from_json_text(const std::string& text);
std::string graph_to_json_text(const Graph& g);

Graph load_graph(const std::string& path);

// Corpus files: one JSON graph per line.
std::vector<Graph> load_corpus_jsonl(const std::string& path);
void save_corpus_jsonl(const std::vector<Graph>& corpus, const std::string& path);

} // namespace tl
