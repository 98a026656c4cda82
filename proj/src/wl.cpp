#include "tl/wl.hpp"

#include <algorithm>
#include <set>

#include "tl/error.hpp"

namespace tl {

int Interner::intern(const std::string& bytes) {
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = ids_.emplace(bytes, static_cast<int>(rev_.size()));
    if (inserted) rev_.push_back(bytes);
    return it->second;
}

const std::string& Interner::bytes_of(int id) const {
    std::lock_guard<std::mutex> lock(mu_);
    return rev_.at(id);
}

Interner& Interner::global() {
    static Interner instance;
    return instance;
}

namespace {

void append_int(std::string& s, long long v) {
    s += std::to_string(v);
    s += ',';
}

std::string encode_initial_cr(const Graph& g, int v) {
    std::string s = "V|";
    for (const auto& r : g.label(v)) {
        s += r.str();
        s += ';';
    }
    return s;
}

std::string encode_pair_multiset(int prev, std::vector<int> children) {
    std::sort(children.begin(), children.end());
    std::string s = "C|";
    append_int(s, prev);
    s += '|';
    for (int c : children) append_int(s, c);
    return s;
}

std::string encode_atp(const std::vector<Rational>& atp) {
    std::string s = "A|";
    for (const auto& r : atp) {
        s += r.str();
        s += ';';
    }
    return s;
}

std::string encode_graph_multiset(std::vector<int> ids) {
    std::sort(ids.begin(), ids.end());
    std::string s = "G|";
    for (int c : ids) append_int(s, c);
    return s;
}

int count_classes(const std::vector<int>& labels) {
    std::set<int> distinct(labels.begin(), labels.end());
    return static_cast<int>(distinct.size());
}

// Dense class indices for one round's labels; items with equal labels share a class.
std::vector<int> dense_classes(const std::vector<int>& labels, int& num_classes) {
    std::unordered_map<int, int> remap;
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto it = remap.emplace(labels[i], static_cast<int>(remap.size())).first;
        out[i] = it->second;
    }
    num_classes = static_cast<int>(remap.size());
    return out;
}

} // namespace

std::size_t RefinementTrace::tuple_index(std::span<const int> tuple) const {
    std::size_t idx = 0;
    for (int v : tuple) idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
    return idx;
}

int RefinementTrace::label_at(std::size_t item, int t) {
    if (t < 0) throw Error("refinement round out of range");
    if (t <= computed_rounds()) return rounds_[t][item];
    if (stable_round_ < 0)
        throw Error("refinement round " + std::to_string(t) +
                    " beyond computed trace (stability not reached)");
    extend_to(t);
    int ext_round = t - computed_rounds() - 1;
    return ext_class_ids_[ext_round][item_class_[item]];
}

void RefinementTrace::extend_to(int t) {
    // Past stability the partition is frozen: labels advance per class using
    // the multiset template captured at the last computed round.
    int have = computed_rounds() + static_cast<int>(ext_class_ids_.size());
    while (have < t) {
        const std::vector<int>* cur_ids;
        std::vector<int> base;
        if (ext_class_ids_.empty()) {
            base.resize(tmpl_.size());
            const auto& last = rounds_.back();
            for (std::size_t item = 0; item < items_; ++item) base[item_class_[item]] = last[item];
            cur_ids = &base;
        } else {
            cur_ids = &ext_class_ids_.back();
        }
        std::vector<int> next(tmpl_.size());
        for (std::size_t c = 0; c < tmpl_.size(); ++c) {
            std::vector<int> children;
            if (algo_ == WlAlgo::CR) {
                for (const auto& row : tmpl_[c]) children.push_back((*cur_ids)[row[0]]);
                next[c] = Interner::global().intern(encode_pair_multiset((*cur_ids)[c], children));
            } else {
                std::string s = "W|";
                append_int(s, (*cur_ids)[c]);
                s += '|';
                std::vector<std::string> elems;
                for (const auto& row : tmpl_[c]) {
                    std::string el;
                    append_int(el, row[0]); // atp id
                    for (std::size_t p = 1; p < row.size(); ++p)
                        append_int(el, (*cur_ids)[row[p]]);
                    elems.push_back(std::move(el));
                }
                std::sort(elems.begin(), elems.end());
                for (const auto& el : elems) {
                    s += el;
                    s += '/';
                }
                next[c] = Interner::global().intern(s);
            }
        }
        ext_class_ids_.push_back(std::move(next));
        ++have;
    }
}

int RefinementTrace::vertex_label(int v, int t) {
    if (algo_ == WlAlgo::CR) return label_at(static_cast<std::size_t>(v), t);
    std::size_t idx = 0;
    for (int p = 0; p < k_; ++p) idx = idx * n_ + v;
    return label_at(idx, t);
}

int RefinementTrace::graph_label(int t) {
    std::vector<int> ids(items_);
    for (std::size_t i = 0; i < items_; ++i) ids[i] = label_at(i, t);
    return Interner::global().intern(encode_graph_multiset(std::move(ids)));
}

std::vector<int> RefinementTrace::class_counts(int t) {
    std::unordered_map<int, int> counts;
    for (std::size_t i = 0; i < items_; ++i) ++counts[label_at(i, t)];
    std::vector<int> out;
    for (const auto& [id, c] : counts) out.push_back(c);
    std::sort(out.begin(), out.end());
    return out;
}

RefinementTrace color_refinement(const Graph& g, int t_max) {
    RefinementTrace tr;
    tr.algo_ = WlAlgo::CR;
    tr.k_ = 1;
    tr.n_ = g.n();
    tr.items_ = static_cast<std::size_t>(g.n());
    if (t_max < 0) t_max = g.n(); // CR stabilizes within n rounds

    std::vector<int> cur(g.n());
    for (int v = 0; v < g.n(); ++v)
        cur[v] = Interner::global().intern(encode_initial_cr(g, v));
    tr.rounds_.push_back(cur);

    int prev_classes = count_classes(cur);
    for (int t = 1; t <= t_max && tr.stable_round_ < 0; ++t) {
        std::vector<int> next(g.n());
        for (int v = 0; v < g.n(); ++v) {
            std::vector<int> children;
            children.reserve(g.neighbors(v).size());
            for (int u : g.neighbors(v)) children.push_back(cur[u]);
            next[v] = Interner::global().intern(encode_pair_multiset(cur[v], std::move(children)));
        }
        int classes = count_classes(next);
        tr.rounds_.push_back(next);
        // labels embed their history, so equal class counts mean equal partitions
        if (classes == prev_classes) tr.stable_round_ = t;
        prev_classes = classes;
        cur = std::move(next);
    }

    // class template from the last computed round (valid once stable)
    int nc = 0;
    tr.item_class_ = dense_classes(tr.rounds_.back(), nc);
    tr.tmpl_.assign(nc, {});
    std::vector<int> rep(nc, -1);
    for (int v = 0; v < g.n(); ++v)
        if (rep[tr.item_class_[v]] < 0) rep[tr.item_class_[v]] = v;
    for (int c = 0; c < nc; ++c) {
        for (int u : g.neighbors(rep[c])) tr.tmpl_[c].push_back({tr.item_class_[u]});
    }
    return tr;
}

RefinementTrace wl_k(const Graph& g, int k, int t_max, std::size_t tuple_cap) {
    if (k < 1) throw Error("wl_k requires k >= 1");
    const int n = g.n();
    std::size_t items = 1;
    for (int p = 0; p < k; ++p) {
        items *= static_cast<std::size_t>(n);
        if (items > tuple_cap)
            throw Error("wl_k: n^k exceeds the configured tuple cap (" +
                        std::to_string(tuple_cap) + ")");
    }

    RefinementTrace tr;
    tr.algo_ = WlAlgo::WLk;
    tr.k_ = k;
    tr.n_ = n;
    tr.items_ = items;
    if (t_max < 0) {
        // k-WL stabilizes within n^k rounds
        t_max = static_cast<int>(items);
    }

    auto decode = [&](std::size_t idx) {
        std::vector<int> tuple(k);
        for (int p = k - 1; p >= 0; --p) {
            tuple[p] = static_cast<int>(idx % n);
            idx /= n;
        }
        return tuple;
    };

    std::vector<int> cur(items);
    for (std::size_t i = 0; i < items; ++i) {
        auto tuple = decode(i);
        cur[i] = Interner::global().intern(encode_atp(atomic_type(g, tuple)));
    }
    tr.rounds_.push_back(cur);

    // atp ids of every (k+1)-extension, reused each round
    std::vector<std::vector<int>> ext_atp(items, std::vector<int>(n));
    {
        std::vector<int> ext(k + 1);
        for (std::size_t i = 0; i < items; ++i) {
            auto tuple = decode(i);
            std::copy(tuple.begin(), tuple.end(), ext.begin());
            for (int u = 0; u < n; ++u) {
                ext[k] = u;
                ext_atp[i][u] = Interner::global().intern(encode_atp(atomic_type(g, ext)));
            }
        }
    }

    int prev_classes = count_classes(cur);
    for (int t = 1; t <= t_max && tr.stable_round_ < 0; ++t) {
        std::vector<int> next(items);
        for (std::size_t i = 0; i < items; ++i) {
            auto tuple = decode(i);
            std::vector<std::string> elems;
            elems.reserve(n);
            for (int u = 0; u < n; ++u) {
                std::string el;
                append_int(el, ext_atp[i][u]);
                for (int p = 0; p < k; ++p) {
                    int saved = tuple[p];
                    tuple[p] = u;
                    append_int(el, cur[tr.tuple_index(tuple)]);
                    tuple[p] = saved;
                }
                elems.push_back(std::move(el));
            }
            std::sort(elems.begin(), elems.end());
            std::string s = "W|";
            append_int(s, cur[i]);
            s += '|';
            for (const auto& el : elems) {
                s += el;
                s += '/';
            }
            next[i] = Interner::global().intern(s);
        }
        int classes = count_classes(next);
        tr.rounds_.push_back(next);
        if (classes == prev_classes) tr.stable_round_ = t;
        prev_classes = classes;
        cur = std::move(next);
    }

    int nc = 0;
    tr.item_class_ = dense_classes(tr.rounds_.back(), nc);
    tr.tmpl_.assign(nc, {});
    std::vector<std::size_t> rep(nc, items);
    for (std::size_t i = 0; i < items; ++i)
        if (rep[tr.item_class_[i]] == items) rep[tr.item_class_[i]] = i;
    for (int c = 0; c < nc; ++c) {
        auto tuple = decode(rep[c]);
        for (int u = 0; u < n; ++u) {
            std::vector<int> row;
            row.push_back(ext_atp[rep[c]][u]);
            for (int p = 0; p < k; ++p) {
                int saved = tuple[p];
                tuple[p] = u;
                row.push_back(tr.item_class_[tr.tuple_index(tuple)]);
                tuple[p] = saved;
            }
            tr.tmpl_[c].push_back(std::move(row));
        }
    }
    return tr;
}

std::string label_digest(int id) {
    const std::string& bytes = Interner::global().bytes_of(id);
    // FNV-1a
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace tl
