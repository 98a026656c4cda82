#include "tl/registry.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "tl/error.hpp"

namespace tl {

const Rational& Value::rational() const {
    if (mode_ != EvalMode::Exact) throw Error("value is not exact");
    return r_;
}

std::string Value::str() const {
    if (mode_ == EvalMode::Exact) return r_.str();
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", d_);
    return buf;
}

int MlpPayload::in_dim() const {
    if (layers.empty() || layers[0].W.empty()) return 0;
    return static_cast<int>(layers[0].W[0].size());
}

int MlpPayload::out_dim() const {
    if (layers.empty()) return 0;
    return static_cast<int>(layers.back().W.size());
}

std::vector<double> MlpPayload::forward(std::span<const double> x) const {
    std::vector<double> cur(x.begin(), x.end());
    for (const auto& layer : layers) {
        if (!layer.W.empty() && layer.W[0].size() != cur.size())
            throw Error("mlp: input width mismatch");
        std::vector<double> next(layer.W.size(), 0.0);
        for (std::size_t o = 0; o < layer.W.size(); ++o) {
            double acc = o < layer.b.size() ? layer.b[o] : 0.0;
            for (std::size_t i = 0; i < layer.W[o].size(); ++i) acc += layer.W[o][i] * cur[i];
            next[o] = acc;
        }
        if (layer.act == "relu") {
            for (auto& v : next) v = std::max(0.0, v);
        } else if (layer.act == "sign") {
            for (auto& v : next) v = v > 0 ? 1.0 : v < 0 ? -1.0 : 0.0;
        } else if (layer.act != "id") {
            throw Error("mlp: unknown activation '" + layer.act + "'");
        }
        cur = std::move(next);
    }
    return cur;
}

MlpPayload MlpPayload::from_json_text(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(std::string("mlp payload: malformed JSON: ") + e.what());
    }
    if (!j.contains("layers") || !j["layers"].is_array())
        throw Error("mlp payload: missing \"layers\" array");
    MlpPayload p;
    for (const auto& lj : j["layers"]) {
        Layer layer;
        for (const auto& row : lj.at("W")) layer.W.push_back(row.get<std::vector<double>>());
        if (lj.contains("b")) layer.b = lj["b"].get<std::vector<double>>();
        layer.act = lj.value("act", "id");
        p.layers.push_back(std::move(layer));
    }
    return p;
}

const FunctionRegistry::Fn& FunctionRegistry::get(const std::string& name) const {
    auto it = fns_.find(name);
    if (it == fns_.end()) throw Error("unknown function '" + name + "'");
    return it->second;
}

void FunctionRegistry::add(const std::string& name, Fn fn) { fns_[name] = std::move(fn); }

std::vector<std::string> FunctionRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : fns_) out.push_back(k);
    return out;
}

void FunctionRegistry::add_mlp(const std::string& name, const MlpPayload& payload) {
    const int q = payload.out_dim();
    const int p = payload.in_dim();
    for (int jout = 0; jout < q; ++jout) {
        Fn fn;
        fn.arity = p;
        fn.fnum = [payload, jout](std::span<const double> x) { return payload.forward(x)[jout]; };
        add(name + "_" + std::to_string(jout), std::move(fn));
    }
}

FunctionRegistry FunctionRegistry::builtins() {
    FunctionRegistry reg;
    {
        Fn relu;
        relu.arity = 1;
        relu.fnum = [](std::span<const double> x) { return std::max(0.0, x[0]); };
        relu.fexact = [](std::span<const Rational> x) {
            return x[0].sign() > 0 ? x[0] : Rational(0);
        };
        reg.add("relu", std::move(relu));
    }
    {
        Fn sign;
        sign.arity = 1;
        sign.fnum = [](std::span<const double> x) {
            return x[0] > 0 ? 1.0 : x[0] < 0 ? -1.0 : 0.0;
        };
        sign.fexact = [](std::span<const Rational> x) { return Rational(x[0].sign()); };
        reg.add("sign", std::move(sign));
    }
    {
        Fn id;
        id.arity = 1;
        id.fnum = [](std::span<const double> x) { return x[0]; };
        id.fexact = [](std::span<const Rational> x) { return x[0]; };
        reg.add("identity", std::move(id));
    }
    {
        Fn f; // x -> 1/sqrt(x+1)
        f.arity = 1;
        f.fnum = [](std::span<const double> x) {
            if (x[0] + 1.0 <= 0.0) throw Error("recip_sqrt_plus1: pole at x <= -1");
            return 1.0 / std::sqrt(x[0] + 1.0);
        };
        reg.add("recip_sqrt_plus1", std::move(f));
    }
    {
        Fn f; // x -> 1/sqrt(x)
        f.arity = 1;
        f.fnum = [](std::span<const double> x) {
            if (x[0] <= 0.0) throw Error("recip_sqrt: pole at x <= 0");
            return 1.0 / std::sqrt(x[0]);
        };
        reg.add("recip_sqrt", std::move(f));
    }
    return reg;
}

const AggregationRegistry::Agg& AggregationRegistry::get(const std::string& name) const {
    auto it = aggs_.find(name);
    if (it == aggs_.end()) throw Error("unknown aggregation '" + name + "'");
    return it->second;
}

void AggregationRegistry::add(const std::string& name, Agg agg) { aggs_[name] = std::move(agg); }

AggregationRegistry AggregationRegistry::builtins() {
    AggregationRegistry reg;
    {
        Agg a;
        a.empty_ok = true;
        a.fnum = [](std::span<const double> xs) {
            double s = 0;
            for (double x : xs) s += x;
            return s;
        };
        a.fexact = [](std::span<const Rational> xs) {
            Rational s(0);
            for (const auto& x : xs) s += x;
            return s;
        };
        reg.add("sum", std::move(a));
    }
    {
        Agg a;
        a.fnum = [](std::span<const double> xs) { return *std::max_element(xs.begin(), xs.end()); };
        a.fexact = [](std::span<const Rational> xs) {
            return *std::max_element(xs.begin(), xs.end());
        };
        reg.add("max", std::move(a));
    }
    {
        Agg a;
        a.fnum = [](std::span<const double> xs) { return *std::min_element(xs.begin(), xs.end()); };
        a.fexact = [](std::span<const Rational> xs) {
            return *std::min_element(xs.begin(), xs.end());
        };
        reg.add("min", std::move(a));
    }
    {
        Agg a;
        a.fnum = [](std::span<const double> xs) {
            double s = 0;
            for (double x : xs) s += x;
            return s / static_cast<double>(xs.size());
        };
        a.fexact = [](std::span<const Rational> xs) {
            Rational s(0);
            for (const auto& x : xs) s += x;
            return s / Rational(static_cast<long long>(xs.size()));
        };
        reg.add("mean", std::move(a));
    }
    {
        Agg a; // population standard deviation; needs sqrt, float-only
        a.fnum = [](std::span<const double> xs) {
            double mu = 0;
            for (double x : xs) mu += x;
            mu /= static_cast<double>(xs.size());
            double var = 0;
            for (double x : xs) var += (x - mu) * (x - mu);
            return std::sqrt(var / static_cast<double>(xs.size()));
        };
        reg.add("stdv", std::move(a));
    }
    return reg;
}

} // namespace tl
