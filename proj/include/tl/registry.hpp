#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tl/rational.hpp"

namespace tl {

enum class EvalMode { Exact, Float };

// Tagged evaluation result; exact mode never silently degrades to float.
class Value {
public:
    static Value exact(Rational r) {
        Value v;
        v.mode_ = EvalMode::Exact;
        v.r_ = std::move(r);
        return v;
    }
    static Value real(double d) {
        Value v;
        v.mode_ = EvalMode::Float;
        v.d_ = d;
        return v;
    }
    EvalMode mode() const { return mode_; }
    const Rational& rational() const;
    double number() const { return mode_ == EvalMode::Float ? d_ : r_.to_double(); }
    std::string str() const;

private:
    EvalMode mode_ = EvalMode::Exact;
    Rational r_;
    double d_ = 0.0;
};

// MLP weight payload: affine layers with an activation between them.
// Represents a function R^p -> R^q; registered per-output-coordinate.
struct MlpPayload {
    struct Layer {
        std::vector<std::vector<double>> W; // out x in
        std::vector<double> b;
        std::string act; // "relu" | "id" | "sign"
    };
    std::vector<Layer> layers;

    int in_dim() const;
    int out_dim() const;
    std::vector<double> forward(std::span<const double> x) const;
    static MlpPayload from_json_text(const std::string& text);
};

// Named scalar functions R^p -> R. Functions without an exact implementation
// are rejected in exact mode.
class FunctionRegistry {
public:
    struct Fn {
        int arity = 1;
        std::function<double(std::span<const double>)> fnum;
        std::function<Rational(std::span<const Rational>)> fexact; // null if float-only
    };

    static FunctionRegistry builtins();

    bool contains(const std::string& name) const { return fns_.count(name) != 0; }
    const Fn& get(const std::string& name) const;
    void add(const std::string& name, Fn fn);
    // Registers one scalar function per output coordinate: "<name>_<j>".
    void add_mlp(const std::string& name, const MlpPayload& payload);
    std::vector<std::string> names() const;

private:
    std::map<std::string, Fn> fns_;
};

// Multiset-to-scalar aggregation functions. sum on the empty multiset is 0;
// max/min/mean/stdv on the empty multiset are errors. stdv (population form)
// is float-only.
class AggregationRegistry {
public:
    struct Agg {
        std::function<double(std::span<const double>)> fnum;
        std::function<Rational(std::span<const Rational>)> fexact; // null if float-only
        bool empty_ok = false;
    };

    static AggregationRegistry builtins();

    bool contains(const std::string& name) const { return aggs_.count(name) != 0; }
    const Agg& get(const std::string& name) const;
    void add(const std::string& name, Agg agg);

private:
    std::map<std::string, Agg> aggs_;
};

} // namespace tl
