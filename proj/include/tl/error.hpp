#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tl {

// Byte range into a source text; attached to parse errors.
struct SourceSpan {
    std::size_t start = 0;
    std::size_t end = 0;
};

class Error : public std::runtime_error {
public:
    explicit Error(std::string msg) : std::runtime_error(std::move(msg)) {}
    Error(std::string msg, SourceSpan span)
        : std::runtime_error(std::move(msg)), span_(span), has_span_(true) {}

    bool has_span() const { return has_span_; }
    SourceSpan span() const { return span_; }

private:
    SourceSpan span_{};
    bool has_span_ = false;
};

} // namespace tl
