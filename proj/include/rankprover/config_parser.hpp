// Reader and writer for the prover input language (.g files):
//
//   context dimension 3 layers 1 endofcontext
//   layer 0
//    points A B C D
//    hypotheses
//   C D : 2
//    conclusion
//   A C B : 3
//   endoflayer
//   conclusion
//   A C B : 3
//   end

#pragma once

#include "rankprover/core.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace rankprover {

// 1-based source position.
struct SourceSpan {
    unsigned line = 1;
    unsigned column = 1;

    friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

class ParseError : public Error {
public:
    ParseError(SourceSpan span, const std::string& message)
        : Error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + message), span_{span}
    {}

    [[nodiscard]] SourceSpan span() const { return span_; }

private:
    SourceSpan span_;
};

struct Warning {
    SourceSpan span;
    std::string message;
};

// Layers are merged: points are concatenated in order of appearance,
// hypotheses are unioned, and the trailing global conclusion block wins over
// per-layer ones. Warnings (duplicate names in a rank line, differing layer
// conclusions, ...) are appended to `warnings` when given.
Configuration parse_config(std::string_view text, std::vector<Warning>* warnings = nullptr);

// Single-layer document; hypotheses in ascending mask order.
std::string print_config(const Configuration& cfg);

} // namespace rankprover
