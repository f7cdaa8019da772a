#include "rankprover/trace_format.hpp"

#include <cctype>
#include <charconv>
#include <limits>

namespace rankprover {

namespace {

constexpr std::string_view kHeader = "rankprover-trace";
constexpr unsigned kVersion = 1;

std::string source(const Premise& p)
{
    switch (p.origin) {
    case Origin::Default:
        return "init";
    case Origin::Hypothesis:
        return "hyp";
    case Origin::Step:
        return std::to_string(p.step);
    }
    return "init";
}

struct Token {
    std::string_view text;
    SourceSpan span;
};

class Reader {
public:
    explicit Reader(std::string_view text)
    {
        SourceSpan pos;
        std::size_t i = 0;
        while (i < text.size()) {
            const char c = text[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (c == '\n') {
                    ++pos.line;
                    pos.column = 1;
                } else {
                    ++pos.column;
                }
                ++i;
                continue;
            }
            std::size_t len = 0;
            while (i + len < text.size() && !std::isspace(static_cast<unsigned char>(text[i + len]))) {
                ++len;
            }
            tokens_.push_back({text.substr(i, len), pos});
            pos.column += static_cast<unsigned>(len);
            i += len;
        }
        end_ = pos;
    }

    [[nodiscard]] bool next_is(std::string_view word) const { return next_ < tokens_.size() && tokens_[next_].text == word; }
    [[nodiscard]] bool at_end() const { return next_ >= tokens_.size(); }

    const Token& take(std::string_view what)
    {
        if (at_end()) {
            throw ParseError(end_, "unexpected end of trace, expected " + std::string(what));
        }
        return tokens_[next_++];
    }

    void expect(std::string_view word)
    {
        const auto& tok = take("'" + std::string(word) + "'");
        if (tok.text != word) {
            throw ParseError(tok.span, "expected '" + std::string(word) + "', found '" + std::string(tok.text) + "'");
        }
    }

    std::uint32_t number(std::string_view what)
    {
        const auto& tok = take(what);
        return to_number(tok, what);
    }

    static std::uint32_t to_number(const Token& tok, std::string_view what)
    {
        std::uint32_t value = 0;
        const auto* last = tok.text.data() + tok.text.size();
        const auto [ptr, ec] = std::from_chars(tok.text.data(), last, value);
        if (ec != std::errc{} || ptr != last) {
            throw ParseError(tok.span, "expected " + std::string(what) + ", found '" + std::string(tok.text) + "'");
        }
        return value;
    }

    Bound bound()
    {
        const auto& tok = take("bound kind");
        const auto b = parse_bound(tok.text);
        if (!b) {
            throw ParseError(tok.span, "expected LO or HI, found '" + std::string(tok.text) + "'");
        }
        return *b;
    }

private:
    std::vector<Token> tokens_;
    std::size_t next_ = 0;
    SourceSpan end_;
};

// No rule has more than three premises or two operands; the cap keeps a forged
// count from driving a huge loop.
constexpr std::uint32_t kMaxListLength = 8;

DeductionStep parse_step(Reader& in)
{
    DeductionStep step;
    step.id = in.number("step id");
    const auto& rule_tok = in.take("rule");
    const auto rule = parse_rule(rule_tok.text);
    if (!rule) {
        throw ParseError(rule_tok.span, "unknown rule '" + std::string(rule_tok.text) + "'");
    }
    step.rule = *rule;
    step.target = PointSet{in.number("target mask")};
    step.bound = in.bound();
    step.value = in.number("value");

    in.expect("prev");
    const auto& prev = in.take("previous step id or 'init'");
    if (prev.text != "init") {
        step.supersedes = Reader::to_number(prev, "previous step id");
    }

    in.expect("premises");
    const auto count = in.number("premise count");
    if (count > kMaxListLength) {
        throw ParseError({}, "premise count " + std::to_string(count) + " is implausible");
    }
    for (std::uint32_t i = 0; i < count; ++i) {
        Premise p;
        p.set = PointSet{in.number("premise mask")};
        p.bound = in.bound();
        const auto& src = in.take("premise source");
        if (src.text == "init") {
            p.origin = Origin::Default;
        } else if (src.text == "hyp") {
            p.origin = Origin::Hypothesis;
        } else {
            p.origin = Origin::Step;
            p.step = Reader::to_number(src, "premise source (step id, 'init' or 'hyp')");
        }
        step.premises.push_back(p);
    }

    in.expect("operands");
    const auto operands = in.number("operand count");
    if (operands > kMaxListLength) {
        throw ParseError({}, "operand count " + std::to_string(operands) + " is implausible");
    }
    for (std::uint32_t i = 0; i < operands; ++i) {
        step.operands.push_back(PointSet{in.number("operand mask")});
    }
    return step;
}

} // namespace

std::string write_trace(const ProofTrace& trace)
{
    std::string out = std::string(kHeader) + " " + std::to_string(kVersion) + "\n";
    out += "goal " + std::to_string(trace.goal.set.bits()) + " " + std::to_string(trace.goal.rank) + "\n";
    for (const auto& s : trace.steps) {
        out += "step " + std::to_string(s.id) + " " + std::string(to_string(s.rule)) + " " +
               std::to_string(s.target.bits()) + " " + std::string(to_string(s.bound)) + " " + std::to_string(s.value);
        out += " prev " + (s.supersedes ? std::to_string(*s.supersedes) : std::string("init"));
        out += " premises " + std::to_string(s.premises.size());
        for (const auto& p : s.premises) {
            out += " " + std::to_string(p.set.bits()) + " " + std::string(to_string(p.bound)) + " " + source(p);
        }
        out += " operands " + std::to_string(s.operands.size());
        for (const auto& o : s.operands) {
            out += " " + std::to_string(o.bits());
        }
        out += "\n";
    }
    out += "end\n";
    return out;
}

ProofTrace parse_trace(std::string_view text)
{
    Reader in{text};
    in.expect(kHeader);
    const auto version = in.number("format version");
    if (version != kVersion) {
        throw ParseError({}, "unsupported trace version " + std::to_string(version));
    }
    ProofTrace trace;
    in.expect("goal");
    trace.goal.set = PointSet{in.number("goal mask")};
    trace.goal.rank = in.number("goal rank");
    while (in.next_is("step")) {
        in.take("step");
        trace.steps.push_back(parse_step(in));
    }
    in.expect("end");
    if (!in.at_end()) {
        throw ParseError(in.take("").span, "unexpected content after 'end'");
    }
    return trace;
}

} // namespace rankprover
