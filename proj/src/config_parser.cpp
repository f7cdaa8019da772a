#include "rankprover/config_parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <set>

namespace rankprover {

namespace {

struct Token {
    std::string text;
    SourceSpan span;
};

constexpr std::array<std::string_view, 11> kKeywords = {
    "context", "dimension", "layers", "endofcontext", "layer", "points",
    "hypotheses", "conclusion", "endoflayer", "end", ":",
};

bool is_keyword(std::string_view text)
{
    return std::find(kKeywords.begin(), kKeywords.end(), text) != kKeywords.end();
}

bool is_name(std::string_view text)
{
    if (text.empty() || !std::isalpha(static_cast<unsigned char>(text.front()))) {
        return false;
    }
    return std::all_of(text.begin(), text.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)); });
}

// Whitespace-separated tokens; ':' always stands alone.
class Lexer {
public:
    explicit Lexer(std::string_view text)
    {
        SourceSpan pos;
        std::string current;
        SourceSpan start;
        const auto flush = [&] {
            if (!current.empty()) {
                tokens_.push_back({std::move(current), start});
                current.clear();
            }
        };
        for (char c : text) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                flush();
            } else if (c == ':') {
                flush();
                tokens_.push_back({":", pos});
            } else {
                if (current.empty()) {
                    start = pos;
                }
                current.push_back(c);
            }
            if (c == '\n') {
                ++pos.line;
                pos.column = 1;
            } else {
                ++pos.column;
            }
        }
        flush();
        end_ = pos;
    }

    [[nodiscard]] bool at_end() const { return next_ >= tokens_.size(); }
    [[nodiscard]] const Token* peek() const { return at_end() ? nullptr : &tokens_[next_]; }
    [[nodiscard]] SourceSpan here() const { return at_end() ? end_ : tokens_[next_].span; }

    const Token& take(std::string_view what)
    {
        if (at_end()) {
            throw ParseError(end_, "unexpected end of input, expected " + std::string(what));
        }
        return tokens_[next_++];
    }

    void expect(std::string_view keyword)
    {
        const auto& tok = take("'" + std::string(keyword) + "'");
        if (tok.text != keyword) {
            throw ParseError(tok.span, "expected '" + std::string(keyword) + "', found '" + tok.text + "'");
        }
    }

    [[nodiscard]] bool next_is(std::string_view text) const { return !at_end() && tokens_[next_].text == text; }

    unsigned integer(std::string_view what)
    {
        const auto& tok = take(what);
        unsigned value = 0;
        const auto* first = tok.text.data();
        const auto* last = first + tok.text.size();
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last) {
            throw ParseError(tok.span, "expected " + std::string(what) + ", found '" + tok.text + "'");
        }
        return value;
    }

private:
    std::vector<Token> tokens_;
    std::size_t next_ = 0;
    SourceSpan end_;
};

class ConfigParser {
public:
    ConfigParser(std::string_view text, std::vector<Warning>* warnings) : lex_{text}, warnings_{warnings} {}

    Configuration run()
    {
        lex_.expect("context");
        lex_.expect("dimension");
        const auto dim_span = lex_.here();
        cfg_.dimension = lex_.integer("dimension");
        if (cfg_.dimension != 2 && cfg_.dimension != 3) {
            throw ParseError(dim_span, "dimension must be 2 or 3, got " + std::to_string(cfg_.dimension));
        }
        lex_.expect("layers");
        const auto layers_span = lex_.here();
        cfg_.layer_count = lex_.integer("layer count");
        lex_.expect("endofcontext");

        unsigned layers_seen = 0;
        std::vector<RankFact> layer_conclusions;
        do {
            parse_layer(layer_conclusions);
            ++layers_seen;
        } while (lex_.next_is("layer"));
        if (layers_seen != cfg_.layer_count) {
            warn(layers_span, "context announces " + std::to_string(cfg_.layer_count) + " layer(s), found " +
                                  std::to_string(layers_seen));
        }

        const auto conclusion_span = lex_.here();
        lex_.expect("conclusion");
        parse_rank_lines(cfg_.conclusions, "conclusion");
        if (cfg_.conclusions.empty()) {
            throw ParseError(lex_.here(), "global conclusion block is empty");
        }
        lex_.expect("end");
        if (!lex_.at_end()) {
            throw ParseError(lex_.here(), "unexpected '" + lex_.peek()->text + "' after 'end'");
        }

        if (!layer_conclusions.empty() && as_set(layer_conclusions) != as_set(cfg_.conclusions)) {
            warn(conclusion_span, "layer conclusions differ from the global conclusion; using the global one");
        }
        return std::move(cfg_);
    }

private:
    static std::set<RankFact> as_set(const std::vector<RankFact>& facts) { return {facts.begin(), facts.end()}; }

    void warn(SourceSpan span, std::string message)
    {
        if (warnings_ != nullptr) {
            warnings_->push_back({span, std::move(message)});
        }
    }

    void parse_layer(std::vector<RankFact>& layer_conclusions)
    {
        lex_.expect("layer");
        lex_.integer("layer number");
        lex_.expect("points");
        bool any = false;
        while (!lex_.at_end() && !is_keyword(lex_.peek()->text)) {
            const auto& tok = lex_.take("point name");
            if (!is_name(tok.text)) {
                throw ParseError(tok.span, "invalid point name '" + tok.text + "'");
            }
            if (cfg_.find_point(tok.text)) {
                throw ParseError(tok.span, "duplicate point name '" + tok.text + "'");
            }
            if (cfg_.points.size() == kMaxPoints) {
                throw ParseError(tok.span, "too many points; the limit is " + std::to_string(kMaxPoints));
            }
            cfg_.points.push_back({static_cast<unsigned>(cfg_.points.size()), tok.text});
            any = true;
        }
        if (!any) {
            throw ParseError(lex_.here(), "layer declares no points");
        }
        lex_.expect("hypotheses");
        std::vector<RankFact> hyps;
        parse_rank_lines(hyps, "hypothesis");
        for (const auto& h : hyps) {
            add_hypothesis(h);
        }
        lex_.expect("conclusion");
        parse_rank_lines(layer_conclusions, "conclusion");
        lex_.expect("endoflayer");
    }

    void add_hypothesis(const RankFact& fact)
    {
        const auto previous = cfg_.hypothesis_rank(fact.set);
        if (!previous) {
            cfg_.hypotheses.push_back(fact);
        } else if (*previous != fact.rank) {
            throw ParseError(last_line_span_, "contradictory hypotheses: rk(" + canonical_render(fact.set, cfg_) +
                                                  ") is given as " + std::to_string(*previous) + " and " +
                                                  std::to_string(fact.rank));
        }
    }

    // (NAME+ ':' INT)* up to the next keyword.
    void parse_rank_lines(std::vector<RankFact>& out, std::string_view what)
    {
        while (!lex_.at_end() && !is_keyword(lex_.peek()->text)) {
            last_line_span_ = lex_.here();
            PointSet set;
            while (!lex_.next_is(":")) {
                const auto& tok = lex_.take("point name or ':'");
                if (is_keyword(tok.text)) {
                    throw ParseError(tok.span, "expected ':' before '" + tok.text + "'");
                }
                const auto index = cfg_.find_point(tok.text);
                if (!index) {
                    throw ParseError(tok.span, "unknown point '" + tok.text + "' in " + std::string(what));
                }
                if (set.contains(*index)) {
                    warn(tok.span, "point '" + tok.text + "' repeated in a rank line; treated as a set");
                }
                set = set | PointSet::singleton(*index);
            }
            const auto colon = lex_.take("':'");
            if (set.empty()) {
                throw ParseError(colon.span, "rank line without points");
            }
            const auto rank_span = lex_.here();
            const unsigned rank = lex_.integer("rank");
            if (rank < 1 || rank > cfg_.max_rank()) {
                throw ParseError(rank_span, "rank " + std::to_string(rank) + " outside [1, " +
                                                std::to_string(cfg_.max_rank()) + "]");
            }
            if (rank > set.size()) {
                throw ParseError(rank_span, "rank " + std::to_string(rank) + " exceeds the size of the set (" +
                                                std::to_string(set.size()) + ")");
            }
            const RankFact fact{set, rank};
            if (std::find(out.begin(), out.end(), fact) == out.end()) {
                out.push_back(fact);
            }
        }
    }

    Lexer lex_;
    std::vector<Warning>* warnings_;
    Configuration cfg_;
    SourceSpan last_line_span_;
};

std::string rank_line(const RankFact& fact, const Configuration& cfg)
{
    std::string line;
    for (unsigned i : fact.set.indices()) {
        line += cfg.points[i].name;
        line += ' ';
    }
    line += ": " + std::to_string(fact.rank) + "\n";
    return line;
}

} // namespace

Configuration parse_config(std::string_view text, std::vector<Warning>* warnings)
{
    return ConfigParser{text, warnings}.run();
}

std::string print_config(const Configuration& cfg)
{
    auto hyps = cfg.hypotheses;
    std::sort(hyps.begin(), hyps.end());

    std::string out = "context\n  dimension " + std::to_string(cfg.dimension) + "\n  layers 1\nendofcontext\n";
    out += "layer 0\n points\n";
    for (std::size_t i = 0; i < cfg.points.size(); ++i) {
        out += cfg.points[i].name;
        out += i + 1 == cfg.points.size() ? "\n" : " ";
    }
    out += " hypotheses\n";
    for (const auto& h : hyps) {
        out += rank_line(h, cfg);
    }
    out += " conclusion\n";
    for (const auto& c : cfg.conclusions) {
        out += rank_line(c, cfg);
    }
    out += "endoflayer\nconclusion\n";
    for (const auto& c : cfg.conclusions) {
        out += rank_line(c, cfg);
    }
    out += "end\n";
    return out;
}

} // namespace rankprover
