#include "rankprover/goal_parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

namespace rankprover {

namespace {

enum class Kind { Ident, Number, Punct };

struct Token {
    Kind kind;
    std::string text;
    SourceSpan span;
};

bool ident_start(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> tokenize(std::string_view text)
{
    static constexpr std::array<std::string_view, 10> kMulti = {"::", ":=", "->", "<->", "<>", "<=", ">=", "/\\", "\\/",
                                                                "=>"};
    std::vector<Token> out;
    SourceSpan pos;
    std::size_t i = 0;
    const auto advance = [&](std::size_t count) {
        for (std::size_t k = 0; k < count && i < text.size(); ++k, ++i) {
            if (text[i] == '\n') {
                ++pos.line;
                pos.column = 1;
            } else {
                ++pos.column;
            }
        }
    };
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (text.substr(i, 2) == "(*") {
            // Nested Coq comments.
            int depth = 0;
            do {
                if (text.substr(i, 2) == "(*") {
                    ++depth;
                    advance(2);
                } else if (text.substr(i, 2) == "*)") {
                    --depth;
                    advance(2);
                } else {
                    advance(1);
                }
            } while (depth > 0 && i < text.size());
            continue;
        }
        const auto start = pos;
        if (ident_start(c)) {
            std::size_t len = 1;
            while (i + len < text.size() && ident_char(text[i + len])) {
                ++len;
            }
            out.push_back({Kind::Ident, std::string(text.substr(i, len)), start});
            advance(len);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t len = 1;
            while (i + len < text.size() && std::isdigit(static_cast<unsigned char>(text[i + len]))) {
                ++len;
            }
            out.push_back({Kind::Number, std::string(text.substr(i, len)), start});
            advance(len);
            continue;
        }
        std::size_t len = 1;
        for (auto m : kMulti) {
            if (text.substr(i, m.size()) == m && m.size() > len) {
                len = m.size();
            }
        }
        out.push_back({Kind::Punct, std::string(text.substr(i, len)), start});
        advance(len);
    }
    return out;
}

bool is_point_name(std::string_view text)
{
    return !text.empty() && std::isalpha(static_cast<unsigned char>(text.front())) &&
           std::all_of(text.begin(), text.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)); });
}

class GoalParser {
public:
    GoalParser(std::string_view text, unsigned dimension, std::vector<Warning>* warnings)
        : tokens_{tokenize(text)}, warnings_{warnings}
    {
        cfg_.dimension = dimension;
        end_span_ = tokens_.empty() ? SourceSpan{} : tokens_.back().span;
    }

    Configuration run()
    {
        if (cfg_.dimension != 2 && cfg_.dimension != 3) {
            throw ParseError({}, "dimension must be 2 or 3, got " + std::to_string(cfg_.dimension));
        }
        seek_statement();
        take_ident("lemma name");
        expect(":");
        expect_ident("forall");
        parse_binders();
        if (cfg_.points.empty()) {
            throw ParseError(here(), "statement binds no variable of type Point");
        }
        expect(",");
        parse_clauses();
        return std::move(cfg_);
    }

private:
    static constexpr std::array<std::string_view, 6> kStatementKeywords = {
        "Lemma", "Theorem", "Fact", "Remark", "Corollary", "Proposition",
    };

    [[nodiscard]] bool at_end() const { return next_ >= tokens_.size(); }
    [[nodiscard]] SourceSpan here() const { return at_end() ? end_span_ : tokens_[next_].span; }
    [[nodiscard]] bool next_is(std::string_view text) const { return !at_end() && tokens_[next_].text == text; }

    const Token& take(std::string_view what)
    {
        if (at_end()) {
            throw ParseError(end_span_, "unexpected end of input, expected " + std::string(what));
        }
        return tokens_[next_++];
    }

    void expect(std::string_view punct)
    {
        const auto& tok = take("'" + std::string(punct) + "'");
        if (tok.text != punct) {
            throw ParseError(tok.span, "expected '" + std::string(punct) + "', found '" + tok.text + "'");
        }
    }

    void expect_ident(std::string_view word) { expect(word); }

    const Token& take_ident(std::string_view what)
    {
        const auto& tok = take(what);
        if (tok.kind != Kind::Ident) {
            throw ParseError(tok.span, "expected " + std::string(what) + ", found '" + tok.text + "'");
        }
        return tok;
    }

    void warn(SourceSpan span, std::string message)
    {
        if (warnings_ != nullptr) {
            warnings_->push_back({span, std::move(message)});
        }
    }

    void seek_statement()
    {
        while (!at_end()) {
            const auto& tok = tokens_[next_];
            if (tok.kind == Kind::Ident &&
                std::find(kStatementKeywords.begin(), kStatementKeywords.end(), tok.text) != kStatementKeywords.end()) {
                ++next_;
                return;
            }
            ++next_;
        }
        throw ParseError(end_span_, "no Lemma statement found");
    }

    void add_binders(const std::vector<const Token*>& names, std::string_view type)
    {
        if (!type.empty() && type != "Point") {
            for (const auto* n : names) {
                warn(n->span, "binder '" + n->text + "' of type " + std::string(type) + " is not a point; ignored");
            }
            return;
        }
        for (const auto* n : names) {
            if (!is_point_name(n->text)) {
                throw ParseError(n->span, "invalid point name '" + n->text + "'");
            }
            if (cfg_.find_point(n->text)) {
                throw ParseError(n->span, "duplicate binder '" + n->text + "'");
            }
            if (cfg_.points.size() == kMaxPoints) {
                throw ParseError(n->span, "too many points; the limit is " + std::to_string(kMaxPoints));
            }
            cfg_.points.push_back({static_cast<unsigned>(cfg_.points.size()), n->text});
        }
    }

    // `A B C : Point`, `(A B : Point) (C : Point)`, or untyped `A B C`.
    void parse_binders()
    {
        if (next_is("(")) {
            while (next_is("(")) {
                ++next_;
                std::vector<const Token*> names;
                while (!next_is(":")) {
                    names.push_back(&take_ident("binder name"));
                }
                expect(":");
                const auto& type = take_ident("binder type");
                expect(")");
                add_binders(names, type.text);
            }
            return;
        }
        std::vector<const Token*> names;
        while (!next_is(":") && !next_is(",")) {
            names.push_back(&take_ident("binder name"));
        }
        if (names.empty()) {
            throw ParseError(here(), "forall without binders");
        }
        std::string_view type;
        if (next_is(":")) {
            ++next_;
            type = take_ident("binder type").text;
        }
        add_binders(names, type);
    }

    // Splits the body at top-level '->' up to the terminating '.'.
    void parse_clauses()
    {
        std::vector<std::vector<const Token*>> clauses(1);
        int depth = 0;
        for (;;) {
            const auto& tok = take("'.' ending the statement");
            if (tok.kind == Kind::Punct) {
                if (tok.text == "(") {
                    ++depth;
                } else if (tok.text == ")") {
                    --depth;
                } else if (depth == 0 && tok.text == ".") {
                    break;
                } else if (depth == 0 && tok.text == "->") {
                    clauses.emplace_back();
                    continue;
                }
            }
            clauses.back().push_back(&tok);
        }
        for (std::size_t i = 0; i < clauses.size(); ++i) {
            const bool last = i + 1 == clauses.size();
            const auto& clause = clauses[i];
            const auto span = clause.empty() ? here() : clause.front()->span;
            auto fact = rank_equality(clause);
            if (!fact) {
                if (last) {
                    throw ParseError(span, "statement does not end with a rank equality rk(...) = k");
                }
                warn(span, "dropped clause that is not a rank equality");
                continue;
            }
            if (last) {
                cfg_.conclusions.push_back(*fact);
            } else if (const auto previous = cfg_.hypothesis_rank(fact->set)) {
                if (*previous != fact->rank) {
                    throw ParseError(span, "contradictory hypotheses on rk(" + canonical_render(fact->set, cfg_) + ")");
                }
            } else {
                cfg_.hypotheses.push_back(*fact);
            }
        }
    }

    // rk ( NAME :: ... :: nil ) = INT, or nullopt when the clause has another
    // shape. A clause that starts like a rank equality but names an unknown
    // point is an error.
    std::optional<RankFact> rank_equality(const std::vector<const Token*>& clause)
    {
        if (clause.size() < 6 || clause[0]->text != "rk" || clause[1]->text != "(") {
            return std::nullopt;
        }
        std::size_t i = 2;
        PointSet set;
        bool expect_name = true;
        for (; i < clause.size() && clause[i]->text != ")"; ++i) {
            const auto& tok = *clause[i];
            if (expect_name) {
                if (tok.kind != Kind::Ident) {
                    return std::nullopt;
                }
                if (tok.text == "nil") {
                    if (i + 1 >= clause.size() || clause[i + 1]->text != ")") {
                        return std::nullopt;
                    }
                    continue;
                }
                const auto index = cfg_.find_point(tok.text);
                if (!index) {
                    throw ParseError(tok.span, "unknown identifier '" + tok.text + "' inside rk(...)");
                }
                if (set.contains(*index)) {
                    warn(tok.span, "point '" + tok.text + "' repeated in rk(...); treated as a set");
                }
                set = set | PointSet::singleton(*index);
                expect_name = false;
            } else {
                if (tok.text != "::") {
                    return std::nullopt;
                }
                expect_name = true;
            }
        }
        // Must have consumed "nil" right before ')'.
        if (i >= clause.size() || clause[i - 1]->text != "nil" || set.empty()) {
            return std::nullopt;
        }
        if (i + 3 != clause.size() || clause[i + 1]->text != "=" || clause[i + 2]->kind != Kind::Number) {
            return std::nullopt;
        }
        const auto& num = *clause[i + 2];
        unsigned rank = 0;
        const auto [ptr, ec] = std::from_chars(num.text.data(), num.text.data() + num.text.size(), rank);
        if (ec != std::errc{} || rank < 1 || rank > cfg_.max_rank() || rank > set.size()) {
            throw ParseError(num.span, "rank " + num.text + " is outside [1, min(|set|, " +
                                           std::to_string(cfg_.max_rank()) + ")]");
        }
        return RankFact{set, rank};
    }

    std::vector<Token> tokens_;
    std::size_t next_ = 0;
    std::vector<Warning>* warnings_;
    SourceSpan end_span_;
    Configuration cfg_;
};

std::vector<RankFact> sorted(std::vector<RankFact> facts)
{
    std::sort(facts.begin(), facts.end());
    return facts;
}

} // namespace

Configuration parse_goal(std::string_view text, unsigned dimension, std::vector<Warning>* warnings)
{
    return GoalParser{text, dimension, warnings}.run();
}

bool match_statement(const Configuration& goal, const Configuration& proved)
{
    return goal.point_count() == proved.point_count() && sorted(goal.hypotheses) == sorted(proved.hypotheses) &&
           sorted(goal.conclusions) == sorted(proved.conclusions);
}

} // namespace rankprover
