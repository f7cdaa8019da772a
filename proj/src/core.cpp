#include "rankprover/core.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace rankprover {

std::vector<unsigned> PointSet::indices() const
{
    std::vector<unsigned> out;
    out.reserve(size());
    for (Mask rest = bits_; rest != 0; rest &= rest - 1) {
        out.push_back(static_cast<unsigned>(std::countr_zero(rest)));
    }
    return out;
}

SubsetRange subset_iter(unsigned n)
{
    if (n == 0 || n > kMaxPoints) {
        throw StructuralError("subset_iter: point count must be in [1, " + std::to_string(kMaxPoints) + "], got " +
                              std::to_string(n));
    }
    return SubsetRange{n};
}

std::string to_string(const RankInterval& interval)
{
    return "[" + std::to_string(interval.lo) + ", " + std::to_string(interval.hi) + "]";
}

std::optional<unsigned> Configuration::find_point(std::string_view name) const
{
    for (const auto& p : points) {
        if (p.name == name) {
            return p.index;
        }
    }
    return std::nullopt;
}

std::optional<unsigned> Configuration::hypothesis_rank(PointSet set) const
{
    for (const auto& h : hypotheses) {
        if (h.set == set) {
            return h.rank;
        }
    }
    return std::nullopt;
}

RankInterval Configuration::default_interval(PointSet set) const
{
    return {1, std::min(set.size(), max_rank())};
}

namespace {

void validate_fact(const Configuration& cfg, const RankFact& fact, std::string_view what)
{
    if (fact.set.empty()) {
        throw StructuralError(std::string(what) + ": empty point set");
    }
    if (!fact.set.fits(cfg.point_count())) {
        throw StructuralError(std::string(what) + ": set mentions a point outside the configuration");
    }
    const auto bounds = cfg.default_interval(fact.set);
    if (fact.rank < bounds.lo || fact.rank > bounds.hi) {
        throw StructuralError(std::string(what) + " rk(" + canonical_render(fact.set, cfg) + ") = " +
                              std::to_string(fact.rank) + " is outside " + to_string(bounds));
    }
}

} // namespace

void Configuration::validate() const
{
    if (dimension != 2 && dimension != 3) {
        throw StructuralError("dimension must be 2 or 3, got " + std::to_string(dimension));
    }
    if (points.empty()) {
        throw StructuralError("configuration has no points");
    }
    if (points.size() > kMaxPoints) {
        throw StructuralError("configuration has " + std::to_string(points.size()) + " points; the limit is " +
                              std::to_string(kMaxPoints));
    }
    std::set<std::string_view> names;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].index != i) {
            throw StructuralError("point " + points[i].name + " has index " + std::to_string(points[i].index) +
                                  ", expected " + std::to_string(i));
        }
        if (!names.insert(points[i].name).second) {
            throw StructuralError("duplicate point name " + points[i].name);
        }
    }
    for (std::size_t i = 0; i < hypotheses.size(); ++i) {
        validate_fact(*this, hypotheses[i], "hypothesis");
        for (std::size_t j = 0; j < i; ++j) {
            if (hypotheses[j].set == hypotheses[i].set && hypotheses[j].rank != hypotheses[i].rank) {
                throw StructuralError("contradictory hypotheses on rk(" + canonical_render(hypotheses[i].set, *this) +
                                      ")");
            }
        }
    }
    if (conclusions.empty()) {
        throw StructuralError("configuration has no conclusion");
    }
    for (const auto& c : conclusions) {
        validate_fact(*this, c, "conclusion");
    }
}

bool semantically_equal(const Configuration& a, const Configuration& b)
{
    if (a.dimension != b.dimension || a.points != b.points) {
        return false;
    }
    const auto as_set = [](const std::vector<RankFact>& facts) { return std::set<RankFact>(facts.begin(), facts.end()); };
    return as_set(a.hypotheses) == as_set(b.hypotheses) && as_set(a.conclusions) == as_set(b.conclusions);
}

namespace {

void check_renderable(PointSet set, const Configuration& cfg)
{
    if (set.empty()) {
        throw StructuralError("cannot render an empty point set");
    }
    if (!set.fits(cfg.point_count())) {
        throw StructuralError("point set 0x" + std::to_string(set.bits()) + " has bits beyond point count " +
                              std::to_string(cfg.point_count()));
    }
}

} // namespace

std::string canonical_render(PointSet set, const Configuration& cfg)
{
    check_renderable(set, cfg);
    std::string out;
    for (unsigned i : set.indices()) {
        out += cfg.points[i].name;
        out += " :: ";
    }
    out += "nil";
    return out;
}

std::string concatenated_names(PointSet set, const Configuration& cfg)
{
    check_renderable(set, cfg);
    std::string out;
    for (unsigned i : set.indices()) {
        out += cfg.points[i].name;
    }
    return out;
}

std::string_view to_string(Bound bound)
{
    return bound == Bound::Lo ? "LO" : "HI";
}

std::optional<Bound> parse_bound(std::string_view text)
{
    if (text == "LO") {
        return Bound::Lo;
    }
    if (text == "HI") {
        return Bound::Hi;
    }
    return std::nullopt;
}

namespace {

constexpr std::array<std::string_view, kRuleCount> kRuleNames = {
    "INIT_DEFAULT", "HYP", "MONO_LO", "MONO_HI", "SUBMOD_HI_UNION", "SUBMOD_HI_INTER", "SUBMOD_LO",
};

} // namespace

std::string_view to_string(RuleId rule)
{
    return kRuleNames.at(static_cast<std::size_t>(rule));
}

std::optional<RuleId> parse_rule(std::string_view text)
{
    for (std::size_t i = 0; i < kRuleNames.size(); ++i) {
        if (kRuleNames[i] == text) {
            return static_cast<RuleId>(i);
        }
    }
    return std::nullopt;
}

std::string to_string(const Verdict& verdict)
{
    switch (verdict.status) {
    case Verdict::Status::Accepted:
        return "Accepted";
    case Verdict::Status::RejectedStep:
        return "RejectedStep(" + std::to_string(verdict.step) + "): " + verdict.reason;
    case Verdict::Status::GoalMismatch:
        return "GoalMismatch: " + verdict.reason;
    }
    return "unknown verdict";
}

} // namespace rankprover
