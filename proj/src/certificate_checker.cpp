#include "rankprover/certificate_checker.hpp"

#include <algorithm>
#include <unordered_map>

namespace rankprover {

namespace {

struct Rejected {
    std::string reason;
};

struct Entry {
    int lo = 0;
    int hi = 0;
    std::optional<StepId> lo_by;
    std::optional<StepId> hi_by;
};

// A required premise slot of a rule instance.
struct Need {
    PointSet set;
    Bound bound;
};

class Replayer {
public:
    Replayer(const Configuration& cfg, const ProofTrace& trace) : cfg_{cfg}, trace_{trace}
    {
        n_ = cfg.point_count();
    }

    Verdict run()
    {
        std::optional<StepId> last_id;
        for (const auto& step : trace_.steps) {
            try {
                if (last_id && step.id <= *last_id) {
                    throw Rejected{"step ids must be strictly ascending"};
                }
                check(step);
            } catch (const Rejected& r) {
                return {Verdict::Status::RejectedStep, step.id, r.reason};
            }
            last_id = step.id;
            seen_.emplace(step.id, &step);
        }
        return goal_verdict();
    }

private:
    // rk of a subset as constrained so far; the empty set has rank 0.
    Entry& entry(PointSet set)
    {
        auto [it, inserted] = store_.try_emplace(set.bits());
        if (inserted) {
            it->second.lo = 1;
            it->second.hi = static_cast<int>(std::min<unsigned>(set.size(), cfg_.dimension + 1));
        }
        return it->second;
    }

    void require_set(PointSet set, std::string_view what) const
    {
        if (set.empty() || (set.bits() >> n_) != 0) {
            throw Rejected{std::string(what) + " is not a non-empty subset of the configuration's points"};
        }
    }

    int default_value(PointSet set, Bound bound) const
    {
        return bound == Bound::Lo ? 1 : static_cast<int>(std::min<unsigned>(set.size(), cfg_.dimension + 1));
    }

    std::optional<unsigned> hypothesis(PointSet set) const
    {
        for (const auto& h : cfg_.hypotheses) {
            if (h.set == set) {
                return h.rank;
            }
        }
        return std::nullopt;
    }

    int premise_value(const Premise& p)
    {
        require_set(p.set, "premise set");
        switch (p.origin) {
        case Origin::Default:
            return default_value(p.set, p.bound);
        case Origin::Hypothesis: {
            const auto rank = hypothesis(p.set);
            if (!rank) {
                throw Rejected{"premise cites a hypothesis that the configuration does not have"};
            }
            return static_cast<int>(*rank);
        }
        case Origin::Step: {
            const auto it = seen_.find(p.step);
            if (it == seen_.end()) {
                throw Rejected{"premise cites step " + std::to_string(p.step) + ", which does not precede it"};
            }
            const auto& cited = *it->second;
            if (cited.target != p.set || cited.bound != p.bound) {
                throw Rejected{"premise cites step " + std::to_string(p.step) + ", which bounds a different set or kind"};
            }
            return static_cast<int>(cited.value);
        }
        }
        throw Rejected{"unknown premise origin"};
    }

    // Matches the step's premises one-to-one against the rule's required slots
    // and returns their values in slot order.
    std::vector<int> resolve(const DeductionStep& step, const std::vector<Need>& needs)
    {
        if (step.premises.size() != needs.size()) {
            throw Rejected{"rule needs " + std::to_string(needs.size()) + " premise(s), step lists " +
                           std::to_string(step.premises.size())};
        }
        std::vector<bool> used(step.premises.size(), false);
        std::vector<int> values;
        for (const auto& need : needs) {
            bool found = false;
            for (std::size_t i = 0; i < step.premises.size() && !found; ++i) {
                const auto& p = step.premises[i];
                if (!used[i] && p.set == need.set && p.bound == need.bound) {
                    used[i] = true;
                    found = true;
                    values.push_back(premise_value(p));
                }
            }
            if (!found) {
                throw Rejected{"missing premise on mask " + std::to_string(need.set.bits()) + " " +
                               std::string(to_string(need.bound))};
            }
        }
        return values;
    }

    std::pair<PointSet, PointSet> operand_pair(const DeductionStep& step)
    {
        if (step.operands.size() != 2) {
            throw Rejected{"rule needs two operands"};
        }
        require_set(step.operands[0], "operand X");
        require_set(step.operands[1], "operand Y");
        return {step.operands[0], step.operands[1]};
    }

    void expect_target(const DeductionStep& step, PointSet target, Bound bound)
    {
        if (step.target != target || step.bound != bound) {
            throw Rejected{"rule concludes on mask " + std::to_string(target.bits()) + " " +
                           std::string(to_string(bound)) + ", step claims mask " + std::to_string(step.target.bits()) +
                           " " + std::string(to_string(step.bound))};
        }
    }

    // The bound the rule instance entails for the step's target.
    int entailed(const DeductionStep& step)
    {
        switch (step.rule) {
        case RuleId::InitDefault:
            throw Rejected{"INIT_DEFAULT bounds are implicit and never tighten"};
        case RuleId::Hyp: {
            if (!step.premises.empty() || !step.operands.empty()) {
                throw Rejected{"HYP takes no premises or operands"};
            }
            const auto rank = hypothesis(step.target);
            if (!rank) {
                throw Rejected{"no hypothesis on the target set"};
            }
            if (step.value != *rank) {
                throw Rejected{"HYP value differs from the hypothesis rank " + std::to_string(*rank)};
            }
            return static_cast<int>(*rank);
        }
        case RuleId::MonoLo: {
            // matroid2: X c Y => rk X <= rk Y
            const auto [x, y] = operand_pair(step);
            if (!x.proper_subset_of(y)) {
                throw Rejected{"MONO_LO needs X strictly included in Y"};
            }
            expect_target(step, y, Bound::Lo);
            return resolve(step, {{x, Bound::Lo}})[0];
        }
        case RuleId::MonoHi: {
            const auto [x, y] = operand_pair(step);
            if (!x.proper_subset_of(y)) {
                throw Rejected{"MONO_HI needs X strictly included in Y"};
            }
            expect_target(step, x, Bound::Hi);
            return resolve(step, {{y, Bound::Hi}})[0];
        }
        case RuleId::SubmodHiUnion: {
            // matroid3: rk(X u Y) + rk(X n Y) <= rk X + rk Y
            const auto [x, y] = operand_pair(step);
            const auto i = x & y;
            expect_target(step, x | y, Bound::Hi);
            if (i.empty()) {
                const auto v = resolve(step, {{x, Bound::Hi}, {y, Bound::Hi}});
                return v[0] + v[1];
            }
            const auto v = resolve(step, {{x, Bound::Hi}, {y, Bound::Hi}, {i, Bound::Lo}});
            return v[0] + v[1] - v[2];
        }
        case RuleId::SubmodHiInter: {
            const auto [x, y] = operand_pair(step);
            const auto i = x & y;
            if (i.empty()) {
                throw Rejected{"SUBMOD_HI_INTER needs X and Y to intersect"};
            }
            expect_target(step, i, Bound::Hi);
            const auto v = resolve(step, {{x, Bound::Hi}, {y, Bound::Hi}, {x | y, Bound::Lo}});
            return v[0] + v[1] - v[2];
        }
        case RuleId::SubmodLo: {
            const auto [x, y] = operand_pair(step);
            const auto i = x & y;
            expect_target(step, x, Bound::Lo);
            if (i.empty()) {
                const auto v = resolve(step, {{x | y, Bound::Lo}, {y, Bound::Hi}});
                return v[0] - v[1];
            }
            const auto v = resolve(step, {{x | y, Bound::Lo}, {i, Bound::Lo}, {y, Bound::Hi}});
            return v[0] + v[1] - v[2];
        }
        }
        throw Rejected{"unknown rule"};
    }

    void check(const DeductionStep& step)
    {
        require_set(step.target, "target");
        const int bound = entailed(step);
        const int claimed = static_cast<int>(step.value);
        auto& e = entry(step.target);
        const bool lower = step.bound == Bound::Lo;

        if (lower ? claimed > bound : claimed < bound) {
            throw Rejected{"claimed " + std::string(lower ? "lower" : "upper") + " bound " + std::to_string(claimed) +
                           " is not entailed; the rule gives " + std::to_string(bound)};
        }
        const auto& current_by = lower ? e.lo_by : e.hi_by;
        if (step.supersedes != current_by) {
            throw Rejected{"step does not extend the current bound of its target"};
        }
        const int current = lower ? e.lo : e.hi;
        if (lower ? claimed <= current : claimed >= current) {
            throw Rejected{"bound " + std::to_string(claimed) + " does not strictly tighten " + std::to_string(current)};
        }
        if (lower ? claimed > e.hi : claimed < e.lo) {
            throw Rejected{"bound " + std::to_string(claimed) + " empties the interval"};
        }
        (lower ? e.lo : e.hi) = claimed;
        (lower ? e.lo_by : e.hi_by) = step.id;
    }

    Verdict goal_verdict()
    {
        const auto& goal = trace_.goal;
        if (goal.set.empty() || (goal.set.bits() >> n_) != 0) {
            return {Verdict::Status::GoalMismatch, 0, "goal set is not a non-empty subset of the configuration"};
        }
        auto e = entry(goal.set);
        if (const auto rank = hypothesis(goal.set)) {
            e.lo = std::max(e.lo, static_cast<int>(*rank));
            e.hi = std::min(e.hi, static_cast<int>(*rank));
        }
        const int want = static_cast<int>(goal.rank);
        if (e.lo != want || e.hi != want) {
            return {Verdict::Status::GoalMismatch, 0,
                    "goal rank " + std::to_string(goal.rank) + " but final interval is [" + std::to_string(e.lo) +
                        ", " + std::to_string(e.hi) + "]"};
        }
        return {Verdict::Status::Accepted, 0, {}};
    }

    const Configuration& cfg_;
    const ProofTrace& trace_;
    unsigned n_ = 0;
    std::unordered_map<PointSet::Mask, Entry> store_;
    std::unordered_map<StepId, const DeductionStep*> seen_;
};

} // namespace

Verdict check_trace(const Configuration& cfg, const ProofTrace& trace)
{
    try {
        cfg.validate();
    } catch (const StructuralError& e) {
        return {Verdict::Status::GoalMismatch, 0, std::string("invalid configuration: ") + e.what()};
    }
    return Replayer{cfg, trace}.run();
}

bool check_independence(const Configuration& cfg, const ProofTrace& trace)
{
    if (!check_trace(cfg, trace).accepted()) {
        return false;
    }
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        auto reduced = trace;
        reduced.steps.erase(reduced.steps.begin() + static_cast<std::ptrdiff_t>(i));
        if (check_trace(cfg, reduced).accepted()) {
            return false;
        }
    }
    return true;
}

} // namespace rankprover
