#include "rankprover/proof_emitter.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <unordered_map>

namespace rankprover {

ProofTrace extract_trace(const SaturationState& state, const RankFact& goal, const Configuration& cfg)
{
    const auto iv = state.interval(goal.set);
    if (iv.lo != goal.rank || iv.hi != goal.rank) {
        throw NotDerivable("rk(" + canonical_render(goal.set, cfg) + ") = " + std::to_string(goal.rank) +
                               " is not derivable; residual interval " + to_string(iv),
                           iv);
    }

    std::vector<bool> seen(state.steps().size(), false);
    std::vector<StepId> stack;
    const auto visit = [&](std::optional<StepId> id) {
        if (id && !seen[*id]) {
            seen[*id] = true;
            stack.push_back(*id);
        }
    };
    visit(state.provenance(goal.set, Bound::Lo));
    visit(state.provenance(goal.set, Bound::Hi));
    while (!stack.empty()) {
        const auto& step = state.step(stack.back());
        stack.pop_back();
        visit(step.supersedes);
        for (const auto& p : step.premises) {
            if (p.origin == Origin::Step) {
                visit(p.step);
            }
        }
    }

    ProofTrace trace{goal, {}};
    for (StepId id = 0; id < seen.size(); ++id) {
        if (seen[id]) {
            trace.steps.push_back(state.step(id));
        }
    }
    return trace;
}

std::string lemma_name(PointSet concluded, const Configuration& cfg)
{
    return "L" + concatenated_names(concluded, cfg);
}

std::string statement_text(const Configuration& cfg, const RankFact& conclusion)
{
    auto hyps = cfg.hypotheses;
    std::sort(hyps.begin(), hyps.end());
    std::string out;
    for (const auto& h : hyps) {
        out += "rk(" + canonical_render(h.set, cfg) + ") = " + std::to_string(h.rank) + " -> ";
    }
    out += "rk(" + canonical_render(conclusion.set, cfg) + ") = " + std::to_string(conclusion.rank);
    return out;
}

namespace {

std::string binder_list(const Configuration& cfg)
{
    std::string out;
    for (const auto& p : cfg.points) {
        out += p.name + " ";
    }
    return out;
}

// Renders lemma bodies. A lemma for set S replays the part of the trace that
// pins S, stopping at premises on sets whose lemma comes earlier; those are
// discharged by applying that lemma.
class ScriptWriter {
public:
    ScriptWriter(const Configuration& cfg, const ProofTrace& trace) : cfg_{cfg}, trace_{trace}
    {
        for (const auto& step : trace.steps) {
            by_id_[step.id] = &step;
            for (const auto& p : step.premises) {
                if (p.origin == Origin::Hypothesis) {
                    direct_hypotheses_.insert(p.set.bits());
                }
            }
        }
    }

    ScriptDoc run()
    {
        find_pins();
        ScriptDoc doc;
        doc.prelude = "Require Import lemmas_automation_g.";
        for (std::size_t i = 0; i < pins_.size(); ++i) {
            current_ = i;
            const auto& pin = pins_[i];
            doc.lemmas.push_back({lemma_name(pin.set, cfg_), statement_text(cfg_, {pin.set, pin.value}), body(pin)});
        }
        return doc;
    }

private:
    struct Pin {
        PointSet set;
        unsigned value = 0;
        int position = -1; // index into trace.steps, -1 when known up front
        std::optional<StepId> lo_step;
        std::optional<StepId> hi_step;
    };

    struct Known {
        RankInterval iv;
        std::optional<StepId> lo_step;
        std::optional<StepId> hi_step;
    };

    void find_pins()
    {
        std::map<PointSet::Mask, Known> known;
        const auto touch = [&](PointSet set) -> Known& {
            auto [it, inserted] = known.try_emplace(set.bits());
            if (inserted) {
                it->second.iv = cfg_.default_interval(set);
                if (const auto rank = cfg_.hypothesis_rank(set); rank && uses_hypothesis_directly(set)) {
                    it->second.iv = {*rank, *rank};
                }
            }
            return it->second;
        };
        touch(trace_.goal.set);
        for (const auto& step : trace_.steps) {
            touch(step.target);
            for (const auto& p : step.premises) {
                touch(p.set);
            }
        }
        for (const auto& [mask, k] : known) {
            if (k.iv.pinned()) {
                add_pin({PointSet{mask}, k.iv.lo, -1, std::nullopt, std::nullopt});
            }
        }
        for (std::size_t i = 0; i < trace_.steps.size(); ++i) {
            const auto& step = trace_.steps[i];
            auto& k = known.at(step.target.bits());
            const bool was_pinned = k.iv.pinned();
            if (step.bound == Bound::Lo) {
                k.iv.lo = std::max(k.iv.lo, step.value);
                k.lo_step = step.id;
            } else {
                k.iv.hi = std::min(k.iv.hi, step.value);
                k.hi_step = step.id;
            }
            if (!was_pinned && k.iv.pinned()) {
                add_pin({step.target, k.iv.lo, static_cast<int>(i), k.lo_step, k.hi_step});
            }
        }
        // The goal lemma closes the script.
        const auto goal = std::find_if(pins_.begin(), pins_.end(), [&](const Pin& p) { return p.set == trace_.goal.set; });
        if (goal != pins_.end()) {
            std::rotate(goal, goal + 1, pins_.end());
        }
        for (std::size_t i = 0; i < pins_.size(); ++i) {
            lemma_index_[pins_[i].set.bits()] = i;
        }
    }

    // Hand-written traces may cite a hypothesis without a HYP step.
    bool uses_hypothesis_directly(PointSet set) const { return direct_hypotheses_.count(set.bits()) != 0; }

    void add_pin(Pin pin)
    {
        if (std::none_of(pins_.begin(), pins_.end(), [&](const Pin& p) { return p.set == pin.set; })) {
            pins_.push_back(pin);
        }
    }

    bool has_earlier_lemma(PointSet set) const
    {
        const auto it = lemma_index_.find(set.bits());
        return it != lemma_index_.end() && it->second < current_;
    }

    std::string render(PointSet set) const { return canonical_render(set, cfg_); }
    std::string names(PointSet set) const { return concatenated_names(set, cfg_); }

    static std::string bound_name(std::string_view names, Bound bound, unsigned value)
    {
        return "H" + std::string(names) + (bound == Bound::Lo ? "m" : "M") + std::to_string(value);
    }

    std::string assertion(PointSet set, Bound bound, unsigned value) const
    {
        return "rk(" + render(set) + ") " + (bound == Bound::Lo ? ">= " : "<= ") + std::to_string(value);
    }

    std::string default_tactic(PointSet set, Bound bound) const
    {
        if (bound == Bound::Lo) {
            return set.size() == 1 ? "apply rk_singleton_ge" : "apply rk_nonempty_ge";
        }
        return set.size() <= cfg_.max_rank() ? "apply matroid1_b" : "apply rk_upper_dim";
    }

    std::string body(const Pin& pin)
    {
        // Steps of this lemma: closure from the pin's bounds, cut at sets with an
        // earlier lemma.
        std::set<StepId> included;
        std::vector<StepId> stack;
        const auto visit = [&](std::optional<StepId> id) {
            if (id && included.insert(*id).second) {
                stack.push_back(*id);
            }
        };
        visit(pin.lo_step);
        visit(pin.hi_step);
        while (!stack.empty()) {
            const auto& step = *by_id_.at(stack.back());
            stack.pop_back();
            visit(step.supersedes);
            for (const auto& p : step.premises) {
                if (p.origin == Origin::Step && (p.set == pin.set || !has_earlier_lemma(p.set))) {
                    visit(p.step);
                }
            }
        }

        std::string out = "intros " + binder_list(cfg_);
        auto hyps = cfg_.hypotheses;
        std::sort(hyps.begin(), hyps.end());
        if (!hyps.empty()) {
            out += "\n";
            for (const auto& h : hyps) {
                out += "H" + names(h.set) + "eq ";
            }
        }
        out += ".\n";

        for (const auto id : included) {
            out += render_step(*by_id_.at(id), included);
        }

        const auto own = names(pin.set);
        for (const auto bound : {Bound::Lo, Bound::Hi}) {
            const auto step = bound == Bound::Lo ? pin.lo_step : pin.hi_step;
            if (!step) {
                const auto name = bound_name(own, bound, pin.value);
                if (const auto rank = cfg_.hypothesis_rank(pin.set); rank && uses_hypothesis_directly(pin.set)) {
                    out += "assert(" + name + " : " + assertion(pin.set, bound, pin.value) + ") by (" +
                           (bound == Bound::Lo ? "solve_hyps_min H" : "solve_hyps_max H") + own + "eq " + name +
                           ").\n";
                } else {
                    out += "assert(" + name + " : " + assertion(pin.set, bound, pin.value) + ") by (" +
                           default_tactic(pin.set, bound) + ").\n";
                }
            }
        }
        out += "lia.\n";
        return out;
    }

    // Name under which a premise is available inside the current block; emits
    // the lines that introduce it when it is not an earlier assert of the body.
    std::string premise_name(const Premise& p, const std::set<StepId>& included, std::string& block) const
    {
        const auto set_names = names(p.set);
        if (p.origin == Origin::Step && included.count(p.step) != 0) {
            return bound_name(set_names, p.bound, by_id_.at(p.step)->value);
        }
        unsigned value = 0;
        switch (p.origin) {
        case Origin::Step:
            value = by_id_.at(p.step)->value;
            break;
        case Origin::Hypothesis:
            value = cfg_.hypothesis_rank(p.set).value_or(0);
            break;
        case Origin::Default: {
            const auto iv = cfg_.default_interval(p.set);
            value = p.bound == Bound::Lo ? iv.lo : iv.hi;
            break;
        }
        }
        const auto tmp = "H" + set_names + (p.bound == Bound::Lo ? "mtmp" : "Mtmp");
        if (has_earlier_lemma(p.set)) {
            const auto& pin = pins_[lemma_index_.at(p.set.bits())];
            block += "\ttry assert(H" + set_names + "eq : rk(" + render(p.set) + ") = " + std::to_string(pin.value) +
                     ") by (apply " + lemma_name(p.set, cfg_) + " with";
            for (const auto& point : cfg_.points) {
                block += " (" + point.name + " := " + point.name + ")";
            }
            block += " ;try assumption).\n";
            block += "\tassert(" + tmp + " : " + assertion(p.set, p.bound, value) + ") by (" +
                     (p.bound == Bound::Lo ? "solve_hyps_min H" : "solve_hyps_max H") + set_names + "eq " +
                     bound_name(set_names, p.bound, value) + ").\n";
        } else {
            block += "\tassert(" + tmp + " : " + assertion(p.set, p.bound, value) + ") by (" +
                     default_tactic(p.set, p.bound) + ").\n";
        }
        return tmp;
    }

    std::string render_step(const DeductionStep& step, const std::set<StepId>& included) const
    {
        const auto target_names = names(step.target);
        const auto name = bound_name(target_names, step.bound, step.value);
        if (step.rule == RuleId::Hyp) {
            return "assert(" + name + " : " + assertion(step.target, step.bound, step.value) + ") by (" +
                   (step.bound == Bound::Lo ? "solve_hyps_min H" : "solve_hyps_max H") + target_names + "eq " + name +
                   ").\n";
        }
        std::string block;
        std::vector<std::string> premise_names;
        for (const auto& p : step.premises) {
            premise_names.push_back(premise_name(p, included, block));
        }
        const auto x = "(" + render(step.operands.at(0)) + ")";
        const auto y = "(" + render(step.operands.at(1)) + ")";
        const auto v = std::to_string(step.value);
        switch (step.rule) {
        case RuleId::MonoLo:
            block += "\tassert(Hcomp : " + v + " <= " + v + ") by (repeat constructor).\n";
            block += "\tassert(Hincl : incl " + x + " " + y + ") by (repeat clear_all_rk;my_inO).\n";
            block += "\tassert(HT := rule_5 " + x + " " + y + " " + v + " " + v + " " + premise_names.at(0) +
                     " Hcomp Hincl);apply HT.\n";
            break;
        case RuleId::MonoHi:
            block += "\tassert(Hincl : incl " + x + " " + y + ") by (repeat clear_all_rk;my_inO).\n";
            block += "\tassert(HT := mono_hi " + x + " " + y + " " + v + " " + premise_names.at(0) +
                     " Hincl);apply HT.\n";
            break;
        default: {
            std::string rule{to_string(step.rule)};
            std::transform(rule.begin(), rule.end(), rule.begin(), [](char c) { return static_cast<char>(std::tolower(c)); });
            block += "\tassert(HT := " + rule + " " + x + " " + y;
            for (const auto& pn : premise_names) {
                block += " " + pn;
            }
            block += ");apply HT.\n";
            break;
        }
        }
        return "assert(" + name + " : " + assertion(step.target, step.bound, step.value) + ").\n{\n" + block + "}\n";
    }

    const Configuration& cfg_;
    const ProofTrace& trace_;
    std::unordered_map<StepId, const DeductionStep*> by_id_;
    std::set<PointSet::Mask> direct_hypotheses_;
    std::vector<Pin> pins_;
    std::unordered_map<PointSet::Mask, std::size_t> lemma_index_;
    std::size_t current_ = 0;
};

} // namespace

std::string lemma_header(const Configuration& cfg, const ScriptLemma& lemma)
{
    return "Lemma " + lemma.name + " : forall " + binder_list(cfg) + ",\n" + lemma.statement + ".";
}

ScriptDoc emit_script(const Configuration& cfg, const ProofTrace& trace)
{
    return ScriptWriter{cfg, trace}.run();
}

std::string render_script(const Configuration& cfg, const ScriptDoc& doc)
{
    std::string out = doc.prelude + "\n\n";
    for (const auto& lemma : doc.lemmas) {
        out += lemma_header(cfg, lemma) + "\nProof.\n\n" + lemma.body + "Qed.\n\n";
    }
    return out;
}

std::string script_file_name(const Configuration& cfg, const RankFact& goal)
{
    return "pprove_" + lemma_name(goal.set, cfg) + ".v";
}

} // namespace rankprover
