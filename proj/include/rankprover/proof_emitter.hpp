// Proof extraction from a saturated state and rendering as a Coq-style script.

#pragma once

#include "rankprover/core.hpp"
#include "rankprover/saturation.hpp"

#include <string>
#include <vector>

namespace rankprover {

// Goal bound that saturation left open.
class NotDerivable : public Error {
public:
    NotDerivable(const std::string& message, RankInterval residual) : Error(message), residual_{residual} {}

    [[nodiscard]] RankInterval residual() const { return residual_; }

private:
    RankInterval residual_;
};

// The deduction steps a goal depends on, in ascending id order. Ids are the
// engine's; premises and `supersedes` refer to steps inside the trace.
struct ProofTrace {
    RankFact goal;
    std::vector<DeductionStep> steps;
};

// Backward closure over premises and superseded bounds, starting from the two
// bounds of the goal set. Throws NotDerivable when the goal is not pinned.
ProofTrace extract_trace(const SaturationState& state, const RankFact& goal, const Configuration& cfg);

// "L" followed by the member names in introduction order.
std::string lemma_name(PointSet concluded, const Configuration& cfg);

struct ScriptLemma {
    std::string name;
    // "rk(..) = k -> ... -> rk(..) = k", without binders.
    std::string statement;
    std::string body;
};

struct ScriptDoc {
    std::string prelude;
    std::vector<ScriptLemma> lemmas;
};

// Hypotheses of `cfg` in ascending mask order followed by the concluded fact.
std::string statement_text(const Configuration& cfg, const RankFact& conclusion);

// "Lemma NAME : forall A B C D ,\n<statement>."
std::string lemma_header(const Configuration& cfg, const ScriptLemma& lemma);

// One lemma per subset pinned along the trace (hypothesis sets, pinned
// premises, intermediate results), the goal lemma last. Every lemma carries the
// full hypothesis list.
ScriptDoc emit_script(const Configuration& cfg, const ProofTrace& trace);

std::string render_script(const Configuration& cfg, const ScriptDoc& doc);

// "pprove_<lemma>.v"
std::string script_file_name(const Configuration& cfg, const RankFact& goal);

} // namespace rankprover
