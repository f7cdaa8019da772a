// Independent re-verification of proof traces.
//
// The checker re-implements the rule semantics from the matroid axioms and
// shares no rule code with the saturation engine. It replays a trace on a
// fresh bound store that starts from the default intervals, and for each step
// recomputes the rule's bound from the premise values established so far.

#pragma once

#include "rankprover/core.hpp"
#include "rankprover/proof_emitter.hpp"

namespace rankprover {

// Accepted iff every step is a valid, strictly tightening instance of its rule
// and the final bounds (together with the hypotheses) pin the goal set to the
// goal rank. RejectedStep names the first invalid step; GoalMismatch means all
// steps are valid but the goal is not pinned (or is not a valid goal for cfg).
Verdict check_trace(const Configuration& cfg, const ProofTrace& trace);

// Minimality audit: the trace is accepted and removing any single step makes
// it rejected.
bool check_independence(const Configuration& cfg, const ProofTrace& trace);

} // namespace rankprover
