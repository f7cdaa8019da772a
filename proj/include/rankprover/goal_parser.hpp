// Harvests a Configuration from a Coq-style lemma statement such as
//
//   Lemma ex2 : forall A B C D:Point,
//     rk(A :: D :: B :: nil) = 3 -> rk(C :: A :: nil) = 2 ->
//     rk(A :: C :: B :: nil) = 3.
//
// Binders of type Point become the points (binder order = index order), every
// rk(LIST) = INT premise becomes a hypothesis and the final one the conclusion.
// Other premises are dropped with a warning.

#pragma once

#include "rankprover/config_parser.hpp"
#include "rankprover/core.hpp"

#include <string_view>
#include <vector>

namespace rankprover {

// Parses the first Lemma/Theorem in `text`; anything after its closing '.'
// (e.g. "Proof.") is ignored. The dimension cannot be read off a statement and
// is supplied by the caller.
Configuration parse_goal(std::string_view text, unsigned dimension = 3, std::vector<Warning>* warnings = nullptr);

// Same point count and equal hypothesis/conclusion multisets, comparing sets
// rather than the order points were written in.
bool match_statement(const Configuration& goal, const Configuration& proved);

} // namespace rankprover
