// Line-oriented ".trace" files:
//
//   rankprover-trace 1
//   goal <mask> <rank>
//   step <id> <RULE> <mask> <LO|HI> <value> prev <id|init> premises <k> {<mask> <LO|HI> <id|init|hyp>}*k operands <m> {<mask>}*m
//   ...
//   end
//
// Masks are decimal bitmasks over the points in introduction order.

#pragma once

#include "rankprover/config_parser.hpp"
#include "rankprover/proof_emitter.hpp"

#include <string>
#include <string_view>

namespace rankprover {

std::string write_trace(const ProofTrace& trace);

// Throws ParseError (with line/column) on malformed input.
ProofTrace parse_trace(std::string_view text);

} // namespace rankprover
