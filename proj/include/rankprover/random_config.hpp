// Random consistent configurations for sweeps and property tests.
//
// Points are random non-zero vectors of GF(q)^(dim+1), so every rank fact read
// off them holds in an actual (linear) matroid and the hypotheses are always
// consistent.

#pragma once

#include "rankprover/core.hpp"

#include <cstdint>
#include <random>

namespace rankprover {

struct RandomConfigSpec {
    unsigned points = 4;
    unsigned dimension = 3;
    unsigned min_hypotheses = 0;
    unsigned max_hypotheses = 4;
    unsigned conclusions = 1;
};

Configuration random_configuration(std::mt19937_64& rng, const RandomConfigSpec& spec);

} // namespace rankprover
