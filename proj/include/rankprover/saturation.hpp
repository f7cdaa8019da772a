// Rank-interval saturation over the powerset lattice of a configuration.
//
// Every non-empty subset X carries an interval [lo(X), hi(X)] that starts at
// [1, min(|X|, dim+1)] and is narrowed by the hypotheses and by five
// propagation rules derived from the matroid axioms (rk(empty) = 0):
//
//   MONO_LO          X c Y  =>  lo(Y) >= lo(X)
//   MONO_HI          X c Y  =>  hi(X) <= hi(Y)
//   SUBMOD_HI_UNION  hi(X u Y) <= hi(X) + hi(Y) - lo(X n Y)
//   SUBMOD_HI_INTER  hi(X n Y) <= hi(X) + hi(Y) - lo(X u Y)
//   SUBMOD_LO        lo(X)     >= lo(X u Y) + lo(X n Y) - hi(Y)
//
// Every tightening is recorded as a DeductionStep with the exact premises it
// used, so a proof can be extracted and re-checked afterwards.

#pragma once

#include "rankprover/core.hpp"

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rankprover {

// The hypotheses contradict each other (or the axioms).
class InconsistencyError : public Error {
public:
    InconsistencyError(const std::string& message, std::optional<DeductionStep> witness)
        : Error(message), witness_{std::move(witness)}
    {}

    // The step that would have emptied an interval, if a rule caused it.
    [[nodiscard]] const std::optional<DeductionStep>& witness() const { return witness_; }

private:
    std::optional<DeductionStep> witness_;
};

// Step or time budget exhausted. Says nothing about derivability.
class SaturationAborted : public Error {
public:
    using Error::Error;
};

// Which submodularity pairs (X, Y) the saturation loop considers. Comparable
// pairs never tighten anything and are always skipped.
enum class PairStrategy : std::uint8_t {
    Full,     // every incomparable pair
    Adjacent, // pairs where min(|X \ Y|, |Y \ X|) <= 2
};

std::string_view to_string(PairStrategy strategy);
std::optional<PairStrategy> parse_strategy(std::string_view text);

// Full up to 10 points, Adjacent beyond.
PairStrategy default_strategy(unsigned point_count);

inline constexpr std::uint64_t kDefaultStepLimit = 10'000'000;

struct SaturationOptions {
    PairStrategy strategy = PairStrategy::Full;
    // When set, the worklist pops nodes in a pseudo-random order drawn from this
    // seed instead of FIFO order.
    std::optional<std::uint64_t> shuffle_seed;
    std::uint64_t step_limit = kDefaultStepLimit;
    std::optional<std::chrono::milliseconds> time_limit;
};

struct SaturationStats {
    std::uint64_t subsets = 0;
    std::uint64_t steps = 0;
    std::uint64_t nodes_processed = 0;
    std::uint64_t subsets_touched = 0;
    std::array<std::uint64_t, kRuleCount> evaluated{};
    std::array<std::uint64_t, kRuleCount> applied{};
    std::chrono::nanoseconds wall_time{0};
};

// key=value lines.
std::string format_stats(const SaturationStats& stats);

class SaturationState {
public:
    // init_state: default intervals, then one HYP step per hypothesis bound that
    // actually moves. Throws InconsistencyError if a hypothesis lies outside its
    // default interval.
    static SaturationState init(const Configuration& cfg);

    [[nodiscard]] unsigned dimension() const { return dim_; }
    [[nodiscard]] unsigned point_count() const { return n_; }

    [[nodiscard]] RankInterval interval(PointSet set) const;
    // Step that last tightened (set, bound); empty while the bound is default.
    [[nodiscard]] std::optional<StepId> provenance(PointSet set, Bound bound) const;
    [[nodiscard]] std::span<const DeductionStep> steps() const { return steps_; }
    [[nodiscard]] const DeductionStep& step(StepId id) const { return steps_.at(id); }

    // Interval map indexed by mask; entry 0 (the empty set) is {0, 0}.
    [[nodiscard]] std::vector<RankInterval> intervals() const;

    [[nodiscard]] const SaturationStats& stats() const { return stats_; }
    SaturationStats& stats() { return stats_; }

    // Evaluates one rule instance. Operands: MONO_LO/MONO_HI take X c Y
    // (strict); the submodularity rules take any non-empty X, Y (X n Y must be
    // non-empty for SUBMOD_HI_INTER). SUBMOD_LO targets X. Appends and returns
    // the step when it strictly tightens a bound. Throws InconsistencyError if
    // the tightened bound crosses the opposite one, StructuralError on bad
    // operands.
    std::optional<DeductionStep> apply_rule(RuleId rule, PointSet x, PointSet y);

private:
    friend class Saturator;

    SaturationState(unsigned dim, unsigned n);

    // apply_rule without operand validation; the saturation loop only
    // generates well-formed instances.
    std::optional<DeductionStep> evaluate(RuleId rule, PointSet x, PointSet y);

    [[nodiscard]] std::size_t slot(PointSet set) const;
    [[nodiscard]] Premise premise(PointSet set, Bound bound) const;
    [[nodiscard]] unsigned lo_of(PointSet set) const { return set.empty() ? 0U : lo_[set.bits()]; }
    [[nodiscard]] unsigned hi_of(PointSet set) const { return set.empty() ? 0U : hi_[set.bits()]; }

    // Records a tightening if `value` is strictly better than the current bound.
    std::optional<DeductionStep> tighten(RuleId rule, PointSet target, Bound bound, int value,
                                         std::vector<Premise> premises, std::vector<PointSet> operands);

    unsigned dim_;
    unsigned n_;
    std::vector<std::uint8_t> lo_;
    std::vector<std::uint8_t> hi_;
    // Step id + 1 of the last tightening, 0 for default.
    std::vector<std::uint32_t> lo_src_;
    std::vector<std::uint32_t> hi_src_;
    std::vector<DeductionStep> steps_;
    SaturationStats stats_;
};

inline SaturationState init_state(const Configuration& cfg)
{
    return SaturationState::init(cfg);
}

// Worklist fixpoint. Throws InconsistencyError or SaturationAborted.
SaturationState saturate(const Configuration& cfg, const SaturationOptions& options = {});

// interval(goal.set) == [goal.rank, goal.rank].
bool entails(const SaturationState& state, const RankFact& goal);

// Re-applies a recorded step list from init_state, checking that every step
// reproduces the same target, bound and value. Throws Error on divergence.
SaturationState replay(const Configuration& cfg, std::span<const DeductionStep> steps);

} // namespace rankprover
