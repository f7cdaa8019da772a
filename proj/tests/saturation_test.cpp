#include "rankprover/config_parser.hpp"
#include "rankprover/model_oracle.hpp"
#include "rankprover/saturation.hpp"
#include "test_support.hpp"

#include <catch_amalgamated.hpp>

#include <map>

using namespace rankprover;
using rankprover::testing::load_config;

namespace {

constexpr PointSet kA{0b0001};
constexpr PointSet kB{0b0010};
constexpr PointSet kAB{0b0011};
constexpr PointSet kAC{0b0101};
constexpr PointSet kAD{0b1001};
constexpr PointSet kBD{0b1010};
constexpr PointSet kABC{0b0111};
constexpr PointSet kABD{0b1011};
constexpr PointSet kABCD{0b1111};

Configuration points(unsigned n, unsigned dim = 3)
{
    Configuration cfg;
    cfg.dimension = dim;
    for (unsigned i = 0; i < n; ++i) {
        cfg.points.push_back({i, std::string(1, static_cast<char>('A' + i))});
    }
    cfg.conclusions.push_back({kA, 1});
    return cfg;
}

// Sum over all subsets of the initial interval widths.
std::uint64_t width_budget(const Configuration& cfg)
{
    std::uint64_t total = 0;
    for (auto s : subset_iter(cfg.point_count())) {
        const auto d = cfg.default_interval(s);
        total += d.hi - d.lo;
    }
    return total;
}

std::vector<Configuration> random_corpus(std::uint64_t seed, int count, unsigned max_points)
{
    std::mt19937_64 rng(seed);
    std::vector<Configuration> out;
    for (int i = 0; i < count; ++i) {
        RandomConfigSpec spec;
        spec.points = std::uniform_int_distribution<unsigned>(3, max_points)(rng);
        spec.max_hypotheses = 2 * spec.points;
        out.push_back(random_configuration(rng, spec));
    }
    return out;
}

} // namespace

TEST_CASE("init_state")
{
    const auto ex2 = load_config("ex2.g");
    const auto state = init_state(ex2);
    CHECK(state.interval(kAC) == RankInterval{2, 2});
    CHECK(state.interval(kAB) == RankInterval{1, 2});
    CHECK(state.interval(kABCD) == RankInterval{1, 4});
    for (unsigned i = 0; i < 4; ++i) {
        CHECK(state.interval(PointSet::singleton(i)) == RankInterval{1, 1});
    }
    // AC:2, CD:2 and ABD:3 move only the lower bound; ACD:2 moves both.
    REQUIRE(state.steps().size() == 5);
    for (const auto& s : state.steps()) {
        CHECK(s.rule == RuleId::Hyp);
        CHECK(s.premises.empty());
    }
    CHECK_FALSE(state.provenance(kAB, Bound::Lo).has_value());

    auto plane = points(5, 2);
    CHECK(init_state(plane).interval(PointSet{0b11111}) == RankInterval{1, 3});
}

TEST_CASE("apply_rule")
{
    const auto ex2 = load_config("ex2.g");

    SECTION("MONO_LO lifts a superset")
    {
        auto state = init_state(ex2);
        const auto step = state.apply_rule(RuleId::MonoLo, kAC, kABC);
        REQUIRE(step);
        CHECK(step->target == kABC);
        CHECK(step->bound == Bound::Lo);
        CHECK(step->value == 2);
        REQUIRE(step->premises.size() == 1);
        CHECK(step->premises[0].set == kAC);
        CHECK(step->premises[0].origin == Origin::Step);
        CHECK(state.interval(kABC) == RankInterval{2, 3});
        CHECK(state.provenance(kABC, Bound::Lo) == step->id);
    }
    SECTION("MONO_HI with X = Y does nothing")
    {
        auto state = init_state(ex2);
        CHECK_THROWS_AS(state.apply_rule(RuleId::MonoHi, kAB, kAB), StructuralError);
        CHECK_FALSE(state.apply_rule(RuleId::MonoHi, kAB, kABD).has_value());
    }
    SECTION("SUBMOD_LO on AD, BD")
    {
        // lo(AD) >= lo(ABD) + lo(D) - hi(BD) = 3 + 1 - 2
        auto state = init_state(ex2);
        const auto step = state.apply_rule(RuleId::SubmodLo, kAD, kBD);
        REQUIRE(step);
        CHECK(step->target == kAD);
        CHECK(step->value == 2);
        CHECK(step->premises.size() == 3);
    }
    SECTION("operands outside the configuration")
    {
        auto state = init_state(ex2);
        CHECK_THROWS_AS(state.apply_rule(RuleId::MonoLo, kA, PointSet{0b10001}), StructuralError);
        CHECK_THROWS_AS(state.apply_rule(RuleId::SubmodHiInter, kA, kB), StructuralError);
        CHECK_THROWS_AS(state.apply_rule(RuleId::Hyp, kA, kB), StructuralError);
    }
    SECTION("crossing bounds is an inconsistency")
    {
        auto cfg = points(3);
        cfg.hypotheses = {{kAB, 2}, {kABC, 1}};
        auto state = init_state(cfg);
        CHECK_THROWS_AS(state.apply_rule(RuleId::MonoLo, kAB, kABC), InconsistencyError);
    }
}

TEST_CASE("saturate ex2")
{
    const auto ex2 = load_config("ex2.g");
    const auto state = saturate(ex2);
    CHECK(state.interval(kABC) == RankInterval{3, 3});
    CHECK(state.interval(kB) == RankInterval{1, 1});
    CHECK(state.interval(kAD) == RankInterval{2, 2});
    CHECK(state.interval(kAC) == RankInterval{2, 2});
    CHECK(entails(state, {kABC, 3}));
    CHECK_FALSE(entails(state, {kAB, 1}));
    CHECK(entails(state, {PointSet{0b0100}, 1}));
    CHECK(state.stats().subsets == 15);
    CHECK(state.stats().steps == state.steps().size());
}

TEST_CASE("inconsistent hypotheses")
{
    auto cfg = points(3);
    cfg.hypotheses = {{kAB, 2}, {kABC, 1}};
    CHECK_THROWS_AS(saturate(cfg), InconsistencyError);

    // Only detectable by propagation: A, B, C collinear, and A, B distinct
    // points, yet A, C on a different line through B.
    auto deep = points(4);
    deep.hypotheses = {{kAB, 2}, {kABC, 2}, {kABD, 2}, {PointSet{0b1101}, 3}};
    try {
        saturate(deep);
        FAIL("expected an inconsistency");
    } catch (const InconsistencyError& e) {
        REQUIRE(e.witness().has_value());
    }
}

TEST_CASE("step limit aborts")
{
    const auto ex2 = load_config("ex2.g");
    SaturationOptions opts;
    opts.step_limit = 5;
    CHECK_THROWS_AS(saturate(ex2, opts), SaturationAborted);
    opts.step_limit = kDefaultStepLimit;
    opts.time_limit = std::chrono::milliseconds(0);
    CHECK_THROWS_AS(saturate(load_config("desargues3d.g"), opts), SaturationAborted);
}

TEST_CASE("strategies")
{
    CHECK(default_strategy(10) == PairStrategy::Full);
    CHECK(default_strategy(11) == PairStrategy::Adjacent);
    CHECK(parse_strategy("adjacent") == PairStrategy::Adjacent);
    CHECK_FALSE(parse_strategy("fast").has_value());

    const auto ex2 = load_config("ex2.g");
    SaturationOptions adjacent;
    adjacent.strategy = PairStrategy::Adjacent;
    CHECK(entails(saturate(ex2, adjacent), {kABC, 3}));
}

TEST_CASE("invariants over random configurations")
{
    for (const auto& cfg : random_corpus(99, 40, 7)) {
        std::optional<SaturationState> state;
        try {
            state.emplace(saturate(cfg));
        } catch (const InconsistencyError&) {
            FAIL("random configurations are realizable, hence consistent");
        }
        // Every step strictly tightens one unit at least, bounded by the total width.
        CHECK(state->steps().size() <= width_budget(cfg) + cfg.hypotheses.size());

        std::map<std::pair<PointSet::Mask, Bound>, unsigned> last;
        for (const auto& s : state->steps()) {
            const auto key = std::make_pair(s.target.bits(), s.bound);
            if (const auto it = last.find(key); it != last.end()) {
                CHECK((s.bound == Bound::Lo ? s.value > it->second : s.value < it->second));
            }
            last[key] = s.value;
        }

        for (auto x : subset_iter(cfg.point_count())) {
            const auto iv = state->interval(x);
            const auto d = cfg.default_interval(x);
            CHECK(1 <= iv.lo);
            CHECK(iv.lo <= iv.hi);
            CHECK(iv.hi <= d.hi);
        }

        const auto replayed = replay(cfg, state->steps());
        CHECK(replayed.intervals() == state->intervals());
    }
}

TEST_CASE("schedules reach the same fixpoint")
{
    auto corpus = random_corpus(5, 10, 7);
    corpus.push_back(load_config("ex2.g"));
    for (const auto& cfg : corpus) {
        const auto reference = saturate(cfg).intervals();
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            SaturationOptions opts;
            opts.shuffle_seed = seed;
            CHECK(saturate(cfg, opts).intervals() == reference);
        }
    }
}

TEST_CASE("fixpoint intervals contain every model")
{
    for (const auto& cfg : random_corpus(17, 30, 5)) {
        const auto intervals = saturate(cfg).intervals();
        enumerate_models(cfg, [&](const RankModel& m) {
            for (std::size_t mask = 1; mask < intervals.size(); ++mask) {
                CHECK(intervals[mask].lo <= m.rank[mask]);
                CHECK(m.rank[mask] <= intervals[mask].hi);
            }
            return true;
        });
    }
}

TEST_CASE("replay rejects a doctored step list")
{
    const auto ex2 = load_config("ex2.g");
    const auto state = saturate(ex2);
    std::vector<DeductionStep> steps(state.steps().begin(), state.steps().end());
    steps.back().value += 1;
    CHECK_THROWS_AS(replay(ex2, steps), Error);
}

TEST_CASE("format_stats is key=value")
{
    const auto text = format_stats(saturate(load_config("ex2.g")).stats());
    CHECK(text.find("steps=") != std::string::npos);
    CHECK(text.find("applied.MONO_LO=") != std::string::npos);
    CHECK(text.find("subsets_touched=") != std::string::npos);
    CHECK(text.find("wall_time_ms=") != std::string::npos);
}
