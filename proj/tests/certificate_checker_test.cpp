#include "rankprover/certificate_checker.hpp"
#include "rankprover/config_parser.hpp"
#include "rankprover/model_oracle.hpp"
#include "rankprover/proof_emitter.hpp"
#include "rankprover/saturation.hpp"
#include "rankprover/trace_format.hpp"
#include "test_support.hpp"

#include <catch_amalgamated.hpp>

using namespace rankprover;
using rankprover::testing::load_config;

namespace {

constexpr PointSet kAC{0b0101};
constexpr PointSet kABC{0b0111};

ProofTrace ex2_trace(const Configuration& cfg)
{
    return extract_trace(saturate(cfg), {kABC, 3}, cfg);
}

} // namespace

TEST_CASE("accepts the engine's ex2 trace")
{
    const auto ex2 = load_config("ex2.g");
    const auto trace = ex2_trace(ex2);
    CHECK(check_trace(ex2, trace).accepted());
    CHECK(check_trace(ex2, parse_trace(write_trace(trace))).accepted());
}

TEST_CASE("empty trace for a hypothesis goal")
{
    const auto ex2 = load_config("ex2.g");
    CHECK(check_trace(ex2, ProofTrace{{kAC, 2}, {}}).accepted());
    CHECK(check_trace(ex2, ProofTrace{{kABC, 3}, {}}).status == Verdict::Status::GoalMismatch);
    CHECK(check_trace(ex2, ProofTrace{{PointSet{0b10}, 1}, {}}).accepted());
}

TEST_CASE("raising a value is rejected on that step")
{
    const auto ex2 = load_config("ex2.g");
    const auto trace = ex2_trace(ex2);
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        auto bad = trace;
        auto& s = bad.steps[i];
        s.value = s.bound == Bound::Lo ? s.value + 1 : s.value - 1;
        const auto verdict = check_trace(ex2, bad);
        CHECK(verdict.status == Verdict::Status::RejectedStep);
        CHECK(verdict.step == s.id);
    }
}

TEST_CASE("every generated mutation is rejected")
{
    std::vector<std::pair<Configuration, ProofTrace>> accepted;
    const auto ex2 = load_config("ex2.g");
    accepted.emplace_back(ex2, ex2_trace(ex2));
    for (const char* name : {"coplanar.g", "collinear_transitivity.g"}) {
        const auto cfg = load_config(name);
        const auto state = saturate(cfg);
        for (const auto& goal : cfg.conclusions) {
            accepted.emplace_back(cfg, extract_trace(state, goal, cfg));
        }
    }
    std::size_t total = 0;
    for (const auto& [cfg, trace] : accepted) {
        REQUIRE(check_trace(cfg, trace).accepted());
        for (const auto& m : rankprover::testing::mutations(trace)) {
            INFO(m.kind << "\n" << write_trace(m.trace));
            CHECK_FALSE(check_trace(cfg, m.trace).accepted());
            ++total;
        }
    }
    CHECK(total >= 50);
}

TEST_CASE("wrong configuration")
{
    const auto ex2 = load_config("ex2.g");
    const auto trace = ex2_trace(ex2);
    auto other = ex2;
    other.hypotheses.pop_back();
    CHECK_FALSE(check_trace(other, trace).accepted());

    auto fewer_points = ex2;
    fewer_points.points.pop_back();
    fewer_points.hypotheses = {{kAC, 2}};
    fewer_points.conclusions = {{kABC, 3}};
    CHECK_FALSE(check_trace(fewer_points, trace).accepted());
}

TEST_CASE("hand-written steps")
{
    const auto ex2 = load_config("ex2.g");

    SECTION("a MONO_LO step citing the hypothesis directly")
    {
        DeductionStep step;
        step.id = 1;
        step.rule = RuleId::MonoLo;
        step.target = kABC;
        step.bound = Bound::Lo;
        step.value = 2;
        step.premises = {{kAC, Bound::Lo, Origin::Hypothesis, 0}};
        step.operands = {kAC, kABC};
        const ProofTrace trace{{kABC, 2}, {step}};
        const auto verdict = check_trace(ex2, trace);
        // Valid step, but [2, 3] does not pin the goal.
        CHECK(verdict.status == Verdict::Status::GoalMismatch);
    }
    SECTION("a rule concluding on the wrong set")
    {
        DeductionStep step;
        step.id = 1;
        step.rule = RuleId::MonoLo;
        step.target = PointSet{0b1111};
        step.bound = Bound::Lo;
        step.value = 2;
        step.premises = {{kAC, Bound::Lo, Origin::Hypothesis, 0}};
        step.operands = {kAC, kABC};
        CHECK(check_trace(ex2, ProofTrace{{kABC, 3}, {step}}).status == Verdict::Status::RejectedStep);
    }
    SECTION("a HYP step for a hypothesis the configuration lacks")
    {
        DeductionStep step;
        step.id = 0;
        step.rule = RuleId::Hyp;
        step.target = kABC;
        step.bound = Bound::Lo;
        step.value = 3;
        CHECK(check_trace(ex2, ProofTrace{{kABC, 3}, {step}}).status == Verdict::Status::RejectedStep);
    }
    SECTION("INIT_DEFAULT never appears as a step")
    {
        DeductionStep step;
        step.rule = RuleId::InitDefault;
        step.target = kAC;
        step.bound = Bound::Lo;
        step.value = 1;
        CHECK(check_trace(ex2, ProofTrace{{kAC, 2}, {step}}).status == Verdict::Status::RejectedStep);
    }
}

TEST_CASE("check_independence")
{
    const auto ex2 = load_config("ex2.g");
    const auto trace = ex2_trace(ex2);
    CHECK(check_independence(ex2, trace));

    auto duplicated = trace;
    auto copy = trace.steps.back();
    copy.id += 1000;
    duplicated.steps.push_back(copy);
    CHECK_FALSE(check_independence(ex2, duplicated));

    // Plane: A, B, C span the plane, so any fourth point lies in it.
    Configuration plane;
    plane.dimension = 2;
    for (const char* n : {"A", "B", "C", "D"}) {
        plane.points.push_back({static_cast<unsigned>(plane.points.size()), n});
    }
    plane.hypotheses = {{kABC, 3}};
    plane.conclusions = {{PointSet{0b1111}, 3}};
    DeductionStep step;
    step.id = 0;
    step.rule = RuleId::MonoLo;
    step.target = PointSet{0b1111};
    step.bound = Bound::Lo;
    step.value = 3;
    step.premises = {{kABC, Bound::Lo, Origin::Hypothesis, 0}};
    step.operands = {kABC, PointSet{0b1111}};
    const ProofTrace single{{PointSet{0b1111}, 3}, {step}};
    REQUIRE(check_trace(plane, single).accepted());
    CHECK(check_independence(plane, single));
}

TEST_CASE("damaged trace files never crash the reader or the checker")
{
    const auto ex2 = load_config("ex2.g");
    const auto text = write_trace(ex2_trace(ex2));
    std::mt19937_64 rng(13);
    static constexpr std::string_view kAlphabet = "0123456789 \nLOHIprevinithyp";
    std::size_t parsed = 0;
    for (int i = 0; i < 5000; ++i) {
        auto damaged = text;
        for (int k = std::uniform_int_distribution<int>(1, 3)(rng); k > 0; --k) {
            const auto at = std::uniform_int_distribution<std::size_t>(0, damaged.size() - 1)(rng);
            damaged[at] = kAlphabet[std::uniform_int_distribution<std::size_t>(0, kAlphabet.size() - 1)(rng)];
        }
        try {
            const auto trace = parse_trace(damaged);
            ++parsed;
            const auto verdict = check_trace(ex2, trace);
            // Whatever was changed, an accepted trace must prove a true fact.
            if (verdict.accepted()) {
                CHECK(semantic_entails(ex2, trace.goal).kind == SemanticVerdict::Kind::Yes);
            }
        } catch (const ParseError&) {
        }
    }
    CHECK(parsed > 0);
}
