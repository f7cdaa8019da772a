#include "rankprover/certificate_checker.hpp"
#include "rankprover/config_parser.hpp"
#include "rankprover/goal_parser.hpp"
#include "rankprover/proof_emitter.hpp"
#include "rankprover/saturation.hpp"
#include "rankprover/trace_format.hpp"
#include "test_support.hpp"

#include <catch_amalgamated.hpp>

using namespace rankprover;
using rankprover::testing::data_path;
using rankprover::testing::load_config;
using rankprover::testing::read_file;

namespace {

constexpr PointSet kAB{0b0011};
constexpr PointSet kAC{0b0101};
constexpr PointSet kABC{0b0111};

std::string hypothesis_block(const std::string& lemma_text)
{
    const auto start = lemma_text.find('\n');
    return lemma_text.substr(start, lemma_text.rfind("-> ") - start);
}

} // namespace

TEST_CASE("lemma names")
{
    const auto ex2 = load_config("ex2.g");
    CHECK(lemma_name(kABC, ex2) == "LABC");
    CHECK(lemma_name(PointSet{0b0010}, ex2) == "LB");
    CHECK(lemma_name(PointSet{0b1001}, ex2) == "LAD");
    CHECK(script_file_name(ex2, {kABC, 3}) == "pprove_LABC.v");
}

TEST_CASE("ex2 trace")
{
    const auto ex2 = load_config("ex2.g");
    const auto state = saturate(ex2);
    const auto trace = extract_trace(state, {kABC, 3}, ex2);
    CHECK(trace.goal == RankFact{kABC, 3});
    CHECK(std::is_sorted(trace.steps.begin(), trace.steps.end(),
                         [](const auto& a, const auto& b) { return a.id < b.id; }));

    const auto mono = std::find_if(trace.steps.begin(), trace.steps.end(), [](const DeductionStep& s) {
        return s.rule == RuleId::MonoLo && s.target == kABC && s.bound == Bound::Lo && s.value == 2 &&
               s.premises.size() == 1 && s.premises[0].set == kAC && s.premises[0].bound == Bound::Lo;
    });
    CHECK(mono != trace.steps.end());
    CHECK(check_trace(ex2, trace).accepted());

    // Every cited step is in the trace.
    for (const auto& s : trace.steps) {
        for (const auto& p : s.premises) {
            if (p.origin == Origin::Step) {
                CHECK(std::any_of(trace.steps.begin(), trace.steps.end(),
                                  [&](const auto& t) { return t.id == p.step; }));
            }
        }
    }
}

TEST_CASE("goal equal to a hypothesis")
{
    auto cfg = load_config("ex2.g");
    cfg.conclusions = {{kAC, 2}};
    const auto trace = extract_trace(saturate(cfg), {kAC, 2}, cfg);
    REQUIRE_FALSE(trace.steps.empty());
    for (const auto& s : trace.steps) {
        CHECK(s.rule == RuleId::Hyp);
    }
    const auto doc = emit_script(cfg, trace);
    REQUIRE(doc.lemmas.size() == 1);
    CHECK(doc.lemmas[0].name == "LAC");
    CHECK(doc.lemmas[0].body.find("solve_hyps_min HACeq HACm2") != std::string::npos);
}

TEST_CASE("not derivable")
{
    const auto ex2 = load_config("ex2.g");
    const auto state = saturate(ex2);
    try {
        extract_trace(state, {kAB, 1}, ex2);
        FAIL("expected NotDerivable");
    } catch (const NotDerivable& e) {
        CHECK(e.residual() == RankInterval{2, 2});
    }
    CHECK_THROWS_AS(extract_trace(state, {PointSet{0b1111}, 4}, ex2), NotDerivable);
}

TEST_CASE("ex2 script")
{
    const auto ex2 = load_config("ex2.g");
    const auto trace = extract_trace(saturate(ex2), {kABC, 3}, ex2);
    const auto doc = emit_script(ex2, trace);
    CHECK(doc.prelude == "Require Import lemmas_automation_g.");
    REQUIRE_FALSE(doc.lemmas.empty());

    const auto& last = doc.lemmas.back();
    CHECK(last.name == "LABC");
    CHECK(last.statement == "rk(A :: C :: nil) = 2 -> rk(A :: B :: D :: nil) = 3 -> rk(C :: D :: nil) = 2 -> "
                            "rk(A :: C :: D :: nil) = 2 -> rk(A :: B :: C :: nil) = 3");
    CHECK(lemma_header(ex2, last) == "Lemma LABC : forall A B C D ,\n" + last.statement + ".");
    CHECK(statement_text(ex2, {kABC, 3}) == last.statement);
    CHECK(last.body.find("rule_5 (A :: C :: nil) (A :: B :: C :: nil) 2 2") != std::string::npos);
    CHECK(last.body.find("HABCm3") != std::string::npos);
    CHECK(std::any_of(doc.lemmas.begin(), doc.lemmas.end(), [](const auto& l) { return l.name == "LAC"; }));

    const auto text = render_script(ex2, doc);
    CHECK(text.rfind("Require Import lemmas_automation_g.\n", 0) == 0);
    CHECK(text == render_script(ex2, emit_script(ex2, extract_trace(saturate(ex2), {kABC, 3}, ex2))));

    // Same hypothesis list in every lemma.
    const auto reference = hypothesis_block(lemma_header(ex2, doc.lemmas.front()));
    for (const auto& lemma : doc.lemmas) {
        CHECK(hypothesis_block(lemma_header(ex2, lemma)) == reference);
        CHECK(lemma.body.find("lia.") != std::string::npos);
    }

    // The final lemma reads back as the original statement.
    const auto final_lemma = text.substr(text.rfind("Lemma "));
    CHECK(match_statement(parse_goal(final_lemma), ex2));
    CHECK(match_statement(parse_goal(final_lemma), parse_goal(read_file(data_path("ex2_goal.v")))));
}

TEST_CASE("statements read back through the goal parser")
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 30; ++i) {
        const auto cfg = rankprover::testing::random_syntactic_configuration(rng, 6);
        const auto& goal = cfg.conclusions.front();
        ScriptLemma lemma{lemma_name(goal.set, cfg), statement_text(cfg, goal), {}};
        auto back = parse_goal(lemma_header(cfg, lemma), cfg.dimension);
        auto expected = cfg;
        expected.conclusions = {goal};
        INFO(lemma_header(cfg, lemma));
        CHECK(match_statement(back, expected));
    }
}

TEST_CASE("trace files round-trip")
{
    const auto ex2 = load_config("ex2.g");
    const auto trace = extract_trace(saturate(ex2), {kABC, 3}, ex2);
    const auto text = write_trace(trace);
    const auto back = parse_trace(text);
    CHECK(back.goal == trace.goal);
    CHECK(back.steps == trace.steps);
    CHECK(write_trace(back) == text);

    CHECK_THROWS_AS(parse_trace("rankprover-trace 2\ngoal 7 3\nend\n"), ParseError);
    CHECK_THROWS_AS(parse_trace("rankprover-trace 1\ngoal 7 3\nstep 1 BOGUS 7 LO 3\nend\n"), ParseError);
    CHECK_THROWS_AS(parse_trace("rankprover-trace 1\ngoal 7 3\n"), ParseError);
    CHECK_THROWS_AS(parse_trace(text + "x"), ParseError);
    CHECK_THROWS_AS(
        parse_trace("rankprover-trace 1\ngoal 7 3\nstep 1 HYP 7 LO 3 prev init premises 99999999 end\n"),
        ParseError);
}

TEST_CASE("ex2 output matches the frozen files")
{
    const auto ex2 = load_config("ex2.g");
    const auto trace = extract_trace(saturate(ex2), {kABC, 3}, ex2);
    CHECK(render_script(ex2, emit_script(ex2, trace)) == read_file(data_path("golden/pprove_LABC.v")));
    CHECK(write_trace(trace) == read_file(data_path("golden/pprove_LABC.trace")));
}
