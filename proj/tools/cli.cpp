#include "cli.hpp"

#include "rankprover/certificate_checker.hpp"
#include "rankprover/config_parser.hpp"
#include "rankprover/goal_parser.hpp"
#include "rankprover/model_oracle.hpp"
#include "rankprover/proof_emitter.hpp"
#include "rankprover/random_config.hpp"
#include "rankprover/saturation.hpp"
#include "rankprover/trace_format.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace rankprover::cli {

namespace {

namespace fs = std::filesystem;

// Thrown by helpers to leave a subcommand with a given status.
struct Exit {
    int status;
};

struct InputOptions {
    std::string path;
    std::string syntax = "auto";
    unsigned dimension = 3;
};

std::string read_file(const std::string& path, std::ostream& err)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err << "error: cannot read " << path << "\n";
        throw Exit{kExitUsage};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& text, std::ostream& err)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        err << "error: cannot write " << path.string() << "\n";
        throw Exit{kExitUsage};
    }
}

bool coq_syntax(const InputOptions& in)
{
    if (in.syntax == "auto") {
        return fs::path(in.path).extension() == ".v";
    }
    return in.syntax == "coq";
}

// Parses the input in either syntax and validates it; parse and structural
// errors exit with kExitParse.
Configuration load_configuration(const InputOptions& in, std::ostream& err)
{
    const auto text = read_file(in.path, err);
    std::vector<Warning> warnings;
    Configuration cfg;
    try {
        cfg = coq_syntax(in) ? parse_goal(text, in.dimension, &warnings) : parse_config(text, &warnings);
        cfg.validate();
    } catch (const ParseError& e) {
        err << in.path << ":" << e.what() << "\n";
        throw Exit{kExitParse};
    } catch (const StructuralError& e) {
        err << in.path << ": " << e.what() << "\n";
        throw Exit{kExitParse};
    }
    for (const auto& w : warnings) {
        err << in.path << ":" << w.span.line << ":" << w.span.column << ": warning: " << w.message << "\n";
    }
    return cfg;
}

void add_input_flags(CLI::App& cmd, InputOptions& in, const std::string& flag)
{
    cmd.add_option(flag, in.path, "Input file (.g configuration, or a Coq lemma with --goal-syntax coq)")->required();
    cmd.add_option("--goal-syntax", in.syntax, "Input syntax; auto picks coq for .v files")
        ->check(CLI::IsMember({"auto", "config", "coq"}));
    cmd.add_option("--dimension", in.dimension, "Dimension for Coq goals, which do not state it")
        ->check(CLI::IsMember({2U, 3U}));
}

std::string fact_text(const RankFact& fact, const Configuration& cfg)
{
    return "rk(" + canonical_render(fact.set, cfg) + ") = " + std::to_string(fact.rank);
}

// ---------------------------------------------------------------- prove

struct ProveOptions {
    InputOptions input;
    std::string strategy;
    std::string out_dir;
    bool print_trace = false;
    bool print_stats = false;
    std::optional<std::uint64_t> seed;
    std::optional<double> time_limit;
    std::optional<std::uint64_t> step_limit;
};

SaturationOptions saturation_options(const ProveOptions& o, const Configuration& cfg, std::ostream& err)
{
    SaturationOptions opts;
    opts.strategy = o.strategy.empty() ? default_strategy(cfg.point_count()) : *parse_strategy(o.strategy);
    opts.shuffle_seed = o.seed;
    if (const char* env = std::getenv("RANKPROVER_STEP_LIMIT"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const auto value = std::strtoull(env, &end, 10);
        if (*end != '\0' || value == 0) {
            err << "error: RANKPROVER_STEP_LIMIT must be a positive integer\n";
            throw Exit{kExitUsage};
        }
        opts.step_limit = value;
    }
    if (o.step_limit) {
        opts.step_limit = *o.step_limit;
    }
    if (o.time_limit) {
        opts.time_limit = std::chrono::milliseconds(static_cast<std::int64_t>(*o.time_limit * 1000.0));
    }
    return opts;
}

int cmd_prove(const ProveOptions& o, std::ostream& out, std::ostream& err)
{
    const auto cfg = load_configuration(o.input, err);
    const auto opts = saturation_options(o, cfg, err);

    std::optional<SaturationState> state;
    try {
        state.emplace(saturate(cfg, opts));
    } catch (const InconsistencyError& e) {
        out << "INCONSISTENT: " << e.what() << "\n";
        return kExitInconsistent;
    } catch (const SaturationAborted& e) {
        out << "ABORTED: " << e.what() << "\n";
        return kExitAborted;
    }

    const fs::path dir = o.out_dir.empty() ? fs::path(o.input.path).parent_path() : fs::path(o.out_dir);
    if (!dir.empty()) {
        std::error_code ec;
        fs::create_directories(dir, ec);
    }

    bool not_derivable = false;
    bool check_failed = false;
    for (const auto& goal : cfg.conclusions) {
        ProofTrace trace;
        try {
            trace = extract_trace(*state, goal, cfg);
        } catch (const NotDerivable& e) {
            out << "NOT-DERIVABLE " << fact_text(goal, cfg) << " residual " << to_string(e.residual()) << "\n";
            not_derivable = true;
            continue;
        }
        const auto script_name = script_file_name(cfg, goal);
        const auto script = render_script(cfg, emit_script(cfg, trace));
        const auto trace_text = write_trace(trace);
        const auto script_path = dir / script_name;
        const auto trace_path = dir / fs::path(script_name).replace_extension(".trace");
        write_file(script_path, script, err);
        write_file(trace_path, trace_text, err);

        const auto verdict = check_trace(cfg, trace);
        if (!verdict.accepted()) {
            out << "CHECK-FAILED " << fact_text(goal, cfg) << ": " << to_string(verdict) << "\n";
            check_failed = true;
            continue;
        }
        const auto lemma = lemma_name(goal.set, cfg);
        out << "PROVED " << fact_text(goal, cfg) << " as " << lemma << " (" << trace.steps.size() << " steps)\n";
        out << "  wrote " << script_path.string() << " and " << trace_path.string() << "\n";
        out << "  Require Import pprove_" << lemma << ".\n";
        out << "  solve_using " << lemma << ".\n";
        if (o.print_trace) {
            out << trace_text;
        }
    }
    if (o.print_stats) {
        out << format_stats(state->stats());
    }
    if (check_failed) {
        return kExitCheckFailed;
    }
    return not_derivable ? kExitNotDerivable : kExitOk;
}

// ---------------------------------------------------------------- check

struct CheckOptions {
    InputOptions input;
    std::string trace_path;
};

int cmd_check(const CheckOptions& o, std::ostream& out, std::ostream& err)
{
    const auto cfg = load_configuration(o.input, err);
    const auto text = read_file(o.trace_path, err);
    ProofTrace trace;
    try {
        trace = parse_trace(text);
    } catch (const ParseError& e) {
        err << o.trace_path << ":" << e.what() << "\n";
        return kExitParse;
    }
    Verdict verdict = check_trace(cfg, trace);
    if (verdict.accepted() &&
        std::find(cfg.conclusions.begin(), cfg.conclusions.end(), trace.goal) == cfg.conclusions.end()) {
        verdict = {Verdict::Status::GoalMismatch, 0, "the trace goal is not a conclusion of the configuration"};
    }
    out << to_string(verdict) << "\n";
    return verdict.accepted() ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- oracle-compare

struct CompareOptions {
    InputOptions input;
    unsigned random_count = 0;
    unsigned points = 4;
    unsigned max_hypotheses = 4;
    std::uint64_t seed = 1;
};

struct Tally {
    unsigned conclusions = 0;
    unsigned agreements = 0;
    unsigned violations = 0;
};

// Runs engine and oracle on one configuration and reports per conclusion.
Tally compare(const Configuration& cfg, std::ostream& out)
{
    Tally tally;
    std::optional<SaturationState> state;
    std::string engine_failure;
    try {
        SaturationOptions full;
        full.strategy = PairStrategy::Full;
        state.emplace(saturate(cfg, full));
    } catch (const InconsistencyError&) {
        engine_failure = "INCONSISTENT";
    } catch (const SaturationAborted&) {
        engine_failure = "ABORTED";
    }
    const auto intervals = state ? state->intervals() : std::vector<RankInterval>{};

    unsigned models = 0;
    unsigned bad_bounds = 0;
    unsigned non_matroids = 0;
    std::vector<bool> refuted(cfg.conclusions.size(), false);
    enumerate_models(cfg, [&](const RankModel& m) {
        ++models;
        if (!is_matroid(m, cfg)) {
            ++non_matroids;
        }
        for (std::size_t mask = 1; mask < intervals.size(); ++mask) {
            if (m.rank[mask] < intervals[mask].lo || m.rank[mask] > intervals[mask].hi) {
                ++bad_bounds;
            }
        }
        for (std::size_t i = 0; i < cfg.conclusions.size(); ++i) {
            if (m[cfg.conclusions[i].set] != cfg.conclusions[i].rank) {
                refuted[i] = true;
            }
        }
        return true;
    });

    if (non_matroids > 0) {
        out << "  ORACLE-ERROR " << non_matroids << " enumerated model(s) fail the axiom check\n";
        tally.violations += non_matroids;
    }
    if (bad_bounds > 0) {
        out << "  UNSOUND " << bad_bounds << " engine bound(s) violated by oracle models\n";
        tally.violations += bad_bounds;
    }
    if (engine_failure == "INCONSISTENT" && models > 0) {
        out << "  UNSOUND engine reports inconsistency but " << models << " model(s) exist\n";
        ++tally.violations;
    }

    for (std::size_t i = 0; i < cfg.conclusions.size(); ++i) {
        const auto& goal = cfg.conclusions[i];
        const std::string engine = !engine_failure.empty() ? engine_failure
                                   : entails(*state, goal)  ? "PROVED"
                                                            : "NOT-DERIVABLE";
        const auto oracle = models == 0 ? SemanticVerdict::Kind::NoModels
                            : refuted[i] ? SemanticVerdict::Kind::No
                                         : SemanticVerdict::Kind::Yes;
        std::string agreement;
        if (engine == "PROVED") {
            agreement = oracle == SemanticVerdict::Kind::No ? "UNSOUND" : "agree";
        } else if (engine == "INCONSISTENT") {
            agreement = oracle == SemanticVerdict::Kind::NoModels ? "agree" : "UNSOUND";
        } else if (engine == "ABORTED") {
            agreement = "undecided";
        } else {
            agreement = oracle == SemanticVerdict::Kind::No ? "agree" : "incomplete";
        }
        if (agreement == "UNSOUND" && engine == "PROVED") {
            ++tally.violations;
        }
        ++tally.conclusions;
        tally.agreements += agreement == "agree" ? 1U : 0U;
        out << "  " << fact_text(goal, cfg) << ": engine " << engine << ", oracle " << to_string(oracle) << ", "
            << agreement << "\n";
    }
    return tally;
}

int cmd_oracle_compare(const CompareOptions& o, std::ostream& out, std::ostream& err)
{
    std::vector<std::pair<std::string, Configuration>> inputs;
    if (o.random_count > 0) {
        if (o.points == 0 || o.points > kOracleMaxPoints) {
            err << "refused: model enumeration is limited to " << kOracleMaxPoints << " points\n";
            return kExitScaleGuard;
        }
        std::mt19937_64 rng(o.seed);
        RandomConfigSpec spec{.points = o.points, .dimension = o.input.dimension, .max_hypotheses = o.max_hypotheses};
        for (unsigned i = 0; i < o.random_count; ++i) {
            inputs.emplace_back("random #" + std::to_string(i), random_configuration(rng, spec));
        }
    } else {
        if (o.input.path.empty()) {
            err << "error: oracle-compare needs --input or --random\n";
            return kExitUsage;
        }
        inputs.emplace_back(o.input.path, load_configuration(o.input, err));
    }

    Tally total;
    for (const auto& [label, cfg] : inputs) {
        if (cfg.point_count() > kOracleMaxPoints) {
            err << "refused: " << label << " has " << cfg.point_count() << " points; model enumeration is limited to "
                << kOracleMaxPoints << "\n";
            return kExitScaleGuard;
        }
        out << label << "\n";
        const auto t = compare(cfg, out);
        total.conclusions += t.conclusions;
        total.agreements += t.agreements;
        total.violations += t.violations;
    }
    out << "configurations=" << inputs.size() << " conclusions=" << total.conclusions
        << " agreements=" << total.agreements << " violations=" << total.violations << "\n";
    return total.violations > 0 ? kExitUnsound : kExitOk;
}

// ---------------------------------------------------------------- translate

int cmd_translate(const InputOptions& in, std::ostream& out, std::ostream& err)
{
    out << print_config(load_configuration(in, err));
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Rank-interval prover for projective incidence geometry", "rankprover"};
    app.require_subcommand(1);

    ProveOptions prove;
    auto* prove_cmd = app.add_subcommand("prove", "Saturate, extract, emit and check a proof for every conclusion");
    add_input_flags(*prove_cmd, prove.input, "--input");
    prove_cmd->add_option("--strategy", prove.strategy, "Submodularity pairs: full or adjacent")
        ->check(CLI::IsMember({"full", "adjacent"}));
    prove_cmd->add_option("--out", prove.out_dir, "Output directory (default: the input's directory)");
    prove_cmd->add_flag("--trace", prove.print_trace, "Also print each trace to stdout");
    prove_cmd->add_flag("--stats", prove.print_stats, "Print saturation statistics as key=value lines");
    prove_cmd->add_option("--seed", prove.seed, "Randomize the worklist order with this seed");
    prove_cmd->add_option("--time-limit", prove.time_limit, "Abort saturation after this many seconds");
    prove_cmd->add_option("--step-limit", prove.step_limit, "Abort saturation after this many steps");

    CheckOptions check;
    auto* check_cmd = app.add_subcommand("check", "Re-verify a .trace file against a configuration");
    add_input_flags(*check_cmd, check.input, "--config");
    check_cmd->add_option("--trace", check.trace_path, "Trace file written by prove")->required();

    CompareOptions compare_opts;
    auto* compare_cmd =
        app.add_subcommand("oracle-compare", "Compare engine verdicts with brute-force model enumeration");
    compare_cmd->add_option("--input", compare_opts.input.path, "Input file (at most 5 points)");
    compare_cmd->add_option("--goal-syntax", compare_opts.input.syntax)->check(CLI::IsMember({"auto", "config", "coq"}));
    compare_cmd->add_option("--dimension", compare_opts.input.dimension)->check(CLI::IsMember({2U, 3U}));
    compare_cmd->add_option("--random", compare_opts.random_count, "Generate this many random configurations instead");
    compare_cmd->add_option("--points", compare_opts.points, "Points per random configuration");
    compare_cmd->add_option("--hypotheses", compare_opts.max_hypotheses, "Maximum hypotheses per random configuration");
    compare_cmd->add_option("--seed", compare_opts.seed, "Seed for random configurations");

    InputOptions translate;
    auto* translate_cmd = app.add_subcommand("translate", "Print an input (e.g. a Coq lemma) as a .g configuration");
    add_input_flags(*translate_cmd, translate, "--input");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int status = app.exit(e, out, err);
        return status == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (prove_cmd->parsed()) {
            return cmd_prove(prove, out, err);
        }
        if (check_cmd->parsed()) {
            return cmd_check(check, out, err);
        }
        if (compare_cmd->parsed()) {
            return cmd_oracle_compare(compare_opts, out, err);
        }
        return cmd_translate(translate, out, err);
    } catch (const Exit& e) {
        return e.status;
    } catch (const OracleScaleError& e) {
        err << "refused: " << e.what() << "\n";
        return kExitScaleGuard;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace rankprover::cli
