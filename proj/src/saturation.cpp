#include "rankprover/saturation.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>

namespace rankprover {

std::string_view to_string(PairStrategy strategy)
{
    return strategy == PairStrategy::Full ? "full" : "adjacent";
}

std::optional<PairStrategy> parse_strategy(std::string_view text)
{
    if (text == "full") {
        return PairStrategy::Full;
    }
    if (text == "adjacent") {
        return PairStrategy::Adjacent;
    }
    return std::nullopt;
}

PairStrategy default_strategy(unsigned point_count)
{
    return point_count <= 10 ? PairStrategy::Full : PairStrategy::Adjacent;
}

std::string format_stats(const SaturationStats& stats)
{
    std::ostringstream out;
    out << "subsets=" << stats.subsets << '\n';
    out << "steps=" << stats.steps << '\n';
    out << "nodes_processed=" << stats.nodes_processed << '\n';
    out << "subsets_touched=" << stats.subsets_touched << '\n';
    for (std::size_t i = 0; i < kRuleCount; ++i) {
        const auto name = to_string(static_cast<RuleId>(i));
        out << "evaluated." << name << '=' << stats.evaluated[i] << '\n';
        out << "applied." << name << '=' << stats.applied[i] << '\n';
    }
    out << "wall_time_ms=" << std::chrono::duration<double, std::milli>(stats.wall_time).count() << '\n';
    return out.str();
}

SaturationState::SaturationState(unsigned dim, unsigned n)
    : dim_{dim}, n_{n}, lo_(std::size_t{1} << n, 0), hi_(std::size_t{1} << n, 0), lo_src_(std::size_t{1} << n, 0),
      hi_src_(std::size_t{1} << n, 0)
{
    for (auto s : subset_iter(n)) {
        lo_[s.bits()] = 1;
        hi_[s.bits()] = static_cast<std::uint8_t>(std::min(s.size(), dim + 1));
    }
    stats_.subsets = (std::uint64_t{1} << n) - 1;
}

SaturationState SaturationState::init(const Configuration& cfg)
{
    cfg.validate();
    SaturationState state{cfg.dimension, cfg.point_count()};
    for (const auto& h : cfg.hypotheses) {
        const auto current = state.interval(h.set);
        if (h.rank < current.lo || h.rank > current.hi) {
            throw InconsistencyError("hypothesis rk(" + canonical_render(h.set, cfg) + ") = " +
                                         std::to_string(h.rank) + " contradicts the known interval " +
                                         to_string(current),
                                     std::nullopt);
        }
        state.tighten(RuleId::Hyp, h.set, Bound::Lo, static_cast<int>(h.rank), {}, {});
        state.tighten(RuleId::Hyp, h.set, Bound::Hi, static_cast<int>(h.rank), {}, {});
    }
    return state;
}

std::size_t SaturationState::slot(PointSet set) const
{
    if (set.empty() || !set.fits(n_)) {
        throw StructuralError("point set 0x" + std::to_string(set.bits()) + " is not a non-empty subset of " +
                              std::to_string(n_) + " points");
    }
    return set.bits();
}

RankInterval SaturationState::interval(PointSet set) const
{
    const auto i = slot(set);
    return {lo_[i], hi_[i]};
}

std::optional<StepId> SaturationState::provenance(PointSet set, Bound bound) const
{
    const auto i = slot(set);
    const auto src = bound == Bound::Lo ? lo_src_[i] : hi_src_[i];
    if (src == 0) {
        return std::nullopt;
    }
    return src - 1;
}

std::vector<RankInterval> SaturationState::intervals() const
{
    std::vector<RankInterval> out(lo_.size());
    for (std::size_t i = 1; i < lo_.size(); ++i) {
        out[i] = {lo_[i], hi_[i]};
    }
    return out;
}

Premise SaturationState::premise(PointSet set, Bound bound) const
{
    const auto src = bound == Bound::Lo ? lo_src_[set.bits()] : hi_src_[set.bits()];
    if (src == 0) {
        return {set, bound, Origin::Default, 0};
    }
    return {set, bound, Origin::Step, src - 1};
}

std::optional<DeductionStep> SaturationState::tighten(RuleId rule, PointSet target, Bound bound, int value,
                                                      std::vector<Premise> premises, std::vector<PointSet> operands)
{
    const auto i = target.bits();
    const int lo = lo_[i];
    const int hi = hi_[i];
    if (bound == Bound::Lo ? value <= lo : value >= hi) {
        return std::nullopt;
    }
    auto& src = bound == Bound::Lo ? lo_src_[i] : hi_src_[i];
    DeductionStep step{
        .id = static_cast<StepId>(steps_.size()),
        .rule = rule,
        .target = target,
        .bound = bound,
        .value = static_cast<unsigned>(std::max(value, 0)),
        .premises = std::move(premises),
        .operands = std::move(operands),
        .supersedes = src == 0 ? std::nullopt : std::optional<StepId>{src - 1},
    };
    if (bound == Bound::Lo ? value > hi : value < lo) {
        throw InconsistencyError(std::string(to_string(rule)) + " derives " + (bound == Bound::Lo ? "lo" : "hi") +
                                     " = " + std::to_string(value) + " for mask " + std::to_string(i) +
                                     ", crossing the interval [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                     "]",
                                 std::move(step));
    }
    (bound == Bound::Lo ? lo_[i] : hi_[i]) = static_cast<std::uint8_t>(value);
    src = static_cast<std::uint32_t>(steps_.size()) + 1;
    ++stats_.applied[static_cast<std::size_t>(rule)];
    ++stats_.steps;
    steps_.push_back(std::move(step));
    return steps_.back();
}

std::optional<DeductionStep> SaturationState::evaluate(RuleId rule, PointSet x, PointSet y)
{
    ++stats_.evaluated[static_cast<std::size_t>(rule)];
    const auto inter = x & y;
    const auto uni = x | y;
    switch (rule) {
    case RuleId::MonoLo: {
        const auto value = static_cast<int>(lo_of(x));
        if (value <= static_cast<int>(lo_of(y))) {
            return std::nullopt;
        }
        return tighten(rule, y, Bound::Lo, value, {premise(x, Bound::Lo)}, {x, y});
    }
    case RuleId::MonoHi: {
        const auto value = static_cast<int>(hi_of(y));
        if (value >= static_cast<int>(hi_of(x))) {
            return std::nullopt;
        }
        return tighten(rule, x, Bound::Hi, value, {premise(y, Bound::Hi)}, {x, y});
    }
    case RuleId::SubmodHiUnion: {
        const int value = static_cast<int>(hi_of(x) + hi_of(y)) - static_cast<int>(lo_of(inter));
        if (value >= static_cast<int>(hi_of(uni))) {
            return std::nullopt;
        }
        std::vector<Premise> premises{premise(x, Bound::Hi), premise(y, Bound::Hi)};
        if (!inter.empty()) {
            premises.push_back(premise(inter, Bound::Lo));
        }
        return tighten(rule, uni, Bound::Hi, value, std::move(premises), {x, y});
    }
    case RuleId::SubmodHiInter: {
        const int value = static_cast<int>(hi_of(x) + hi_of(y)) - static_cast<int>(lo_of(uni));
        if (value >= static_cast<int>(hi_of(inter))) {
            return std::nullopt;
        }
        return tighten(rule, inter, Bound::Hi, value,
                       {premise(x, Bound::Hi), premise(y, Bound::Hi), premise(uni, Bound::Lo)}, {x, y});
    }
    case RuleId::SubmodLo: {
        const int value = static_cast<int>(lo_of(uni) + lo_of(inter)) - static_cast<int>(hi_of(y));
        if (value <= static_cast<int>(lo_of(x))) {
            return std::nullopt;
        }
        std::vector<Premise> premises{premise(uni, Bound::Lo)};
        if (!inter.empty()) {
            premises.push_back(premise(inter, Bound::Lo));
        }
        premises.push_back(premise(y, Bound::Hi));
        return tighten(rule, x, Bound::Lo, value, std::move(premises), {x, y});
    }
    case RuleId::InitDefault:
    case RuleId::Hyp:
        break;
    }
    throw StructuralError("rule " + std::string(to_string(rule)) + " is not a propagation rule");
}

std::optional<DeductionStep> SaturationState::apply_rule(RuleId rule, PointSet x, PointSet y)
{
    static_cast<void>(slot(x));
    static_cast<void>(slot(y));
    switch (rule) {
    case RuleId::MonoLo:
    case RuleId::MonoHi:
        if (!x.proper_subset_of(y)) {
            throw StructuralError(std::string(to_string(rule)) + " needs X strictly included in Y");
        }
        break;
    case RuleId::SubmodHiInter:
        if ((x & y).empty()) {
            throw StructuralError("SUBMOD_HI_INTER needs a non-empty intersection");
        }
        break;
    default:
        break;
    }
    return evaluate(rule, x, y);
}

// Worklist over lattice nodes. Popping a node re-evaluates every rule instance
// in which that node's interval is a premise.
class Saturator {
    using Mask = PointSet::Mask;

public:
    Saturator(SaturationState& state, const SaturationOptions& options)
        : state_{state}, options_{options}, n_{state.point_count()}, full_{PointSet::first(n_).bits()},
          queued_(std::size_t{1} << n_, 0)
    {
        if (options.shuffle_seed) {
            rng_.seed(*options.shuffle_seed);
        }
    }

    void run()
    {
        const auto start = std::chrono::steady_clock::now();
        // Hypothesis sets first, so propagation starts where the information is.
        std::vector<Mask> seeds;
        for (const auto& step : state_.steps_) {
            seeds.push_back(step.target.bits());
        }
        std::sort(seeds.begin(), seeds.end());
        for (auto m : seeds) {
            push(m);
        }
        for (auto s : subset_iter(n_)) {
            push(s.bits());
        }
        while (!queue_.empty()) {
            if (options_.time_limit && std::chrono::steady_clock::now() - start > *options_.time_limit) {
                throw SaturationAborted("saturation aborted: time limit of " +
                                        std::to_string(options_.time_limit->count()) + " ms exceeded");
            }
            const auto mask = pop();
            queued_[mask] = 0;
            ++state_.stats_.nodes_processed;
            process(PointSet{mask});
        }
    }

private:
    void push(Mask mask)
    {
        if (queued_[mask] == 0) {
            queued_[mask] = 1;
            queue_.push_back(mask);
        }
    }

    Mask pop()
    {
        if (!options_.shuffle_seed) {
            const auto mask = queue_.front();
            queue_.pop_front();
            return mask;
        }
        std::uniform_int_distribution<std::size_t> pick(0, queue_.size() - 1);
        const auto i = pick(rng_);
        std::swap(queue_[i], queue_.back());
        const auto mask = queue_.back();
        queue_.pop_back();
        return mask;
    }

    void eval(RuleId rule, PointSet x, PointSet y)
    {
        if (const auto step = state_.evaluate(rule, x, y)) {
            push(step->target.bits());
            if (state_.steps_.size() > options_.step_limit) {
                throw SaturationAborted("saturation aborted: step limit of " + std::to_string(options_.step_limit) +
                                        " exceeded");
            }
        }
    }

    void eval_pair(PointSet x, PointSet y)
    {
        eval(RuleId::SubmodHiUnion, x, y);
        if (!(x & y).empty()) {
            eval(RuleId::SubmodHiInter, x, y);
        }
        eval(RuleId::SubmodLo, x, y);
        eval(RuleId::SubmodLo, y, x);
    }

    void process(PointSet s)
    {
        const Mask bits = s.bits();
        const Mask comp = full_ & ~bits;
        for (Mask rest = comp; rest != 0; rest &= rest - 1) {
            const Mask p = rest & (~rest + 1);
            eval(RuleId::MonoLo, s, PointSet{bits | p});
        }
        if (s.size() > 1) {
            for (Mask rest = bits; rest != 0; rest &= rest - 1) {
                const Mask p = rest & (~rest + 1);
                eval(RuleId::MonoHi, PointSet{bits & ~p}, s);
            }
        }

        // Every incomparable pair is (X, Y) = (I u D, I u E) with D = X \ Y and
        // E = Y \ X both non-empty. The node plays the role of X, of X u Y, or
        // of X n Y.
        for_each_split(bits, comp, false, [&](Mask d, Mask e) { eval_pair(s, PointSet{(bits & ~d) | e}); });
        for_each_split(bits, bits, true, [&](Mask d, Mask e) {
            eval_pair(PointSet{bits & ~e}, PointSet{bits & ~d});
        });
        for_each_split(comp, comp, true, [&](Mask d, Mask e) { eval_pair(PointSet{bits | d}, PointSet{bits | e}); });
    }

    // Calls f(d, e) for non-empty d c du, e c eu. When `shared` the two come
    // from one universe: they must be disjoint and each unordered pair is
    // visited once (modulo Adjacent duplicates, which are harmless).
    template <class F>
    void for_each_split(Mask du, Mask eu, bool shared, F&& f)
    {
        if (options_.strategy == PairStrategy::Full) {
            for (Mask d = du; d != 0; d = (d - 1) & du) {
                const Mask ev = shared ? eu & ~d : eu;
                for (Mask e = ev; e != 0; e = (e - 1) & ev) {
                    if (!shared || d < e) {
                        f(d, e);
                    }
                }
            }
            return;
        }
        // Adjacent: the smaller private part has at most two points.
        for_small(du, [&](Mask d) {
            const Mask ev = shared ? eu & ~d : eu;
            for (Mask e = ev; e != 0; e = (e - 1) & ev) {
                f(d, e);
            }
        });
        if (!shared) {
            for_small(eu, [&](Mask e) {
                for (Mask d = du; d != 0; d = (d - 1) & du) {
                    if (std::popcount(d) > 2) {
                        f(d, e);
                    }
                }
            });
        }
    }

    template <class F>
    static void for_small(Mask universe, F&& f)
    {
        for (Mask a = universe; a != 0; a &= a - 1) {
            const Mask pa = a & (~a + 1);
            f(pa);
            for (Mask b = a & (a - 1); b != 0; b &= b - 1) {
                f(pa | (b & (~b + 1)));
            }
        }
    }

    SaturationState& state_;
    const SaturationOptions& options_;
    unsigned n_;
    Mask full_;
    std::vector<std::uint8_t> queued_;
    std::deque<Mask> queue_;
    std::mt19937_64 rng_;
};

SaturationState saturate(const Configuration& cfg, const SaturationOptions& options)
{
    const auto start = std::chrono::steady_clock::now();
    auto state = SaturationState::init(cfg);
    Saturator{state, options}.run();

    auto& stats = state.stats();
    stats.subsets_touched = 0;
    for (auto s : subset_iter(cfg.point_count())) {
        if (state.interval(s) != cfg.default_interval(s)) {
            ++stats.subsets_touched;
        }
    }
    stats.wall_time = std::chrono::steady_clock::now() - start;
    return state;
}

bool entails(const SaturationState& state, const RankFact& goal)
{
    const auto iv = state.interval(goal.set);
    return iv.lo == goal.rank && iv.hi == goal.rank;
}

SaturationState replay(const Configuration& cfg, std::span<const DeductionStep> steps)
{
    auto state = SaturationState::init(cfg);
    const auto initial = state.steps().size();
    if (steps.size() < initial) {
        throw Error("replay: recorded list is shorter than the hypothesis steps");
    }
    for (std::size_t i = 0; i < initial; ++i) {
        if (!(steps[i] == state.steps()[i])) {
            throw Error("replay: hypothesis step " + std::to_string(i) + " differs");
        }
    }
    for (std::size_t i = initial; i < steps.size(); ++i) {
        const auto& recorded = steps[i];
        if (recorded.operands.size() != 2) {
            throw Error("replay: step " + std::to_string(recorded.id) + " has no operand pair");
        }
        const auto produced = state.apply_rule(recorded.rule, recorded.operands[0], recorded.operands[1]);
        if (!produced || !(*produced == recorded)) {
            throw Error("replay: step " + std::to_string(recorded.id) + " is not reproduced");
        }
    }
    return state;
}

} // namespace rankprover
