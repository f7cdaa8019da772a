#include "rankprover/model_oracle.hpp"

#include <algorithm>

namespace rankprover {

bool is_matroid(const RankModel& model, const Configuration& cfg)
{
    const unsigned n = cfg.point_count();
    const std::size_t size = std::size_t{1} << n;
    if (model.point_count != n || model.rank.size() != size || model.rank[0] != 0) {
        return false;
    }
    const auto rk = [&](std::size_t mask) { return static_cast<int>(model.rank[mask]); };
    for (std::size_t x = 1; x < size; ++x) {
        const auto card = static_cast<int>(PointSet{static_cast<PointSet::Mask>(x)}.size());
        if (rk(x) < 0 || rk(x) > card || rk(x) > static_cast<int>(cfg.dimension) + 1) {
            return false;
        }
        if (card == 1 && rk(x) < 1) {
            return false;
        }
    }
    for (std::size_t x = 0; x < size; ++x) {
        for (std::size_t y = 0; y < size; ++y) {
            if ((x & ~y) == 0 && rk(x) > rk(y)) {
                return false;
            }
            if (rk(x | y) + rk(x & y) > rk(x) + rk(y)) {
                return false;
            }
        }
    }
    return std::all_of(cfg.hypotheses.begin(), cfg.hypotheses.end(),
                       [&](const RankFact& h) { return rk(h.set.bits()) == static_cast<int>(h.rank); });
}

namespace {

// Assigns subsets by increasing cardinality, so all proper subsets of the
// current node are fixed when it is reached.
class Enumerator {
public:
    Enumerator(const Configuration& cfg, const std::function<bool(const RankModel&)>& visit)
        : cfg_{cfg}, visit_{visit}
    {
        const unsigned n = cfg.point_count();
        model_.point_count = n;
        model_.rank.assign(std::size_t{1} << n, 0);
        hyp_.assign(std::size_t{1} << n, 0);
        for (const auto& h : cfg.hypotheses) {
            hyp_[h.set.bits()] = static_cast<std::uint8_t>(h.rank);
        }
        for (auto s : subset_iter(n)) {
            order_.push_back(s.bits());
        }
        std::stable_sort(order_.begin(), order_.end(),
                         [](auto a, auto b) { return std::popcount(a) < std::popcount(b); });
    }

    void run() { descend(0); }

private:
    // Returns false once the visitor asked to stop.
    bool descend(std::size_t depth)
    {
        if (depth == order_.size()) {
            return visit_(model_);
        }
        const auto s = order_[depth];
        int lo = 1;
        int hi = std::min(std::popcount(s), static_cast<int>(cfg_.dimension) + 1);
        for (auto rest = s; rest != 0; rest &= rest - 1) {
            const auto below = s & ~(rest & (~rest + 1));
            if (below != 0) {
                lo = std::max(lo, static_cast<int>(model_.rank[below]));
                hi = std::min(hi, static_cast<int>(model_.rank[below]) + 1);
            }
        }
        if (hyp_[s] != 0) {
            lo = std::max(lo, static_cast<int>(hyp_[s]));
            hi = std::min(hi, static_cast<int>(hyp_[s]));
        }
        for (int v = lo; v <= hi; ++v) {
            model_.rank[s] = static_cast<std::uint8_t>(v);
            if (submodular_at(s) && !descend(depth + 1)) {
                return false;
            }
        }
        model_.rank[s] = 0;
        return true;
    }

    // rk(X u Y) + rk(X n Y) <= rk X + rk Y for every pair with X u Y = s.
    bool submodular_at(PointSet::Mask s) const
    {
        const int rs = model_.rank[s];
        for (auto x = (s - 1) & s; x != 0; x = (x - 1) & s) {
            const auto missing = s & ~x;
            // y = missing | z, z c x, y != s
            for (auto z = (x - 1) & x;; z = (z - 1) & x) {
                const auto y = missing | z;
                if (rs + model_.rank[x & y] > model_.rank[x] + model_.rank[y]) {
                    return false;
                }
                if (z == 0) {
                    break;
                }
            }
        }
        return true;
    }

    const Configuration& cfg_;
    const std::function<bool(const RankModel&)>& visit_;
    RankModel model_;
    std::vector<std::uint8_t> hyp_;
    std::vector<PointSet::Mask> order_;
};

} // namespace

void enumerate_models(const Configuration& cfg, const std::function<bool(const RankModel&)>& visit)
{
    if (cfg.point_count() > kOracleMaxPoints) {
        throw OracleScaleError("model enumeration is limited to " + std::to_string(kOracleMaxPoints) +
                               " points; configuration has " + std::to_string(cfg.point_count()));
    }
    cfg.validate();
    Enumerator{cfg, visit}.run();
}

std::vector<RankModel> all_models(const Configuration& cfg)
{
    std::vector<RankModel> out;
    enumerate_models(cfg, [&](const RankModel& m) {
        out.push_back(m);
        return true;
    });
    return out;
}

std::string_view to_string(SemanticVerdict::Kind kind)
{
    switch (kind) {
    case SemanticVerdict::Kind::Yes:
        return "Yes";
    case SemanticVerdict::Kind::No:
        return "No";
    case SemanticVerdict::Kind::NoModels:
        return "NoModels";
    }
    return "?";
}

SemanticVerdict semantic_entails(const Configuration& cfg, const RankFact& goal)
{
    SemanticVerdict verdict;
    bool any = false;
    enumerate_models(cfg, [&](const RankModel& m) {
        any = true;
        if (m[goal.set] != goal.rank) {
            verdict.kind = SemanticVerdict::Kind::No;
            verdict.counter_model = m;
            return false;
        }
        return true;
    });
    if (verdict.kind != SemanticVerdict::Kind::No) {
        verdict.kind = any ? SemanticVerdict::Kind::Yes : SemanticVerdict::Kind::NoModels;
    }
    return verdict;
}

} // namespace rankprover
