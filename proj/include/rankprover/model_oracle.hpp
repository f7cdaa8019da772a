// Brute-force ground truth for small configurations: every rank function on
// the powerset that satisfies the matroid axioms, the dimension bound and the
// hypotheses.

#pragma once

#include "rankprover/core.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace rankprover {

inline constexpr unsigned kOracleMaxPoints = 5;

class OracleScaleError : public Error {
public:
    using Error::Error;
};

struct RankModel {
    unsigned point_count = 0;
    // Indexed by mask; rank[0] = 0 for the empty set.
    std::vector<std::uint8_t> rank;

    [[nodiscard]] unsigned operator[](PointSet set) const { return rank.at(set.bits()); }
    friend bool operator==(const RankModel&, const RankModel&) = default;
};

// Direct transcription of the axioms, checked on every pair of subsets:
// 0 <= rk X <= |X|, rk X <= dim + 1, rk {P} >= 1, X c Y => rk X <= rk Y,
// rk(X u Y) + rk(X n Y) <= rk X + rk Y, and every hypothesis of cfg.
bool is_matroid(const RankModel& model, const Configuration& cfg);

// Calls `visit` once per model; enumeration stops early when it returns false.
// Throws OracleScaleError above kOracleMaxPoints points.
void enumerate_models(const Configuration& cfg, const std::function<bool(const RankModel&)>& visit);

std::vector<RankModel> all_models(const Configuration& cfg);

struct SemanticVerdict {
    enum class Kind : std::uint8_t { Yes, No, NoModels };

    Kind kind = Kind::NoModels;
    std::optional<RankModel> counter_model;
};

std::string_view to_string(SemanticVerdict::Kind kind);

SemanticVerdict semantic_entails(const Configuration& cfg, const RankFact& goal);

} // namespace rankprover
