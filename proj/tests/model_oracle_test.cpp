#include "rankprover/model_oracle.hpp"
#include "test_support.hpp"

#include <catch_amalgamated.hpp>

using namespace rankprover;
using rankprover::testing::load_config;

namespace {

Configuration points(unsigned n, unsigned dim = 3)
{
    Configuration cfg;
    cfg.dimension = dim;
    for (unsigned i = 0; i < n; ++i) {
        cfg.points.push_back({i, std::string(1, static_cast<char>('A' + i))});
    }
    cfg.conclusions.push_back({PointSet{1}, 1});
    return cfg;
}

// Counts rank functions by trying every assignment in [0, min(|X|, dim+1)]
// and keeping those that pass is_matroid; no pruning at all.
std::size_t naive_count(const Configuration& cfg)
{
    const unsigned n = cfg.point_count();
    const std::size_t size = std::size_t{1} << n;
    RankModel m{n, std::vector<std::uint8_t>(size, 0)};
    std::size_t count = 0;
    const auto bump = [&] {
        for (std::size_t x = 1; x < size; ++x) {
            const auto cap = std::min<unsigned>(PointSet{static_cast<PointSet::Mask>(x)}.size(), cfg.dimension + 1);
            if (m.rank[x] < cap) {
                ++m.rank[x];
                return true;
            }
            m.rank[x] = 0;
        }
        return false;
    };
    do {
        count += is_matroid(m, cfg) ? 1 : 0;
    } while (bump());
    return count;
}

} // namespace

TEST_CASE("two points")
{
    auto cfg = points(2);
    cfg.hypotheses = {{PointSet{0b11}, 2}};
    const auto forced = all_models(cfg);
    REQUIRE(forced.size() == 1);
    CHECK(forced[0][PointSet{0b01}] == 1);
    CHECK(forced[0][PointSet{0b10}] == 1);
    CHECK(forced[0][PointSet{0b11}] == 2);

    cfg.hypotheses.clear();
    const auto free = all_models(cfg);
    REQUIRE(free.size() == 2);
    CHECK(free[0][PointSet{0b11}] != free[1][PointSet{0b11}]);
}

TEST_CASE("enumeration agrees with the unpruned count")
{
    for (unsigned n = 1; n <= 3; ++n) {
        for (unsigned dim : {2U, 3U}) {
            const auto cfg = points(n, dim);
            CHECK(all_models(cfg).size() == naive_count(cfg));
        }
    }
    auto cfg = points(3);
    cfg.hypotheses = {{PointSet{0b011}, 2}, {PointSet{0b111}, 2}};
    CHECK(all_models(cfg).size() == naive_count(cfg));
}

TEST_CASE("every enumerated model passes the axiom check")
{
    std::mt19937_64 rng(41);
    for (int i = 0; i < 20; ++i) {
        RandomConfigSpec spec;
        spec.points = 5;
        const auto cfg = random_configuration(rng, spec);
        std::size_t count = 0;
        enumerate_models(cfg, [&](const RankModel& m) {
            CHECK(is_matroid(m, cfg));
            ++count;
            return true;
        });
        CHECK(count >= 1); // realizable by construction
    }
}

TEST_CASE("is_matroid rejects broken functions")
{
    const auto cfg = points(2);
    CHECK(is_matroid(RankModel{2, {0, 1, 1, 2}}, cfg));
    CHECK_FALSE(is_matroid(RankModel{2, {0, 1, 1, 3}}, cfg)); // above |X|
    CHECK_FALSE(is_matroid(RankModel{2, {0, 0, 1, 1}}, cfg)); // singleton of rank 0
    CHECK_FALSE(is_matroid(RankModel{2, {1, 1, 1, 2}}, cfg)); // empty set
    auto three = points(3);
    // rk(AB) + rk(AC) < rk(ABC) + rk(A)
    CHECK_FALSE(is_matroid(RankModel{3, {0, 1, 1, 1, 1, 1, 2, 3}}, three));
}

TEST_CASE("semantic_entails")
{
    const auto ex2 = load_config("ex2.g");
    CHECK(semantic_entails(ex2, {PointSet{0b0111}, 3}).kind == SemanticVerdict::Kind::Yes);
    CHECK(semantic_entails(ex2, {PointSet{0b1001}, 2}).kind == SemanticVerdict::Kind::Yes);

    const auto no = semantic_entails(ex2, {PointSet{0b0011}, 1});
    REQUIRE(no.kind == SemanticVerdict::Kind::No);
    REQUIRE(no.counter_model.has_value());
    CHECK((*no.counter_model)[PointSet{0b0011}] != 1);
    CHECK(is_matroid(*no.counter_model, ex2));

    auto bad = points(3);
    bad.hypotheses = {{PointSet{0b011}, 2}, {PointSet{0b111}, 1}};
    CHECK(semantic_entails(bad, {PointSet{1}, 1}).kind == SemanticVerdict::Kind::NoModels);
}

TEST_CASE("scale guard")
{
    CHECK_NOTHROW(all_models(points(1)));
    CHECK_THROWS_AS(all_models(points(6)), OracleScaleError);
}
