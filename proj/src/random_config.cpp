#include "rankprover/random_config.hpp"

#include <array>

namespace rankprover {

namespace {

using Vector = std::array<unsigned, 4>;

unsigned inverse_mod(unsigned a, unsigned q)
{
    for (unsigned b = 1; b < q; ++b) {
        if ((a * b) % q == 1) {
            return b;
        }
    }
    return 0;
}

unsigned linear_rank(std::vector<Vector> rows, unsigned width, unsigned q)
{
    unsigned rank = 0;
    for (unsigned col = 0; col < width && rank < rows.size(); ++col) {
        auto pivot = rows.size();
        for (std::size_t r = rank; r < rows.size(); ++r) {
            if (rows[r][col] != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot == rows.size()) {
            continue;
        }
        std::swap(rows[rank], rows[pivot]);
        const unsigned inv = inverse_mod(rows[rank][col], q);
        for (auto& v : rows[rank]) {
            v = (v * inv) % q;
        }
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != rank && rows[r][col] != 0) {
                const unsigned f = rows[r][col];
                for (unsigned c = 0; c < width; ++c) {
                    rows[r][c] = (rows[r][c] + q * q - f * rows[rank][c]) % q;
                }
            }
        }
        ++rank;
    }
    return rank;
}

} // namespace

Configuration random_configuration(std::mt19937_64& rng, const RandomConfigSpec& spec)
{
    static constexpr std::array<unsigned, 3> kFields = {2, 3, 5};
    const unsigned q = kFields[std::uniform_int_distribution<std::size_t>(0, kFields.size() - 1)(rng)];
    const unsigned width = spec.dimension + 1;

    Configuration cfg;
    cfg.dimension = spec.dimension;
    std::vector<Vector> coords;
    std::uniform_int_distribution<unsigned> digit(0, q - 1);
    for (unsigned i = 0; i < spec.points; ++i) {
        Vector v{};
        do {
            for (unsigned c = 0; c < width; ++c) {
                v[c] = digit(rng);
            }
        } while (v == Vector{});
        coords.push_back(v);
        cfg.points.push_back({i, std::string(1, static_cast<char>('A' + i % 26)) + (i >= 26 ? std::to_string(i / 26) : "")});
    }

    const auto rank_of = [&](PointSet s) {
        std::vector<Vector> rows;
        for (unsigned i : s.indices()) {
            rows.push_back(coords[i]);
        }
        return linear_rank(rows, width, q);
    };
    // Subsets of at least two points; singletons carry no information.
    std::uniform_int_distribution<PointSet::Mask> mask(1, (PointSet::Mask{1} << spec.points) - 1);
    const auto random_set = [&] {
        PointSet s;
        do {
            s = PointSet{mask(rng)};
        } while (spec.points > 1 && s.size() < 2);
        return s;
    };

    const unsigned hyps = std::uniform_int_distribution<unsigned>(spec.min_hypotheses, spec.max_hypotheses)(rng);
    for (unsigned i = 0; i < hyps; ++i) {
        const auto s = random_set();
        if (!cfg.hypothesis_rank(s)) {
            cfg.hypotheses.push_back({s, rank_of(s)});
        }
    }
    for (unsigned i = 0; i < std::max(1U, spec.conclusions); ++i) {
        const RankFact c{random_set(), 0};
        const RankFact fact{c.set, rank_of(c.set)};
        if (std::find(cfg.conclusions.begin(), cfg.conclusions.end(), fact) == cfg.conclusions.end()) {
            cfg.conclusions.push_back(fact);
        }
    }
    return cfg;
}

} // namespace rankprover
