// Shared vocabulary: points, subsets, rank intervals, configurations and
// deduction steps.

#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rankprover {

// Hard cap on configuration size; the lattice has 2^n - 1 nodes.
inline constexpr unsigned kMaxPoints = 24;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed use of the core types (bits outside the configuration, empty sets
// where a non-empty one is required, ...).
class StructuralError : public Error {
public:
    using Error::Error;
};

// Bitmask-encoded subset of the points of one configuration. Bit i stands for
// the point introduced i-th.
class PointSet {
public:
    using Mask = std::uint32_t;

    constexpr PointSet() = default;
    constexpr explicit PointSet(Mask bits) : bits_{bits} {}

    static constexpr PointSet singleton(unsigned index) { return PointSet{Mask{1} << index}; }
    static constexpr PointSet first(unsigned count)
    {
        return PointSet{count >= 32 ? ~Mask{0} : (Mask{1} << count) - 1};
    }

    [[nodiscard]] constexpr Mask bits() const { return bits_; }
    [[nodiscard]] constexpr unsigned size() const { return static_cast<unsigned>(std::popcount(bits_)); }
    [[nodiscard]] constexpr bool empty() const { return bits_ == 0; }
    [[nodiscard]] constexpr bool contains(unsigned index) const { return (bits_ >> index) & 1U; }
    [[nodiscard]] constexpr bool subset_of(PointSet other) const { return (bits_ & ~other.bits_) == 0; }
    [[nodiscard]] constexpr bool proper_subset_of(PointSet other) const
    {
        return subset_of(other) && bits_ != other.bits_;
    }
    // Neither set contains the other.
    [[nodiscard]] constexpr bool incomparable_with(PointSet other) const
    {
        return !subset_of(other) && !other.subset_of(*this);
    }
    // True when every set bit is below `count`.
    [[nodiscard]] constexpr bool fits(unsigned count) const { return subset_of(first(count)); }

    friend constexpr PointSet operator|(PointSet a, PointSet b) { return PointSet{a.bits_ | b.bits_}; }
    friend constexpr PointSet operator&(PointSet a, PointSet b) { return PointSet{a.bits_ & b.bits_}; }
    friend constexpr PointSet operator-(PointSet a, PointSet b) { return PointSet{a.bits_ & ~b.bits_}; }
    friend constexpr bool operator==(PointSet, PointSet) = default;
    friend constexpr auto operator<=>(PointSet, PointSet) = default;

    // Member indices in increasing order.
    [[nodiscard]] std::vector<unsigned> indices() const;

private:
    Mask bits_ = 0;
};

// Iterates all non-empty subsets of the first n points in ascending mask order.
class SubsetRange {
public:
    class iterator {
    public:
        using value_type = PointSet;
        using difference_type = std::ptrdiff_t;

        iterator() = default;
        explicit iterator(std::uint64_t mask) : mask_{mask} {}
        PointSet operator*() const { return PointSet{static_cast<PointSet::Mask>(mask_)}; }
        iterator& operator++()
        {
            ++mask_;
            return *this;
        }
        iterator operator++(int)
        {
            auto copy = *this;
            ++mask_;
            return copy;
        }
        friend bool operator==(iterator, iterator) = default;

    private:
        std::uint64_t mask_ = 0;
    };

    explicit SubsetRange(unsigned n) : end_{std::uint64_t{1} << n} {}
    [[nodiscard]] iterator begin() const { return iterator{1}; }
    [[nodiscard]] iterator end() const { return iterator{end_}; }
    [[nodiscard]] std::uint64_t size() const { return end_ - 1; }

private:
    std::uint64_t end_;
};

// All 2^n - 1 non-empty subsets, ascending by mask. Throws StructuralError for
// n == 0 or n above kMaxPoints.
SubsetRange subset_iter(unsigned n);

struct RankInterval {
    unsigned lo = 0;
    unsigned hi = 0;

    [[nodiscard]] bool pinned() const { return lo == hi; }
    friend bool operator==(const RankInterval&, const RankInterval&) = default;
};

std::string to_string(const RankInterval& interval);

struct Point {
    unsigned index = 0;
    std::string name;

    friend bool operator==(const Point&, const Point&) = default;
};

// rk(set) = rank; used for hypotheses, conclusions and goals.
struct RankFact {
    PointSet set;
    unsigned rank = 0;

    friend bool operator==(const RankFact&, const RankFact&) = default;
    friend auto operator<=>(const RankFact&, const RankFact&) = default;
};

struct Configuration {
    unsigned dimension = 3;
    std::vector<Point> points;
    std::vector<RankFact> hypotheses;
    std::vector<RankFact> conclusions;
    unsigned layer_count = 1;

    [[nodiscard]] unsigned point_count() const { return static_cast<unsigned>(points.size()); }
    [[nodiscard]] unsigned max_rank() const { return dimension + 1; }
    [[nodiscard]] PointSet all_points() const { return PointSet::first(point_count()); }
    [[nodiscard]] std::optional<unsigned> find_point(std::string_view name) const;
    // The rank stated by a hypothesis on exactly this set, if any.
    [[nodiscard]] std::optional<unsigned> hypothesis_rank(PointSet set) const;

    // [1, min(|set|, dim+1)]: what is known about a subset before any deduction.
    [[nodiscard]] RankInterval default_interval(PointSet set) const;

    // Throws StructuralError describing the first violated invariant.
    void validate() const;
};

// Same dimension, same point names in the same order, same hypothesis and
// conclusion sets (order-insensitive).
bool semantically_equal(const Configuration& a, const Configuration& b);

// "A :: B :: C :: nil", members in introduction order.
std::string canonical_render(PointSet set, const Configuration& cfg);

// Member names concatenated in introduction order ("ABC").
std::string concatenated_names(PointSet set, const Configuration& cfg);

enum class Bound : std::uint8_t { Lo, Hi };

std::string_view to_string(Bound bound);
std::optional<Bound> parse_bound(std::string_view text);

enum class RuleId : std::uint8_t {
    InitDefault,
    Hyp,
    MonoLo,
    MonoHi,
    SubmodHiUnion,
    SubmodHiInter,
    SubmodLo,
};

inline constexpr std::size_t kRuleCount = 7;

// Upper-case names used in trace files: INIT_DEFAULT, HYP, MONO_LO, ...
std::string_view to_string(RuleId rule);
std::optional<RuleId> parse_rule(std::string_view text);

using StepId = std::uint32_t;

// Where a premise bound comes from.
enum class Origin : std::uint8_t {
    Default,    // implicit initial interval
    Hypothesis, // configuration hypothesis on that set
    Step,       // an earlier deduction step
};

struct Premise {
    PointSet set;
    Bound bound = Bound::Lo;
    Origin origin = Origin::Default;
    StepId step = 0; // meaningful only for Origin::Step

    friend bool operator==(const Premise&, const Premise&) = default;
};

struct DeductionStep {
    StepId id = 0;
    RuleId rule = RuleId::Hyp;
    PointSet target;
    Bound bound = Bound::Lo;
    unsigned value = 0;
    std::vector<Premise> premises;
    // Rule operands: (X, Y) for monotonicity and submodularity, empty for HYP.
    std::vector<PointSet> operands;
    // The step whose bound on (target, bound) this one tightens; empty when the
    // previous bound was the default one.
    std::optional<StepId> supersedes;

    friend bool operator==(const DeductionStep&, const DeductionStep&) = default;
};

struct Verdict {
    enum class Status : std::uint8_t { Accepted, RejectedStep, GoalMismatch };

    Status status = Status::Accepted;
    StepId step = 0;
    std::string reason;

    [[nodiscard]] bool accepted() const { return status == Status::Accepted; }
};

std::string to_string(const Verdict& verdict);

} // namespace rankprover
