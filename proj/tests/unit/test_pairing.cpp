#include <doctest.h>

#include <limits>

#include "dynper/pairing.hpp"
#include "dynper/union_find.hpp"
#include "support/oracles.hpp"

using namespace dynper;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

const ScalarField& signal()
{
    static const ScalarField f = ScalarField::line({5, 1, 4, 0, 6});
    return f;
}

const ScalarField& grid()
{
    static const ScalarField f({3, 3}, {9, 8, 10, 2, 7, 3, 11, 12, 13});
    return f;
}

// Pairs keyed the way the reference computes them.
std::vector<oracle::Pair> simplified(const ScalarField& f, std::vector<PersistencePair> pairs)
{
    std::vector<oracle::Pair> out;
    for (const PersistencePair& p : pairs)
        out.push_back({p.min_vertex, p.saddle_vertex, p.value});
    std::sort(out.begin(), out.end(), [&](const oracle::Pair& a, const oracle::Pair& b) {
        return f.rank(a.min) < f.rank(b.min);
    });
    return out;
}

} // namespace

TEST_CASE("disjoint set")
{
    DisjointSet s(5);
    CHECK(s.find(3) == 3);
    s.unite(0, 1);
    s.unite(3, 4);
    CHECK(s.find(0) == s.find(1));
    CHECK(s.find(1) != s.find(3));
    s.unite(1, 4);
    CHECK(s.find(0) == s.find(3));
    CHECK(s.size_of(4) == 4);
    CHECK(s.size_of(2) == 1);
}

TEST_CASE("merge tree of the worked signal")
{
    const MergeTree t = build_merge_tree(signal());
    REQUIRE(t.events.size() == 1);
    CHECK(t.events[0] == MergeEvent{2, 3, 1, 4.0});
    CHECK(t.minima == std::vector<VertexId>{3, 1});
}

TEST_CASE("merge tree of the 3x3 grid")
{
    const MergeTree t = build_merge_tree(grid());
    REQUIRE(t.events.size() == 1);
    CHECK(t.events[0] == MergeEvent{4, 3, 5, 7.0});
}

TEST_CASE("ramp has no merges")
{
    const ScalarField ramp = ScalarField::line({0, 1, 2, 3});
    CHECK(build_merge_tree(ramp).events.empty());
    const auto pairs = pair_by_persistence(ramp);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].min_vertex == 0);
    CHECK(pairs[0].essential());
    CHECK(pairs[0].value == inf);
}

TEST_CASE("k-way merge is split into events ordered by dying minimum")
{
    // Four corner minima meet at the center under full connectivity.
    const ScalarField f({3, 3}, {0, 9, 1, 9, 5, 9, 2, 9, 3}, Connectivity::full);
    const MergeTree t = build_merge_tree(f);
    REQUIRE(t.events.size() == 3);
    CHECK(t.events[0] == MergeEvent{4, 0, 8, 5.0});
    CHECK(t.events[1] == MergeEvent{4, 0, 6, 5.0});
    CHECK(t.events[2] == MergeEvent{4, 0, 2, 5.0});
}

TEST_CASE("persistence pairs of the worked examples")
{
    const auto pairs = pair_by_persistence(signal());
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0] == PersistencePair{1, VertexId{2}, 1.0, 4.0, 3.0});
    CHECK(pairs[1].min_vertex == 3);
    CHECK(pairs[1].essential());
    CHECK(pairs[1].value == inf);

    const auto g = pair_by_persistence(grid());
    REQUIRE(g.size() == 2);
    CHECK(g[0] == PersistencePair{5, VertexId{4}, 3.0, 7.0, 4.0});
    CHECK(g[1].min_vertex == 3);
    CHECK(g[1].essential());
}

TEST_CASE("dynamics pairs of the worked examples")
{
    CHECK(pair_by_dynamics(signal()) == pair_by_persistence(signal()));
    CHECK(pair_by_dynamics(grid()) == pair_by_persistence(grid()));
    const auto single = pair_by_dynamics(ScalarField::line({3, 2, 1}));
    REQUIRE(single.size() == 1);
    CHECK(single[0].min_vertex == 2);
    CHECK(single[0].essential());
}

TEST_CASE("three minima with values 2 and 5")
{
    const ScalarField f = ScalarField::line({9, 0, 7, 5, 7, 2, 9});
    const auto pairs = pair_by_persistence(f);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0].value == 2);
    CHECK(pairs[1].value == 5);
    CHECK(pairs[2].essential());
}

TEST_CASE("both pairings match the flooding reference on permutations")
{
    for (std::size_t n = 1; n <= 6; ++n)
        for (const auto& p : oracle::permutations(n)) {
            const ScalarField f = ScalarField::line(p);
            const auto expected = oracle::pairs(f);
            CHECK(simplified(f, pair_by_persistence(f)) == expected);
            CHECK(simplified(f, pair_by_dynamics(f)) == expected);
        }
}

TEST_CASE("both pairings match the flooding reference on tied 2D fields")
{
    oracle::Random rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const auto c = trial % 2 ? Connectivity::full : Connectivity::axis;
        const ScalarField f = rng.integer_field({5, 6}, 0, 4, c);
        const auto expected = oracle::pairs(f);
        CHECK(simplified(f, pair_by_persistence(f)) == expected);
        CHECK(simplified(f, pair_by_dynamics(f)) == expected);
    }
}

TEST_CASE("pairs come sorted with the essential pair last")
{
    oracle::Random rng(5);
    const ScalarField f = rng.field({12, 12});
    const auto pairs = pair_by_persistence(f);
    REQUIRE(pairs.size() == oracle::minima(f).size());
    for (std::size_t i = 0; i + 1 < pairs.size(); ++i)
        CHECK(pairs[i].value <= pairs[i + 1].value);
    CHECK(pairs.back().essential());
    CHECK(pairs.back().min_vertex == f.order()[0]);

    auto shuffled = pairs;
    std::reverse(shuffled.begin(), shuffled.end());
    sort_pairs(f, shuffled);
    CHECK(shuffled == pairs);
}

TEST_CASE("elder rule and event levels")
{
    oracle::Random rng(9);
    const ScalarField f = rng.field({10, 10}, Connectivity::full);
    const MergeTree t = build_merge_tree(f);
    for (std::size_t i = 0; i < t.events.size(); ++i) {
        const MergeEvent& e = t.events[i];
        CHECK(f.before(e.survivor_min, e.dying_min));
        CHECK(e.level == f.value(e.saddle));
        if (i > 0)
            CHECK(t.events[i - 1].level <= e.level);
    }
    CHECK(t.events.size() + 1 == t.minima.size());
}

TEST_CASE("1D maximum pairing on the worked signals")
{
    CHECK(pair_1d_algorithm1(signal(), 2) == VertexId{1});
    CHECK(pair_1d_algorithm1(ScalarField::line({0, 3, 1}), 1) == VertexId{2});
    CHECK_FALSE(pair_1d_algorithm1(ScalarField::line({1, 0, 1}), 0).has_value());
    CHECK_FALSE(pair_1d_algorithm1(ScalarField::line({1, 0, 1}), 2).has_value());
    CHECK_FALSE(pair_1d_algorithm1(ScalarField::line({4}), 0).has_value());
}

TEST_CASE("1D maximum pairing rejects non-maxima and non-1D fields")
{
    CHECK_THROWS_AS(pair_1d_algorithm1(signal(), 1), UsageError);
    CHECK_THROWS_AS(pair_1d_algorithm1(signal(), 7), UsageError);
    CHECK_THROWS_AS(pair_1d_algorithm1(grid(), 4), UsageError);
}

TEST_CASE("persistence diagram")
{
    CHECK(persistence_diagram(pair_by_persistence(signal())) ==
          std::vector<std::pair<double, double>>{{1, 4}});
    CHECK(persistence_diagram(pair_by_persistence(signal()), 6.0) ==
          std::vector<std::pair<double, double>>{{1, 4}, {0, 6}});
    CHECK(persistence_diagram(pair_by_persistence(ScalarField::line({0, 1, 2}))).empty());

    const auto two = persistence_diagram(pair_by_persistence(ScalarField::line({6, 0, 5, 2, 4, 1, 6})));
    REQUIRE(two.size() == 2);
    for (const auto& [birth, death] : two)
        CHECK(death > birth);
    CHECK(two == std::vector<std::pair<double, double>>{{2, 4}, {1, 5}});
}
