#include <doctest.h>

#include <cmath>

#include "dynper/morphology.hpp"
#include "support/oracles.hpp"

using namespace dynper;

namespace {

const ScalarField& signal()
{
    static const ScalarField f = ScalarField::line({5, 1, 4, 0, 6});
    return f;
}

std::vector<double> values(const ScalarField& f)
{
    return {f.values().begin(), f.values().end()};
}

std::set<oracle::Edge> salient(const SaliencyMap& map, double t)
{
    std::set<oracle::Edge> out;
    for (const SaliencyEdge& e : map.edges)
        if (e.value >= t)
            out.insert({e.u, e.v});
    return out;
}

} // namespace

TEST_CASE("filter on the worked signal")
{
    CHECK(values(filter_dynamics(signal(), 3.5)) == std::vector<double>{5, 4, 4, 0, 6});
    CHECK(filter_dynamics(signal(), 2) == signal());
    CHECK(filter_dynamics(signal(), 0.5) == signal());
}

TEST_CASE("filter rejects bad thresholds")
{
    CHECK_THROWS_AS(filter_dynamics(signal(), 0), UsageError);
    CHECK_THROWS_AS(filter_dynamics(signal(), -1), UsageError);
    CHECK_THROWS_AS(filter_dynamics(signal(), std::nan("")), UsageError);
    try {
        filter_dynamics(signal(), 3);
        FAIL("expected a collision error");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("threshold 3 ") != std::string::npos);
    }
}

TEST_CASE("filter equals one-at-a-time cancellation")
{
    oracle::Random rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const auto c = trial % 2 ? Connectivity::full : Connectivity::axis;
        const ScalarField f = rng.field({7, 7}, c);
        for (double t : oracle::interval_thresholds(oracle::breakpoints(f)))
            CHECK(filter_dynamics(f, t) == oracle::sequential_filter(f, t));
    }
    for (const auto& p : oracle::permutations(6)) {
        const ScalarField f = ScalarField::line(p);
        for (double t : oracle::interval_thresholds(oracle::breakpoints(f)))
            CHECK(filter_dynamics(f, t) == oracle::sequential_filter(f, t));
    }
}

TEST_CASE("watershed of the worked examples")
{
    CHECK(watershed(signal()).labels == std::vector<VertexId>{1, 1, 3, 3, 3});
    CHECK(watershed(ScalarField::line({0, 1, 2, 3})).labels == std::vector<VertexId>(4, 0));

    const ScalarField g({3, 3}, {9, 8, 10, 2, 7, 3, 11, 12, 13});
    const WatershedLabels w = watershed(g);
    CHECK(w.region_count() == 2);
    CHECK(w.labels[4] == 3);
}

TEST_CASE("watershed basins are connected and one per minimum")
{
    oracle::Random rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto c = trial % 2 ? Connectivity::full : Connectivity::axis;
        const ScalarField f = rng.field({9, 11}, c);
        const WatershedLabels w = watershed(f);
        const auto mins = oracle::minima(f);
        CHECK(w.region_count() == mins.size());
        for (VertexId m : mins)
            CHECK(w.labels[m] == m);
        // Every vertex reaches its minimum inside its basin.
        for (VertexId m : mins) {
            std::vector<char> seen(f.size(), 0);
            std::vector<VertexId> stack{m};
            seen[m] = 1;
            std::size_t reached = 0;
            while (!stack.empty()) {
                const VertexId v = stack.back();
                stack.pop_back();
                ++reached;
                for (VertexId u : f.neighbors(v))
                    if (!seen[u] && w.labels[u] == m) {
                        seen[u] = 1;
                        stack.push_back(u);
                    }
            }
            CHECK(reached == static_cast<std::size_t>(std::count(w.labels.begin(), w.labels.end(), m)));
        }
    }
}

TEST_CASE("granulometric curve")
{
    const GranulometricCurve c = granulometric_curve(pair_by_persistence(signal()));
    CHECK(c.breakpoints == std::vector<double>{3});
    CHECK(c.counts == std::vector<std::size_t>{2, 1});
    CHECK(c.count_at(1) == 2);
    CHECK(c.count_at(3) == 2);
    CHECK(c.count_at(3.5) == 1);

    const GranulometricCurve flat = granulometric_curve(pair_by_persistence(ScalarField::line({0, 1})));
    CHECK(flat.breakpoints.empty());
    CHECK(flat.counts == std::vector<std::size_t>{1});

    const GranulometricCurve three =
        granulometric_curve(pair_by_persistence(ScalarField::line({9, 0, 7, 5, 7, 2, 9})));
    CHECK(three.breakpoints == std::vector<double>{2, 5});
    CHECK(three.counts == std::vector<std::size_t>{3, 2, 1});
}

TEST_CASE("curve counts minima with large enough dynamics")
{
    oracle::Random rng(13);
    const ScalarField f = rng.field({10, 10});
    const GranulometricCurve c = granulometric_curve(pair_by_persistence(f));
    const auto mins = oracle::minima(f);
    for (double t : oracle::interval_thresholds(c.breakpoints)) {
        std::size_t expected = 0;
        for (VertexId m : mins)
            expected += oracle::dynamics(f, m) >= t;
        CHECK(c.count_at(t) == expected);
    }
    CHECK(c.counts.back() == 1);
}

TEST_CASE("saliency of the worked signal")
{
    const SaliencyMap s = saliency(signal());
    REQUIRE(s.edges.size() == 1);
    CHECK(s.edges[0] == SaliencyEdge{1, 2, 3.0});
    CHECK(s.at(2, 1) == 3);
    CHECK(s.at(2, 3) == 0);
    CHECK(saliency(ScalarField::line({0, 1, 2})).edges.empty());

    const ScalarField grid = saliency_grid(signal(), s);
    CHECK(grid.shape() == std::vector<std::size_t>{9});
    CHECK(values(grid) == std::vector<double>{0, 0, 0, 3, 0, 0, 0, 0, 0});
}

TEST_CASE("saliency equals stacking of filtered watersheds")
{
    oracle::Random rng(17);
    for (int trial = 0; trial < 16; ++trial) {
        const auto c = trial % 2 ? Connectivity::full : Connectivity::axis;
        const ScalarField f = rng.field({8, 9}, c);
        const SaliencyMap s = saliency(f);
        const auto stacked = oracle::stacked_saliency(f);
        REQUIRE(s.edges.size() == stacked.size());
        for (const SaliencyEdge& e : s.edges)
            CHECK(stacked.at({e.u, e.v}) == e.value);
        for (double t : oracle::interval_thresholds(oracle::breakpoints(f))) {
            const ScalarField g = filter_dynamics(f, t);
            CHECK(salient(s, t) == oracle::boundary(g, watershed(g).labels));
        }
    }
}

TEST_CASE("saliency grid in 2D")
{
    const ScalarField f({2, 2}, {0, 5, 6, 1});
    const SaliencyMap s = saliency(f);
    const ScalarField grid = saliency_grid(f, s);
    CHECK(grid.shape() == std::vector<std::size_t>{3, 3});
    // Vertices 1 and 2 flood from the elder basin of 0, so edges (1,3) and
    // (2,3) carry the dynamics 4 of minimum 3.
    CHECK(watershed(f).labels == std::vector<VertexId>{0, 0, 0, 3});
    CHECK(values(grid) == std::vector<double>{0, 0, 0, 0, 0, 4, 0, 4, 0});
}

TEST_CASE("segment pipeline")
{
    const SegmentResult r = segment_pipeline(signal(), 3.5);
    CHECK(r.labels.region_count() == 1);
    CHECK(values(r.filtered) == std::vector<double>{5, 4, 4, 0, 6});
    CHECK(r.curve.counts == std::vector<std::size_t>{1});
    CHECK(segment_pipeline(signal(), 2).labels.region_count() == 2);
    CHECK_THROWS_AS(segment_pipeline(signal(), 0), UsageError);
}
