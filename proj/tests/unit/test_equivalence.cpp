#include <doctest.h>

#include "dynper/equivalence.hpp"
#include "support/oracles.hpp"

using namespace dynper;

namespace {

// Flooding with the smallest finite value nudged upward.
std::vector<PersistencePair> corrupted(const ScalarField& f)
{
    std::vector<PersistencePair> pairs = pair_by_dynamics(f);
    for (PersistencePair& p : pairs)
        if (!p.essential()) {
            p.value = std::nextafter(p.value, 1e300);
            break;
        }
    return pairs;
}

GeneratorSpec spec(GeneratorKind kind, std::vector<std::size_t> shape, std::uint64_t seed,
                   std::size_t bumps = 4)
{
    GeneratorSpec s;
    s.kind = kind;
    s.shape = std::move(shape);
    s.seed = seed;
    s.bumps = bumps;
    return s;
}

} // namespace

TEST_CASE("generators are deterministic")
{
    for (GeneratorKind kind : {GeneratorKind::gaussian_mixture, GeneratorKind::uniform_random}) {
        const GeneratorSpec s = spec(kind, {8, 8}, 42);
        CHECK(generate(s) == generate(s));
        GeneratorSpec other = s;
        other.seed = 43;
        CHECK_FALSE(generate(s) == generate(other));
    }
    const GeneratorSpec p = spec(GeneratorKind::poly_sine_1d, {64}, 1);
    CHECK(generate(p) == generate(p));
}

TEST_CASE("a single negative bump has one minimum")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const ScalarField f = generate(spec(GeneratorKind::gaussian_mixture, {24, 24}, seed, 1));
        CHECK(oracle::minima(f).size() == 1);
        CHECK(f.min_value() < 0);
    }
}

TEST_CASE("poly_sine_1d rises at both ends")
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const ScalarField f = generate(spec(GeneratorKind::poly_sine_1d, {256}, seed, 6));
        CHECK(f.value(0) > f.value(1));
        CHECK(f.value(255) > f.value(254));
        const auto mins = oracle::minima(f);
        CHECK(std::find(mins.begin(), mins.end(), VertexId{0}) == mins.end());
        CHECK(std::find(mins.begin(), mins.end(), VertexId{255}) == mins.end());
    }
}

TEST_CASE("uniform values stay in the amplitude range")
{
    GeneratorSpec s = spec(GeneratorKind::uniform_random, {10, 10}, 3);
    s.amp_lo = -2;
    s.amp_hi = 5;
    const ScalarField f = generate(s);
    CHECK(f.min_value() >= -2);
    CHECK(f.max_value() < 5);
}

TEST_CASE("invalid generator specs")
{
    CHECK_THROWS_AS(generate(spec(GeneratorKind::uniform_random, {}, 0)), UsageError);
    CHECK_THROWS_AS(generate(spec(GeneratorKind::uniform_random, {4, 0}, 0)), UsageError);
    CHECK_THROWS_AS(generate(spec(GeneratorKind::gaussian_mixture, {4, 4}, 0, 0)), UsageError);
    CHECK_THROWS_AS(generate(spec(GeneratorKind::poly_sine_1d, {4, 4}, 0)), UsageError);
    GeneratorSpec s = spec(GeneratorKind::uniform_random, {4}, 0);
    s.amp_lo = 3;
    s.amp_hi = 1;
    CHECK_THROWS_AS(generate(s), UsageError);
    CHECK_THROWS_AS(parse_generator_kind("perlin"), UsageError);
    CHECK(parse_generator_kind("poly_sine_1d") == GeneratorKind::poly_sine_1d);
}

TEST_CASE("single-field verification")
{
    const EquivalenceReport a = verify_equivalence(ScalarField::line({5, 1, 4, 0, 6}));
    CHECK(a.fields_tested == 1);
    CHECK(a.pairings_identical);
    CHECK(a.max_value_discrepancy == 0);
    CHECK_FALSE(a.first_counterexample.has_value());

    CHECK(verify_equivalence(ScalarField::line({0, 1, 2, 3})).pairings_identical);
    CHECK(verify_equivalence(ScalarField({3, 3}, {9, 8, 10, 2, 7, 3, 11, 12, 13})).pairings_identical);
}

TEST_CASE("verification reports a corrupted pairing")
{
    const ScalarField f = ScalarField::line({5, 1, 4, 0, 6});
    const EquivalenceReport r = verify_equivalence(f, corrupted);
    CHECK_FALSE(r.pairings_identical);
    REQUIRE(r.first_counterexample.has_value());
    CHECK(r.first_counterexample->divergent_min == 1);
    CHECK(r.max_value_discrepancy > 0);

    const EquivalenceReport missing =
        verify_equivalence(f, [](const ScalarField& g) {
            auto pairs = pair_by_dynamics(g);
            pairs.pop_back();
            return pairs;
        });
    CHECK_FALSE(missing.pairings_identical);
    CHECK(missing.max_value_discrepancy == std::numeric_limits<double>::infinity());
}

TEST_CASE("sweeps fold reports")
{
    CHECK(sweep({}).fields_tested == 0);
    CHECK(sweep({}).pairings_identical);

    const auto specs = seeded_specs(spec(GeneratorKind::poly_sine_1d, {128}, 100, 5), 200);
    CHECK(specs.size() == 200);
    CHECK(specs[7].seed == 107);
    const EquivalenceReport r = sweep(specs);
    CHECK(r.fields_tested == 200);
    CHECK(r.pairings_identical);
    CHECK(r.max_value_discrepancy == 0);
}

TEST_CASE("sweep with a fault finds and shrinks a counterexample")
{
    const auto specs = seeded_specs(spec(GeneratorKind::uniform_random, {40}, 7), 10);
    SweepOptions options;
    options.dynamics = corrupted;
    const EquivalenceReport r = sweep(specs, options);
    CHECK(r.fields_tested == 10);
    CHECK_FALSE(r.pairings_identical);
    REQUIRE(r.first_counterexample.has_value());
    const Counterexample& c = *r.first_counterexample;
    CHECK(c.spec == specs[0]);
    // The smallest prefix that still has two minima.
    CHECK(c.field.size() < 40);
    CHECK(oracle::minima(c.field).size() == 2);
    std::vector<double> shorter(c.field.values().begin(), c.field.values().end() - 1);
    CHECK(oracle::minima(ScalarField::line(shorter)).size() == 1);

    options.fail_fast = true;
    const EquivalenceReport fast = sweep(specs, options);
    CHECK(fast.fields_tested == 1);
    CHECK_FALSE(fast.pairings_identical);
}

TEST_CASE("shrinking removes rows of 2D fields")
{
    const ScalarField f = generate(spec(GeneratorKind::uniform_random, {6, 5}, 2));
    const ScalarField small = shrink_counterexample(f, corrupted);
    CHECK(small.shape()[1] == 5);
    CHECK(small.shape()[0] <= 6);
    CHECK_FALSE(verify_equivalence(small, corrupted).pairings_identical);
    CHECK(shrink_counterexample(f) == f);
}

TEST_CASE("threads do not change the report")
{
    auto specs = seeded_specs(spec(GeneratorKind::gaussian_mixture, {20, 20}, 0, 10), 24);
    for (std::size_t i = 0; i < specs.size(); i += 2)
        specs[i].connectivity = Connectivity::full;
    SweepOptions serial;
    SweepOptions parallel;
    parallel.threads = 4;
    const EquivalenceReport a = sweep(specs, serial);
    const EquivalenceReport b = sweep(specs, parallel);
    CHECK(a.fields_tested == b.fields_tested);
    CHECK(a.pairings_identical == b.pairings_identical);

    parallel.dynamics = corrupted;
    serial.dynamics = corrupted;
    parallel.fail_fast = true;
    serial.fail_fast = true;
    const EquivalenceReport c = sweep(specs, serial);
    const EquivalenceReport d = sweep(specs, parallel);
    CHECK(c.fields_tested == d.fields_tested);
    REQUIRE(d.first_counterexample.has_value());
    CHECK(c.first_counterexample->spec == d.first_counterexample->spec);
}
