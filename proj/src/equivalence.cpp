#include "dynper/equivalence.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "dynper/path_oracle.hpp"

namespace dynper {

namespace {

constexpr double infinity = std::numeric_limits<double>::infinity();

class Uniform {
public:
    explicit Uniform(std::uint64_t seed)
        : engine_(seed)
    {
    }

    /// [0, 1) with 53 random bits.
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double next(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
    std::mt19937_64 engine_;
};

void validate(const GeneratorSpec& spec)
{
    if (spec.shape.empty())
        throw UsageError("generator shape needs at least one axis");
    for (std::size_t e : spec.shape)
        if (e == 0)
            throw UsageError("generator shape extents must be positive");
    if (spec.bumps < 1)
        throw UsageError("generator needs at least one bump (K >= 1)");
    if (!std::isfinite(spec.amp_lo) || !std::isfinite(spec.amp_hi) || spec.amp_lo > spec.amp_hi)
        throw UsageError("amplitude range must be finite with lo <= hi");
    if (spec.kind == GeneratorKind::poly_sine_1d && spec.shape.size() != 1)
        throw UsageError("poly_sine_1d generates 1D fields only");
}

std::vector<double> gaussian_mixture(const GeneratorSpec& spec, Uniform& rng)
{
    const std::size_t ndim = spec.shape.size();
    const double extent =
        static_cast<double>(*std::max_element(spec.shape.begin(), spec.shape.end()));

    struct Bump {
        std::vector<double> center;
        double height;
        double inv_two_var;
    };
    std::vector<Bump> bumps;
    for (std::size_t k = 0; k < spec.bumps; ++k) {
        Bump b;
        for (std::size_t d = 0; d < ndim; ++d)
            b.center.push_back(rng.next(0.0, static_cast<double>(spec.shape[d] - 1)));
        const double amplitude = rng.next(spec.amp_lo, spec.amp_hi);
        b.height = k % 2 == 0 ? -amplitude : amplitude;
        const double sigma = rng.next(0.05, 0.2) * extent;
        b.inv_two_var = 1.0 / (2.0 * sigma * sigma);
        bumps.push_back(std::move(b));
    }

    std::size_t count = 1;
    for (std::size_t e : spec.shape)
        count *= e;
    std::vector<double> values(count, 0.0);
    std::vector<std::size_t> coord(ndim, 0);
    for (std::size_t i = 0; i < count; ++i) {
        double sum = 0.0;
        for (const Bump& b : bumps) {
            double r2 = 0.0;
            for (std::size_t d = 0; d < ndim; ++d) {
                const double delta = static_cast<double>(coord[d]) - b.center[d];
                r2 += delta * delta;
            }
            sum += b.height * std::exp(-r2 * b.inv_two_var);
        }
        values[i] = sum;
        for (std::size_t d = ndim; d-- > 0;) {
            if (++coord[d] < spec.shape[d])
                break;
            coord[d] = 0;
        }
    }
    return values;
}

std::vector<double> poly_sine(const GeneratorSpec& spec, Uniform& rng)
{
    const std::size_t n = spec.shape[0];
    const double scale = std::max(std::abs(spec.amp_lo), std::abs(spec.amp_hi));

    double cubic[4];
    for (double& c : cubic)
        c = rng.next(-1.0, 1.0) * scale;
    struct Wave {
        double amplitude, omega, phase;
    };
    std::vector<Wave> waves;
    for (std::size_t k = 0; k < spec.bumps; ++k) {
        const double amplitude = rng.next(spec.amp_lo, spec.amp_hi);
        const double omega = rng.next(2.0, 12.0) * std::numbers::pi;
        const double phase = rng.next(0.0, 2.0 * std::numbers::pi);
        waves.push_back({amplitude, omega, phase});
    }

    // |derivative| of everything but the ramp is at most `slope` on [-1, 1];
    // the ramp derivative exceeds 2.048 * ramp for |x| >= 0.8.
    double slope = std::abs(cubic[1]) + 2.0 * std::abs(cubic[2]) + 3.0 * std::abs(cubic[3]);
    for (const Wave& w : waves)
        slope += std::abs(w.amplitude) * w.omega;
    const double ramp = slope / 2.0 + 1.0;

    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = n == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
        double v = ramp * x * x * x * x + cubic[0] + x * (cubic[1] + x * (cubic[2] + x * cubic[3]));
        for (const Wave& w : waves)
            v += w.amplitude * std::sin(w.omega * x + w.phase);
        values[i] = v;
    }
    return values;
}

std::vector<double> uniform_random(const GeneratorSpec& spec, Uniform& rng)
{
    std::size_t count = 1;
    for (std::size_t e : spec.shape)
        count *= e;
    std::vector<double> values(count);
    for (double& v : values)
        v = rng.next(spec.amp_lo, spec.amp_hi);
    return values;
}

bool same_bits(double a, double b)
{
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

double discrepancy(double a, double b)
{
    if (a == b)
        return 0.0;
    return std::abs(a - b);
}

struct Divergence {
    VertexId minimum;
    std::string reason;
};

// Report for one field plus the first diverging minimum in total order.
std::pair<EquivalenceReport, std::optional<Divergence>> compare(const ScalarField& field,
                                                                const PairingFn& dynamics)
{
    const std::vector<PersistencePair> persistence = pair_by_persistence(field);
    const std::vector<PersistencePair> flooding = dynamics(field);

    std::map<VertexId, const PersistencePair*> by_persistence;
    std::map<VertexId, const PersistencePair*> by_flooding;
    for (const PersistencePair& p : persistence)
        by_persistence[p.min_vertex] = &p;
    bool duplicate = false;
    for (const PersistencePair& p : flooding)
        duplicate |= !by_flooding.emplace(p.min_vertex, &p).second;

    std::vector<VertexId> minima;
    for (const auto& [m, p] : by_persistence)
        minima.push_back(m);
    for (const auto& [m, p] : by_flooding)
        if (!by_persistence.count(m))
            minima.push_back(m);
    std::sort(minima.begin(), minima.end(), [&](VertexId a, VertexId b) {
        if (!field.contains(a) || !field.contains(b))
            return a < b;
        return field.before(a, b);
    });

    EquivalenceReport report;
    report.fields_tested = 1;
    std::optional<Divergence> first;
    auto diverge = [&](VertexId m, std::string reason) {
        report.pairings_identical = false;
        if (!first)
            first = Divergence{m, std::move(reason)};
    };

    if (duplicate && !minima.empty())
        diverge(minima.front(), "flooding pairs a minimum more than once");

    for (VertexId m : minima) {
        const auto p = by_persistence.find(m);
        const auto d = by_flooding.find(m);
        if (p == by_persistence.end() || d == by_flooding.end()) {
            report.max_value_discrepancy = infinity;
            diverge(m, p == by_persistence.end() ? "minimum paired only by flooding"
                                                 : "minimum paired only by persistence");
            continue;
        }
        const PersistencePair& a = *p->second;
        const PersistencePair& b = *d->second;
        report.max_value_discrepancy =
            std::max(report.max_value_discrepancy, discrepancy(a.value, b.value));
        if (a.saddle_vertex != b.saddle_vertex)
            diverge(m, "saddles differ");
        else if (!same_bits(a.value, b.value))
            diverge(m, "values differ");

        const DynamicsResult oracle = dynamics_oracle(field, m);
        report.max_value_discrepancy =
            std::max(report.max_value_discrepancy, discrepancy(a.value, oracle.value));
        if (!same_bits(a.value, oracle.value))
            diverge(m, "oracle value differs");
        else if (oracle.witness != a.saddle_vertex)
            diverge(m, "oracle witness differs from the paired saddle");
    }
    return {report, first};
}

} // namespace

GeneratorKind parse_generator_kind(const std::string& name)
{
    if (name == "gaussian_mixture")
        return GeneratorKind::gaussian_mixture;
    if (name == "poly_sine_1d")
        return GeneratorKind::poly_sine_1d;
    if (name == "uniform_random")
        return GeneratorKind::uniform_random;
    throw UsageError("unknown generator kind '" + name +
                     "' (expected gaussian_mixture, poly_sine_1d or uniform_random)");
}

const char* to_string(GeneratorKind kind)
{
    switch (kind) {
    case GeneratorKind::gaussian_mixture:
        return "gaussian_mixture";
    case GeneratorKind::poly_sine_1d:
        return "poly_sine_1d";
    case GeneratorKind::uniform_random:
        return "uniform_random";
    }
    return "?";
}

ScalarField generate(const GeneratorSpec& spec)
{
    validate(spec);
    Uniform rng(spec.seed);
    std::vector<double> values;
    switch (spec.kind) {
    case GeneratorKind::gaussian_mixture:
        values = gaussian_mixture(spec, rng);
        break;
    case GeneratorKind::poly_sine_1d:
        values = poly_sine(spec, rng);
        break;
    case GeneratorKind::uniform_random:
        values = uniform_random(spec, rng);
        break;
    }
    return ScalarField(spec.shape, std::move(values), spec.connectivity);
}

std::vector<GeneratorSpec> seeded_specs(const GeneratorSpec& base, std::size_t trials)
{
    std::vector<GeneratorSpec> specs(trials, base);
    for (std::size_t i = 0; i < trials; ++i)
        specs[i].seed = base.seed + i;
    return specs;
}

EquivalenceReport verify_equivalence(const ScalarField& field, const PairingFn& dynamics)
{
    auto [report, divergence] = compare(field, dynamics);
    if (divergence)
        report.first_counterexample =
            Counterexample{std::nullopt, divergence->minimum, std::move(divergence->reason), field};
    return report;
}

ScalarField shrink_counterexample(const ScalarField& field, const PairingFn& dynamics)
{
    ScalarField current = field;
    if (!compare(current, dynamics).second)
        return current;
    while (current.shape()[0] > 1) {
        std::vector<std::size_t> shape = current.shape();
        const std::size_t slice = current.size() / shape[0];
        --shape[0];
        std::vector<double> values(current.values().begin(),
                                   current.values().end() - static_cast<std::ptrdiff_t>(slice));
        ScalarField smaller(std::move(shape), std::move(values), current.connectivity());
        if (!compare(smaller, dynamics).second)
            break;
        current = std::move(smaller);
    }
    return current;
}

EquivalenceReport sweep(const std::vector<GeneratorSpec>& specs, const SweepOptions& options)
{
    for (const GeneratorSpec& spec : specs)
        validate(spec);

    const std::size_t n = specs.size();
    std::vector<std::optional<EquivalenceReport>> reports(n);
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> first_failure{none};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto work = [&] {
        try {
            for (std::size_t i = next++; i < n; i = next++) {
                if (options.fail_fast && i > first_failure.load())
                    break;
                EquivalenceReport r = compare(generate(specs[i]), options.dynamics).first;
                if (!r.pairings_identical) {
                    std::size_t seen = first_failure.load();
                    while (i < seen && !first_failure.compare_exchange_weak(seen, i)) {
                    }
                }
                reports[i] = std::move(r);
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error)
                error = std::current_exception();
            next = n;
        }
    };

    unsigned threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
    threads = static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1)));
    if (threads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(work);
    }
    if (error)
        std::rethrow_exception(error);

    EquivalenceReport total;
    for (std::size_t i = 0; i < n; ++i) {
        if (!reports[i])
            break; // fail-fast skipped the rest
        const EquivalenceReport& r = *reports[i];
        total.fields_tested += r.fields_tested;
        total.max_value_discrepancy = std::max(total.max_value_discrepancy, r.max_value_discrepancy);
        if (!r.pairings_identical && total.pairings_identical) {
            total.pairings_identical = false;
            const ScalarField shrunk = shrink_counterexample(generate(specs[i]), options.dynamics);
            auto divergence = compare(shrunk, options.dynamics).second;
            total.first_counterexample =
                Counterexample{specs[i], divergence->minimum, std::move(divergence->reason), shrunk};
            if (options.fail_fast)
                break;
        }
    }
    return total;
}

} // namespace dynper
