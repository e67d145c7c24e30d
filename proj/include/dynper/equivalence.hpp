#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dynper/field.hpp"
#include "dynper/pairing.hpp"

namespace dynper {

enum class GeneratorKind { gaussian_mixture, poly_sine_1d, uniform_random };

GeneratorKind parse_generator_kind(const std::string& name);
const char* to_string(GeneratorKind kind);

/// Seeded recipe for a synthetic field. `bumps` is the number of Gaussian
/// bumps (gaussian_mixture) or sinusoids (poly_sine_1d); uniform_random
/// ignores it. The amplitude range bounds bump heights, sinusoid amplitudes,
/// or the uniform values.
struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::uniform_random;
    std::vector<std::size_t> shape;
    std::size_t bumps = 1;
    std::uint64_t seed = 0;
    double amp_lo = 1.0;
    double amp_hi = 2.0;
    Connectivity connectivity = Connectivity::axis;

    friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

/// Deterministic in the spec on every platform: draws come from
/// std::mt19937_64 mapped to doubles by hand rather than through a
/// distribution object.
///
/// gaussian_mixture: bump k is negative for even k, positive for odd k, with
/// a seeded center, amplitude in [amp_lo, amp_hi] and width between 5% and
/// 20% of the longest axis.
/// poly_sine_1d: on x in [-1, 1], a seeded cubic plus `bumps` sinusoids plus
/// a quartic ramp steep enough that the signal rises monotonically for
/// |x| >= 0.8, so the end vertices are never minima once the length reaches 11.
/// uniform_random: i.i.d. values in [amp_lo, amp_hi).
ScalarField generate(const GeneratorSpec& spec);

/// `trials` copies of `base` with seeds base.seed, base.seed + 1, ...
std::vector<GeneratorSpec> seeded_specs(const GeneratorSpec& base, std::size_t trials);

struct Counterexample {
    std::optional<GeneratorSpec> spec; ///< empty for a directly supplied field
    VertexId divergent_min;            ///< index into `field`
    std::string reason;
    ScalarField field;                 ///< shrunk field that still diverges
};

struct EquivalenceReport {
    std::size_t fields_tested = 0;
    bool pairings_identical = true;
    std::optional<Counterexample> first_counterexample;
    /// Largest |difference| between the values the three computations assign
    /// to one minimum; +inf when one side misses a minimum entirely.
    double max_value_discrepancy = 0.0;
};

using PairingFn = std::function<std::vector<PersistencePair>(const ScalarField&)>;

/// Compares pair_by_persistence with `dynamics` (pair_by_dynamics unless a
/// test substitutes a corrupted pairing) and with dynamics_oracle for every
/// minimum. Identical means the same (minimum, saddle) sets, bit-equal
/// values, and oracle witnesses equal to the paired saddles.
EquivalenceReport verify_equivalence(const ScalarField& field,
                                     const PairingFn& dynamics = pair_by_dynamics);

struct SweepOptions {
    bool fail_fast = false;
    unsigned threads = 1; ///< 0 picks std::thread::hardware_concurrency()
    PairingFn dynamics = pair_by_dynamics;
};

/// Verifies every generated field and folds the reports in list order. The
/// first counterexample is shrunk by dropping trailing slices of the first
/// axis (trailing vertices in 1D, rows in 2D) while the divergence persists.
EquivalenceReport sweep(const std::vector<GeneratorSpec>& specs,
                        const SweepOptions& options = {});

/// Shrinks a diverging field as sweep does; returns it unchanged when it
/// does not diverge.
ScalarField shrink_counterexample(const ScalarField& field,
                                  const PairingFn& dynamics = pair_by_dynamics);

} // namespace dynper
