#pragma once

#include <utility>
#include <vector>

#include "dynper/field.hpp"
#include "dynper/pairing.hpp"

namespace dynper {

/// Raises every sublevel lake whose minimum has dynamics below `threshold`
/// up to the level of the saddle that ends it; nested cancellations compose,
/// so each raised vertex ends at the last cancelled saddle above it.
/// Throws UsageError for non-positive or non-finite thresholds and for a
/// threshold equal to a finite pair value.
ScalarField filter_dynamics(const ScalarField& field, double threshold);

/// Per-vertex basin labels; a label is the VertexId of the basin's minimum.
struct WatershedLabels {
    std::vector<VertexId> labels;

    std::size_t region_count() const;
};

/// Flooding in filtration order. A minimum opens its own basin. Any other
/// vertex looks at its already flooded neighbors, keeps those in the
/// component with the deepest minimum, and takes the label of the one with
/// the smallest index.
///
/// Choosing inside the elder component by index (not by height) keeps the
/// partition of a filtered field a coarsening of the unfiltered one: raising
/// lakes changes neither the set of flooded neighbors of an unraised vertex
/// nor which component is elder.
WatershedLabels watershed(const ScalarField& field);

/// Number of minima with dynamics >= t as a step function of t.
/// counts[0] applies for t <= breakpoints[0], counts[i] for
/// breakpoints[i-1] < t <= breakpoints[i], and counts.back() above the last
/// breakpoint.
struct GranulometricCurve {
    std::vector<double> breakpoints;
    std::vector<std::size_t> counts;

    std::size_t count_at(double t) const;
};

GranulometricCurve granulometric_curve(const std::vector<PersistencePair>& pairs);

struct SaliencyEdge {
    VertexId u; ///< u < v
    VertexId v;
    double value;

    friend bool operator==(const SaliencyEdge&, const SaliencyEdge&) = default;
};

/// Extinction value of every watershed boundary edge: the largest threshold
/// t for which filter_dynamics(field, t) still separates the two sides.
/// Edges inside a basin have saliency 0 and are not listed. Sorted by (u, v).
struct SaliencyMap {
    std::vector<SaliencyEdge> edges;

    double at(VertexId u, VertexId v) const;
};

SaliencyMap saliency(const ScalarField& field);

/// Boundary edges (u < v with different labels), sorted.
std::vector<std::pair<VertexId, VertexId>> watershed_boundary(const ScalarField& field,
                                                              const WatershedLabels& labels);

/// Saliency on the doubled-resolution grid (extent 2e - 1 per axis). Vertex
/// positions hold 0, edge midpoints hold the edge saliency; diagonal edges
/// that share a midpoint keep the larger value.
ScalarField saliency_grid(const ScalarField& field, const SaliencyMap& map);

struct SegmentResult {
    ScalarField filtered;
    WatershedLabels labels;
    std::vector<PersistencePair> pairs; ///< pairs of the filtered field
    GranulometricCurve curve;           ///< curve of the filtered field
};

SegmentResult segment_pipeline(const ScalarField& field, double threshold);

} // namespace dynper
