#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dynper/field.hpp"

namespace dynper {

/// One component merge of the sublevel filtration. The survivor is the elder
/// component (its minimum precedes the dying one).
struct MergeEvent {
    VertexId saddle;
    VertexId survivor_min;
    VertexId dying_min;
    double level;

    friend bool operator==(const MergeEvent&, const MergeEvent&) = default;
};

struct MergeTree {
    /// In filtration order of the saddles; a vertex joining k components
    /// contributes k - 1 consecutive events at the same level.
    std::vector<MergeEvent> events;
    /// Local minima in total order; minima.front() is the global minimum.
    std::vector<VertexId> minima;
    /// For every vertex, the minimum of its component right after the vertex
    /// entered the filtration.
    std::vector<VertexId> owner;
};

/// A local minimum and the vertex that kills it. The global minimum has no
/// saddle and an infinite value.
struct PersistencePair {
    VertexId min_vertex;
    std::optional<VertexId> saddle_vertex;
    double birth;
    double death; ///< +inf for the essential pair
    double value; ///< death - birth, +inf for the essential pair

    bool essential() const { return !saddle_vertex.has_value(); }

    friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
};

MergeTree build_merge_tree(const ScalarField& field);

/// Elder-rule pairing read off the merge tree.
std::vector<PersistencePair> pair_by_persistence(const ScalarField& field);

/// Flooding: lakes grow from each minimum; when lakes meet, every lake but
/// the deepest one ends and its minimum gets dynamics (level - f(min)).
/// Shares no code with pair_by_persistence beyond the filtration order.
std::vector<PersistencePair> pair_by_dynamics(const ScalarField& field);

/// Canonical output order: ascending value, ties by the minimum's position
/// in the total order; the essential pair comes last.
void sort_pairs(const ScalarField& field, std::vector<PersistencePair>& pairs);

/// Pairing of one local maximum of a 1D signal by the closure of its
/// sublevel component: the two sides of the component each have a lowest
/// vertex and the higher one of the two is returned. A maximum on the grid
/// border separates nothing and yields no minimum.
std::optional<VertexId> pair_1d_algorithm1(const ScalarField& field, VertexId xmax);

/// (birth, death) points of the finite pairs. When essential_death is set
/// the essential pair is emitted with that death value (typically the field
/// maximum), otherwise it is omitted.
std::vector<std::pair<double, double>>
persistence_diagram(const std::vector<PersistencePair>& pairs,
                    std::optional<double> essential_death = std::nullopt);

} // namespace dynper
