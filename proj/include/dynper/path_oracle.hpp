#pragma once

#include <optional>
#include <vector>

#include "dynper/field.hpp"

namespace dynper {

/// A nonempty grid walk; consecutive vertices are neighbors.
class DiscretePath {
public:
    DiscretePath(const ScalarField& field, std::vector<VertexId> vertices);

    const std::vector<VertexId>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }

private:
    std::vector<VertexId> vertices_;
};

/// max f - min f along the path.
double effort(const ScalarField& field, const DiscretePath& path);

struct DynamicsResult {
    double value;                    ///< +inf for the global minimum
    std::optional<VertexId> witness; ///< highest vertex of an optimal path
};

/// Minimax (bottleneck) search from a local minimum to the nearest vertex
/// that precedes it, expanding vertices by their path maximum in total order.
/// The witness is the vertex that realizes that maximum.
DynamicsResult dynamics_oracle(const ScalarField& field, VertexId minimum);

/// Enumerates every simple walk from `start` and keeps the smallest path
/// maximum over walks that reach a preceding vertex. Reference for tiny
/// fields only.
double exhaustive_dynamics(const ScalarField& field, VertexId start);

inline constexpr std::size_t exhaustive_limit = 12;

} // namespace dynper
