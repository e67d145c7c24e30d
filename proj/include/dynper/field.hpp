#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynper {

/// Linear (row-major) index of a grid vertex.
using VertexId = std::size_t;

enum class Connectivity {
    axis, ///< 2n neighbors
    full  ///< 3^n - 1 neighbors
};

/// Bad arguments or violated preconditions (CLI exit status 1).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input data or unreadable files (CLI exit status 2).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Connectivity parse_connectivity(const std::string& name);
const char* to_string(Connectivity c);

/// An immutable n-D scalar field on a regular grid.
///
/// The field carries the strict total order on its vertices. Values are
/// compared first; equal values are resolved by the geodesic distance inside
/// the flat zone to the zone's lower border (or to the zone's smallest index
/// when the zone has no lower border), then by linear index. On fields with
/// pairwise distinct values this is plain value order. The order is computed
/// once at construction and every query afterwards is a read.
class ScalarField {
public:
    ScalarField(std::vector<std::size_t> shape, std::vector<double> values,
                Connectivity connectivity = Connectivity::axis);

    /// Convenience for 1D signals.
    static ScalarField line(std::vector<double> values,
                            Connectivity connectivity = Connectivity::axis);

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t ndim() const { return shape_.size(); }
    std::size_t size() const { return values_.size(); }
    Connectivity connectivity() const { return connectivity_; }
    std::span<const double> values() const { return values_; }
    double value(VertexId v) const { return values_[v]; }

    bool contains(VertexId v) const { return v < values_.size(); }

    /// Neighbors of v sorted by linear index.
    std::vector<VertexId> neighbors(VertexId v) const;
    bool adjacent(VertexId a, VertexId b) const;

    /// Visits every neighbor of v in ascending index order without
    /// allocating.
    template <class Fn>
    void for_each_neighbor(VertexId v, Fn&& fn) const;

    /// Strict total order; throws UsageError when a == b or out of range.
    bool precedes(VertexId a, VertexId b) const;
    /// Unchecked order test used by the algorithms.
    bool before(VertexId a, VertexId b) const { return rank_[a] < rank_[b]; }
    /// Position of v in the sublevel filtration.
    std::size_t rank(VertexId v) const { return rank_[v]; }
    /// Vertices in ascending total order.
    std::span<const VertexId> order() const { return order_; }

    std::vector<std::size_t> unravel(VertexId v) const;
    VertexId ravel(std::span<const std::size_t> coords) const;

    /// Same grid and connectivity, new values.
    ScalarField with_values(std::vector<double> values) const;

    double min_value() const;
    double max_value() const;

    friend bool operator==(const ScalarField& a, const ScalarField& b);

    static constexpr std::size_t max_ndim = 8;

private:
    struct NeighborOffset {
        std::array<std::int8_t, max_ndim> step{};
        std::ptrdiff_t delta = 0;
    };

    void check_vertex(VertexId v) const;
    void build_order();

    std::vector<std::size_t> shape_;
    std::vector<std::size_t> strides_;
    std::vector<double> values_;
    Connectivity connectivity_;
    std::vector<NeighborOffset> full_offsets_;
    std::vector<std::size_t> rank_;
    std::vector<VertexId> order_;
};

/// Vertices whose every neighbor comes later in the total order, sorted by
/// that order.
std::vector<VertexId> local_minima(const ScalarField& field);

/// The sublevel filtration: every vertex, ascending in total order.
std::vector<VertexId> sublevel_filtration(const ScalarField& field);

template <class Fn>
void ScalarField::for_each_neighbor(VertexId v, Fn&& fn) const
{
    const std::size_t n = shape_.size();
    std::array<std::size_t, max_ndim> coord{};
    for (std::size_t d = 0; d < n; ++d)
        coord[d] = (v / strides_[d]) % shape_[d];

    if (connectivity_ == Connectivity::axis) {
        // Negative offsets first with the largest stride, so indices ascend.
        for (std::size_t d = 0; d < n; ++d)
            if (coord[d] > 0)
                fn(v - strides_[d]);
        for (std::size_t d = n; d-- > 0;)
            if (coord[d] + 1 < shape_[d])
                fn(v + strides_[d]);
        return;
    }

    // Offsets are stored in lexicographic order, which is index order for
    // the ones that stay inside the grid.
    for (const NeighborOffset& off : full_offsets_) {
        bool inside = true;
        for (std::size_t d = 0; d < n; ++d) {
            if ((off.step[d] < 0 && coord[d] == 0) ||
                (off.step[d] > 0 && coord[d] + 1 >= shape_[d])) {
                inside = false;
                break;
            }
        }
        if (inside)
            fn(static_cast<VertexId>(static_cast<std::ptrdiff_t>(v) + off.delta));
    }
}

} // namespace dynper
