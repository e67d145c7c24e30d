#include "dynper/field.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

namespace dynper {

Connectivity parse_connectivity(const std::string& name)
{
    if (name == "axis")
        return Connectivity::axis;
    if (name == "full")
        return Connectivity::full;
    throw UsageError("unknown connectivity '" + name + "' (expected axis or full)");
}

const char* to_string(Connectivity c)
{
    return c == Connectivity::axis ? "axis" : "full";
}

ScalarField::ScalarField(std::vector<std::size_t> shape, std::vector<double> values,
                         Connectivity connectivity)
    : shape_(std::move(shape))
    , values_(std::move(values))
    , connectivity_(connectivity)
{
    if (shape_.empty())
        throw UsageError("field shape needs at least one axis");
    if (shape_.size() > max_ndim)
        throw UsageError("fields are limited to " + std::to_string(max_ndim) + " axes");
    std::size_t count = 1;
    for (std::size_t e : shape_) {
        if (e == 0)
            throw UsageError("field extents must be positive");
        if (count > std::numeric_limits<std::size_t>::max() / e)
            throw UsageError("field shape overflows the index range");
        count *= e;
    }
    if (count != values_.size()) {
        std::ostringstream msg;
        msg << "field shape holds " << count << " values but " << values_.size()
            << " were given";
        throw UsageError(msg.str());
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            std::ostringstream msg;
            msg << "field value at index " << i << " is not finite";
            throw UsageError(msg.str());
        }
    }

    strides_.assign(shape_.size(), 1);
    for (std::size_t d = shape_.size() - 1; d > 0; --d)
        strides_[d - 1] = strides_[d] * shape_[d];

    if (connectivity_ == Connectivity::full) {
        const std::size_t n = shape_.size();
        NeighborOffset off;
        for (std::size_t d = 0; d < n; ++d)
            off.step[d] = -1;
        for (;;) {
            off.delta = 0;
            bool zero = true;
            for (std::size_t d = 0; d < n; ++d) {
                off.delta += off.step[d] * static_cast<std::ptrdiff_t>(strides_[d]);
                zero = zero && off.step[d] == 0;
            }
            if (!zero)
                full_offsets_.push_back(off);
            std::size_t d = n;
            while (d > 0 && off.step[d - 1] == 1)
                off.step[--d] = -1;
            if (d == 0)
                break;
            ++off.step[d - 1];
        }
    }

    build_order();
}

ScalarField ScalarField::line(std::vector<double> values, Connectivity connectivity)
{
    const std::size_t n = values.size();
    return ScalarField({n}, std::move(values), connectivity);
}

// Lower completion of flat zones. Each maximal connected set of equal values
// is ordered by breadth-first distance from the vertices that touch a
// strictly lower neighbor; a zone without such vertices is a regional
// minimum and is ordered by distance from its smallest index. Every vertex
// except one per regional minimum then has a preceding neighbor.
void ScalarField::build_order()
{
    const std::size_t n = values_.size();
    constexpr std::size_t unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> distance(n, unset);

    bool has_ties = false;
    for (VertexId v = 0; v < n && !has_ties; ++v)
        for_each_neighbor(v, [&](VertexId u) {
            if (values_[u] == values_[v])
                has_ties = true;
        });

    if (has_ties) {
        std::vector<char> seen(n, 0);
        std::vector<VertexId> zone;
        std::vector<VertexId> stack;
        std::deque<VertexId> queue;
        for (VertexId start = 0; start < n; ++start) {
            if (seen[start])
                continue;
            zone.clear();
            stack.push_back(start);
            seen[start] = 1;
            while (!stack.empty()) {
                const VertexId v = stack.back();
                stack.pop_back();
                zone.push_back(v);
                for_each_neighbor(v, [&](VertexId u) {
                    if (!seen[u] && values_[u] == values_[v]) {
                        seen[u] = 1;
                        stack.push_back(u);
                    }
                });
            }
            std::sort(zone.begin(), zone.end());
            for (VertexId v : zone) {
                bool exit = false;
                for_each_neighbor(v, [&](VertexId u) {
                    if (values_[u] < values_[v])
                        exit = true;
                });
                if (exit) {
                    distance[v] = 0;
                    queue.push_back(v);
                }
            }
            if (queue.empty()) {
                distance[zone.front()] = 0;
                queue.push_back(zone.front());
            }
            while (!queue.empty()) {
                const VertexId v = queue.front();
                queue.pop_front();
                for_each_neighbor(v, [&](VertexId u) {
                    if (distance[u] == unset && values_[u] == values_[v]) {
                        distance[u] = distance[v] + 1;
                        queue.push_back(u);
                    }
                });
            }
        }
    } else {
        std::fill(distance.begin(), distance.end(), 0);
    }

    order_.resize(n);
    std::iota(order_.begin(), order_.end(), VertexId{0});
    std::sort(order_.begin(), order_.end(), [&](VertexId a, VertexId b) {
        if (values_[a] != values_[b])
            return values_[a] < values_[b];
        if (distance[a] != distance[b])
            return distance[a] < distance[b];
        return a < b;
    });
    rank_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        rank_[order_[i]] = i;
}

void ScalarField::check_vertex(VertexId v) const
{
    if (!contains(v)) {
        std::ostringstream msg;
        msg << "vertex " << v << " is outside a field of " << size() << " vertices";
        throw UsageError(msg.str());
    }
}

std::vector<VertexId> ScalarField::neighbors(VertexId v) const
{
    check_vertex(v);
    std::vector<VertexId> out;
    for_each_neighbor(v, [&](VertexId u) { out.push_back(u); });
    return out;
}

bool ScalarField::adjacent(VertexId a, VertexId b) const
{
    check_vertex(a);
    check_vertex(b);
    bool found = false;
    for_each_neighbor(a, [&](VertexId u) {
        if (u == b)
            found = true;
    });
    return found;
}

bool ScalarField::precedes(VertexId a, VertexId b) const
{
    check_vertex(a);
    check_vertex(b);
    if (a == b)
        throw UsageError("the vertex order is strict: a vertex does not precede itself");
    return before(a, b);
}

std::vector<std::size_t> ScalarField::unravel(VertexId v) const
{
    check_vertex(v);
    std::vector<std::size_t> coords(shape_.size());
    for (std::size_t d = 0; d < shape_.size(); ++d)
        coords[d] = (v / strides_[d]) % shape_[d];
    return coords;
}

VertexId ScalarField::ravel(std::span<const std::size_t> coords) const
{
    if (coords.size() != shape_.size())
        throw UsageError("coordinate arity does not match the field dimension");
    VertexId v = 0;
    for (std::size_t d = 0; d < shape_.size(); ++d) {
        if (coords[d] >= shape_[d])
            throw UsageError("coordinate outside the field");
        v += coords[d] * strides_[d];
    }
    return v;
}

ScalarField ScalarField::with_values(std::vector<double> values) const
{
    return ScalarField(shape_, std::move(values), connectivity_);
}

double ScalarField::min_value() const
{
    return *std::min_element(values_.begin(), values_.end());
}

double ScalarField::max_value() const
{
    return *std::max_element(values_.begin(), values_.end());
}

bool operator==(const ScalarField& a, const ScalarField& b)
{
    return a.shape_ == b.shape_ && a.connectivity_ == b.connectivity_ &&
           a.values_ == b.values_;
}

std::vector<VertexId> local_minima(const ScalarField& field)
{
    std::vector<VertexId> minima;
    for (VertexId v : field.order()) {
        bool lowest = true;
        field.for_each_neighbor(v, [&](VertexId u) {
            if (field.before(u, v))
                lowest = false;
        });
        if (lowest)
            minima.push_back(v);
    }
    return minima;
}

std::vector<VertexId> sublevel_filtration(const ScalarField& field)
{
    return {field.order().begin(), field.order().end()};
}

} // namespace dynper
