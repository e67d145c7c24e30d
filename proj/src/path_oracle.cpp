#include "dynper/path_oracle.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <string>

namespace dynper {

namespace {

constexpr double infinity = std::numeric_limits<double>::infinity();

bool is_local_minimum(const ScalarField& field, VertexId v)
{
    bool lowest = true;
    field.for_each_neighbor(v, [&](VertexId u) {
        if (field.before(u, v))
            lowest = false;
    });
    return lowest;
}

} // namespace

DiscretePath::DiscretePath(const ScalarField& field, std::vector<VertexId> vertices)
    : vertices_(std::move(vertices))
{
    if (vertices_.empty())
        throw UsageError("a path needs at least one vertex");
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (!field.contains(vertices_[i]))
            throw UsageError("path vertex " + std::to_string(vertices_[i]) +
                             " is outside the field");
        if (i > 0 && !field.adjacent(vertices_[i - 1], vertices_[i]))
            throw UsageError("path steps from " + std::to_string(vertices_[i - 1]) +
                             " to non-neighbor " + std::to_string(vertices_[i]));
    }
}

double effort(const ScalarField& field, const DiscretePath& path)
{
    const auto& vs = path.vertices();
    auto [lo, hi] = std::minmax_element(vs.begin(), vs.end(), [&](VertexId a, VertexId b) {
        return field.value(a) < field.value(b);
    });
    return field.value(*hi) - field.value(*lo);
}

DynamicsResult dynamics_oracle(const ScalarField& field, VertexId minimum)
{
    if (!field.contains(minimum))
        throw UsageError("vertex " + std::to_string(minimum) + " is outside the field");
    if (!is_local_minimum(field, minimum))
        throw UsageError("vertex " + std::to_string(minimum) + " is not a local minimum");
    if (field.rank(minimum) == 0)
        return {infinity, std::nullopt};

    // Entries are (rank of the path maximum, rank of the vertex); the
    // smallest pair pops first.
    using Entry = std::pair<std::size_t, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
    constexpr std::size_t unseen = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> best(field.size(), unseen);

    const std::size_t start = field.rank(minimum);
    best[minimum] = start;
    frontier.emplace(start, start);
    const auto order = field.order();

    while (!frontier.empty()) {
        const auto [peak, at] = frontier.top();
        frontier.pop();
        const VertexId v = order[at];
        if (best[v] != peak)
            continue;
        if (at < start) {
            const VertexId witness = order[peak];
            return {field.value(witness) - field.value(minimum), witness};
        }
        field.for_each_neighbor(v, [&](VertexId u) {
            const std::size_t through = std::max(peak, field.rank(u));
            if (through < best[u]) {
                best[u] = through;
                frontier.emplace(through, field.rank(u));
            }
        });
    }
    // Unreachable on a connected grid.
    return {infinity, std::nullopt};
}

double exhaustive_dynamics(const ScalarField& field, VertexId start)
{
    if (field.size() > exhaustive_limit)
        throw UsageError("exhaustive dynamics is limited to " +
                         std::to_string(exhaustive_limit) + " vertices");
    if (!field.contains(start))
        throw UsageError("vertex " + std::to_string(start) + " is outside the field");

    std::vector<char> on_path(field.size(), 0);
    double best = infinity;

    // Walks stop at the first preceding vertex: continuing can only raise
    // the path maximum.
    std::function<void(VertexId, double)> walk = [&](VertexId v, double peak) {
        on_path[v] = 1;
        field.for_each_neighbor(v, [&](VertexId u) {
            if (on_path[u])
                return;
            const double through = std::max(peak, field.value(u));
            if (field.before(u, start))
                best = std::min(best, through);
            else
                walk(u, through);
        });
        on_path[v] = 0;
    };
    walk(start, field.value(start));

    return best == infinity ? infinity : best - field.value(start);
}

} // namespace dynper
