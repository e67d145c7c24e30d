#include "dynper/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "dynper/union_find.hpp"

namespace dynper {

namespace {

constexpr VertexId none = std::numeric_limits<VertexId>::max();

} // namespace

ScalarField filter_dynamics(const ScalarField& field, double threshold)
{
    if (!std::isfinite(threshold) || threshold <= 0.0) {
        std::ostringstream msg;
        msg << "dynamics threshold must be a positive finite number, got " << threshold;
        throw UsageError(msg.str());
    }

    const MergeTree tree = build_merge_tree(field);
    const std::size_t n = field.size();

    // Per dying minimum: the event that ends it.
    std::vector<std::size_t> event_of(n, none);
    for (std::size_t i = 0; i < tree.events.size(); ++i) {
        const MergeEvent& e = tree.events[i];
        const double value = e.level - field.value(e.dying_min);
        if (value == threshold) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "threshold " << threshold << " equals the dynamics of minimum "
                << e.dying_min << "; pick a value between pair values";
            throw UsageError(msg.str());
        }
        event_of[e.dying_min] = i;
    }

    // Raise level of each minimum's lake; NaN when the lake stays. Survivors
    // are older, so walking the minima in total order sees them first.
    std::vector<double> raise(n, std::numeric_limits<double>::quiet_NaN());
    for (VertexId m : tree.minima) {
        const std::size_t i = event_of[m];
        if (i == none)
            continue;
        const MergeEvent& e = tree.events[i];
        if (e.level - field.value(m) >= threshold)
            continue;
        const double above = raise[e.survivor_min];
        raise[m] = std::isnan(above) ? e.level : above;
    }

    std::vector<double> values(field.values().begin(), field.values().end());
    for (VertexId v = 0; v < n; ++v) {
        const double level = raise[tree.owner[v]];
        if (!std::isnan(level) && level > values[v])
            values[v] = level;
    }
    return field.with_values(std::move(values));
}

std::size_t WatershedLabels::region_count() const
{
    return std::set<VertexId>(labels.begin(), labels.end()).size();
}

WatershedLabels watershed(const ScalarField& field)
{
    const std::size_t n = field.size();
    WatershedLabels out;
    out.labels.assign(n, none);

    DisjointSet sets(n);
    std::vector<VertexId> root_min(n, none);
    std::vector<VertexId> flooded;

    for (VertexId v : field.order()) {
        flooded.clear();
        field.for_each_neighbor(v, [&](VertexId u) {
            if (out.labels[u] != none)
                flooded.push_back(u);
        });
        if (flooded.empty()) {
            out.labels[v] = v;
            root_min[v] = v;
            continue;
        }

        std::size_t elder = sets.find(flooded.front());
        for (VertexId u : flooded) {
            const std::size_t r = sets.find(u);
            if (field.before(root_min[r], root_min[elder]))
                elder = r;
        }
        // Neighbors arrive in ascending index order.
        for (VertexId u : flooded) {
            if (sets.find(u) == elder) {
                out.labels[v] = out.labels[u];
                break;
            }
        }

        const VertexId deepest = root_min[elder];
        std::size_t root = sets.unite(v, elder);
        for (VertexId u : flooded)
            root = sets.unite(root, u);
        root_min[root] = deepest;
    }
    return out;
}

std::size_t GranulometricCurve::count_at(double t) const
{
    const auto below = std::lower_bound(breakpoints.begin(), breakpoints.end(), t);
    return counts[static_cast<std::size_t>(below - breakpoints.begin())];
}

GranulometricCurve granulometric_curve(const std::vector<PersistencePair>& pairs)
{
    std::vector<double> finite;
    for (const PersistencePair& p : pairs)
        if (!p.essential())
            finite.push_back(p.value);
    std::sort(finite.begin(), finite.end());

    GranulometricCurve curve;
    curve.counts.push_back(pairs.size());
    for (std::size_t i = 0; i < finite.size();) {
        std::size_t j = i;
        while (j < finite.size() && finite[j] == finite[i])
            ++j;
        curve.breakpoints.push_back(finite[i]);
        curve.counts.push_back(pairs.size() - j);
        i = j;
    }
    return curve;
}

std::vector<std::pair<VertexId, VertexId>> watershed_boundary(const ScalarField& field,
                                                              const WatershedLabels& labels)
{
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId v = 0; v < field.size(); ++v)
        field.for_each_neighbor(v, [&](VertexId u) {
            if (u > v && labels.labels[u] != labels.labels[v])
                edges.emplace_back(v, u);
        });
    return edges;
}

double SaliencyMap::at(VertexId u, VertexId v) const
{
    if (u > v)
        std::swap(u, v);
    const auto it = std::lower_bound(edges.begin(), edges.end(), std::pair{u, v},
                                     [](const SaliencyEdge& e, const std::pair<VertexId, VertexId>& k) {
                                         return std::pair{e.u, e.v} < k;
                                     });
    if (it != edges.end() && it->u == u && it->v == v)
        return it->value;
    return 0.0;
}

// Basins form a tree: the basin of a dying minimum hangs below the basin that
// holds its death saddle. Cancelling a minimum merges its basin into that
// parent, so two basins are separated exactly while some minimum on the tree
// path between them (excluding the common ancestor) survives. The saliency
// of a boundary edge is therefore the largest dynamics on that path.
SaliencyMap saliency(const ScalarField& field)
{
    const WatershedLabels ws = watershed(field);
    const MergeTree tree = build_merge_tree(field);
    const std::size_t m = tree.minima.size();

    std::vector<std::size_t> slot(field.size(), none);
    for (std::size_t i = 0; i < m; ++i)
        slot[tree.minima[i]] = i;

    std::vector<std::size_t> parent(m, none);
    std::vector<double> weight(m, 0.0);
    for (const MergeEvent& e : tree.events) {
        const std::size_t c = slot[e.dying_min];
        parent[c] = slot[ws.labels[e.saddle]];
        weight[c] = e.level - field.value(e.dying_min);
    }

    std::vector<std::size_t> depth(m, none);
    depth[0] = 0;
    std::vector<std::size_t> chain;
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t x = i;
        while (depth[x] == none) {
            chain.push_back(x);
            x = parent[x];
        }
        while (!chain.empty()) {
            depth[chain.back()] = depth[parent[chain.back()]] + 1;
            chain.pop_back();
        }
    }

    std::size_t levels = 1;
    while ((std::size_t{1} << levels) < m)
        ++levels;
    std::vector<std::vector<std::size_t>> up(levels, std::vector<std::size_t>(m, 0));
    std::vector<std::vector<double>> peak(levels, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        up[0][i] = parent[i] == none ? i : parent[i];
        peak[0][i] = weight[i];
    }
    for (std::size_t k = 1; k < levels; ++k)
        for (std::size_t i = 0; i < m; ++i) {
            up[k][i] = up[k - 1][up[k - 1][i]];
            peak[k][i] = std::max(peak[k - 1][i], peak[k - 1][up[k - 1][i]]);
        }

    auto path_max = [&](std::size_t a, std::size_t b) {
        double best = 0.0;
        if (depth[a] < depth[b])
            std::swap(a, b);
        for (std::size_t k = levels; k-- > 0;)
            if (depth[a] - depth[b] >= (std::size_t{1} << k)) {
                best = std::max(best, peak[k][a]);
                a = up[k][a];
            }
        if (a == b)
            return best;
        for (std::size_t k = levels; k-- > 0;)
            if (up[k][a] != up[k][b]) {
                best = std::max({best, peak[k][a], peak[k][b]});
                a = up[k][a];
                b = up[k][b];
            }
        return std::max({best, weight[a], weight[b]});
    };

    SaliencyMap map;
    for (const auto& [u, v] : watershed_boundary(field, ws))
        map.edges.push_back({u, v, path_max(slot[ws.labels[u]], slot[ws.labels[v]])});
    return map;
}

ScalarField saliency_grid(const ScalarField& field, const SaliencyMap& map)
{
    const std::size_t n = field.ndim();
    std::vector<std::size_t> shape(n);
    for (std::size_t d = 0; d < n; ++d)
        shape[d] = 2 * field.shape()[d] - 1;
    std::vector<std::size_t> strides(n, 1);
    for (std::size_t d = n - 1; d > 0; --d)
        strides[d - 1] = strides[d] * shape[d];
    std::vector<double> values(strides[0] * shape[0], 0.0);

    for (const SaliencyEdge& e : map.edges) {
        const auto cu = field.unravel(e.u);
        const auto cv = field.unravel(e.v);
        std::size_t at = 0;
        for (std::size_t d = 0; d < n; ++d)
            at += (cu[d] + cv[d]) * strides[d];
        values[at] = std::max(values[at], e.value);
    }
    return ScalarField(std::move(shape), std::move(values), Connectivity::axis);
}

SegmentResult segment_pipeline(const ScalarField& field, double threshold)
{
    ScalarField filtered = filter_dynamics(field, threshold);
    WatershedLabels labels = watershed(filtered);
    std::vector<PersistencePair> pairs = pair_by_persistence(filtered);
    GranulometricCurve curve = granulometric_curve(pairs);
    return {std::move(filtered), std::move(labels), std::move(pairs), std::move(curve)};
}

} // namespace dynper
