#include "dynper/pairing.hpp"

#include <algorithm>
#include <limits>

#include "dynper/union_find.hpp"

namespace dynper {

namespace {

constexpr double infinity = std::numeric_limits<double>::infinity();

PersistencePair essential_pair(const ScalarField& field, VertexId global_min)
{
    return {global_min, std::nullopt, field.value(global_min), infinity, infinity};
}

} // namespace

void sort_pairs(const ScalarField& field, std::vector<PersistencePair>& pairs)
{
    std::sort(pairs.begin(), pairs.end(),
              [&](const PersistencePair& a, const PersistencePair& b) {
                  if (a.essential() != b.essential())
                      return b.essential();
                  if (a.value != b.value)
                      return a.value < b.value;
                  return field.before(a.min_vertex, b.min_vertex);
              });
}

MergeTree build_merge_tree(const ScalarField& field)
{
    const std::size_t n = field.size();
    constexpr VertexId none = std::numeric_limits<VertexId>::max();

    MergeTree tree;
    tree.owner.assign(n, none);

    DisjointSet sets(n);
    std::vector<VertexId> root_min(n, none); // valid at set roots only
    std::vector<char> inserted(n, 0);
    std::vector<std::size_t> roots;

    for (VertexId v : field.order()) {
        roots.clear();
        field.for_each_neighbor(v, [&](VertexId u) {
            if (!inserted[u])
                return;
            const std::size_t r = sets.find(u);
            if (std::find(roots.begin(), roots.end(), r) == roots.end())
                roots.push_back(r);
        });
        inserted[v] = 1;

        if (roots.empty()) {
            root_min[v] = v;
            tree.minima.push_back(v);
            tree.owner[v] = v;
            continue;
        }

        // Elder first, then the dying components by descending minimum.
        std::sort(roots.begin(), roots.end(), [&](std::size_t a, std::size_t b) {
            return field.before(root_min[a], root_min[b]);
        });
        const VertexId elder = root_min[roots.front()];
        for (std::size_t i = roots.size(); i-- > 1;)
            tree.events.push_back({v, elder, root_min[roots[i]], field.value(v)});

        std::size_t root = sets.unite(v, roots.front());
        for (std::size_t i = 1; i < roots.size(); ++i)
            root = sets.unite(root, roots[i]);
        root_min[root] = elder;
        tree.owner[v] = elder;
    }
    return tree;
}

std::vector<PersistencePair> pair_by_persistence(const ScalarField& field)
{
    const MergeTree tree = build_merge_tree(field);
    std::vector<PersistencePair> pairs;
    pairs.reserve(tree.minima.size());
    for (const MergeEvent& e : tree.events) {
        const double birth = field.value(e.dying_min);
        pairs.push_back({e.dying_min, e.saddle, birth, e.level, e.level - birth});
    }
    pairs.push_back(essential_pair(field, tree.minima.front()));
    sort_pairs(field, pairs);
    return pairs;
}

std::vector<PersistencePair> pair_by_dynamics(const ScalarField& field)
{
    // Each lake keeps an explicit member list; when lakes meet, the members
    // of the smaller lists are relabeled into the largest one.
    struct Lake {
        VertexId bottom;
        std::vector<VertexId> members;
    };
    constexpr std::size_t dry = std::numeric_limits<std::size_t>::max();

    const std::size_t n = field.size();
    std::vector<std::size_t> lake_of(n, dry);
    std::vector<Lake> lakes;
    std::vector<PersistencePair> pairs;
    std::vector<std::size_t> touching;
    VertexId deepest_bottom = field.order().front();

    for (VertexId v : field.order()) {
        touching.clear();
        field.for_each_neighbor(v, [&](VertexId u) {
            const std::size_t id = lake_of[u];
            if (id != dry && std::find(touching.begin(), touching.end(), id) == touching.end())
                touching.push_back(id);
        });

        if (touching.empty()) {
            lake_of[v] = lakes.size();
            lakes.push_back({v, {v}});
            continue;
        }

        std::size_t deepest = touching.front();
        for (std::size_t id : touching)
            if (field.before(lakes[id].bottom, lakes[deepest].bottom))
                deepest = id;

        const double level = field.value(v);
        std::size_t keeper = touching.front();
        for (std::size_t id : touching) {
            if (lakes[id].members.size() > lakes[keeper].members.size())
                keeper = id;
            if (id == deepest)
                continue;
            const VertexId bottom = lakes[id].bottom;
            const double depth = field.value(bottom);
            pairs.push_back({bottom, v, depth, level, level - depth});
        }

        const VertexId bottom = lakes[deepest].bottom;
        for (std::size_t id : touching) {
            if (id == keeper)
                continue;
            for (VertexId w : lakes[id].members)
                lake_of[w] = keeper;
            auto& target = lakes[keeper].members;
            target.insert(target.end(), lakes[id].members.begin(), lakes[id].members.end());
            lakes[id].members.clear();
            lakes[id].members.shrink_to_fit();
        }
        lakes[keeper].bottom = bottom;
        lakes[keeper].members.push_back(v);
        lake_of[v] = keeper;
    }

    pairs.push_back(essential_pair(field, deepest_bottom));
    sort_pairs(field, pairs);
    return pairs;
}

std::optional<VertexId> pair_1d_algorithm1(const ScalarField& field, VertexId xmax)
{
    if (field.ndim() != 1)
        throw UsageError("the 1D maximum pairing needs a 1D field");
    if (!field.contains(xmax))
        throw UsageError("vertex " + std::to_string(xmax) + " is outside the field");

    const std::size_t n = field.size();
    bool maximum = true;
    field.for_each_neighbor(xmax, [&](VertexId u) {
        if (!field.before(u, xmax))
            maximum = false;
    });
    if (!maximum)
        throw UsageError("vertex " + std::to_string(xmax) + " is not a local maximum");

    // A border vertex (or a single-vertex field) has an empty side.
    if (xmax == 0 || xmax + 1 >= n)
        return std::nullopt;

    // Closed component of {u : u precedes or equals xmax} around xmax; the
    // closure adds the first exceeding vertex on each side when it exists.
    VertexId lo = xmax;
    while (lo > 0 && field.before(lo - 1, xmax))
        --lo;
    if (lo > 0)
        --lo;
    VertexId hi = xmax;
    while (hi + 1 < n && field.before(hi + 1, xmax))
        ++hi;
    if (hi + 1 < n)
        ++hi;

    auto representative = [&](VertexId first, VertexId last) {
        VertexId best = first;
        for (VertexId u = first; u <= last; ++u)
            if (field.before(u, best))
                best = u;
        return best;
    };
    const VertexId left = representative(lo, xmax);
    const VertexId right = representative(xmax, hi);
    return field.before(left, right) ? right : left;
}

std::vector<std::pair<double, double>>
persistence_diagram(const std::vector<PersistencePair>& pairs,
                    std::optional<double> essential_death)
{
    std::vector<std::pair<double, double>> points;
    for (const PersistencePair& p : pairs) {
        if (!p.essential())
            points.emplace_back(p.birth, p.death);
        else if (essential_death)
            points.emplace_back(p.birth, *essential_death);
    }
    return points;
}

} // namespace dynper
