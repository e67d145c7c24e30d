#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace dynper {

/// Disjoint sets over [0, n) with union by size and path halving.
class DisjointSet {
public:
    explicit DisjointSet(std::size_t n)
        : parent_(n)
        , size_(n, 1)
    {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Returns the root of the merged set.
    std::size_t unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return a;
        if (size_[a] < size_[b])
            std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return a;
    }

    std::size_t size_of(std::size_t x) { return size_[find(x)]; }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

} // namespace dynper
