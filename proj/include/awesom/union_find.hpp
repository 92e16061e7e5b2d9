#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace awesom {

/// Disjoint-set forest with path halving and union by size.
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return true;
    }

    /// Component id per element, numbered in order of each component's lowest element.
    std::vector<int> components(std::size_t* count = nullptr) {
        const std::size_t n = parent_.size();
        std::vector<int> root_label(n, -1);
        std::vector<int> out(n);
        int next = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t r = find(i);
            if (root_label[r] < 0) root_label[r] = next++;
            out[i] = root_label[r];
        }
        if (count) *count = static_cast<std::size_t>(next);
        return out;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

}  // namespace awesom
