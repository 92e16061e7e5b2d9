#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "awesom/error.hpp"

namespace awesom {

/// Fraction of points whose cluster's majority truth class equals their own.
/// Points labelled -1 count as misclassified.
inline double purity(std::span<const int> labels, std::span<const int> truth) {
    if (labels.size() != truth.size()) throw dimension_error("purity: label and truth lengths differ");
    if (labels.empty()) return 0.0;
    std::map<std::pair<int, int>, std::size_t> table;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] >= 0) ++table[{labels[i], truth[i]}];
    std::map<int, std::size_t> best;
    for (const auto& [key, count] : table) best[key.first] = std::max(best[key.first], count);
    std::size_t hits = 0;
    for (const auto& [cluster, count] : best) hits += count;
    return static_cast<double>(hits) / static_cast<double>(labels.size());
}

/// True when a and b are the same partition up to a bijective relabeling.
inline bool same_partition(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) return false;
    std::map<int, int> fwd, back;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto [f, fnew] = fwd.emplace(a[i], b[i]);
        const auto [r, rnew] = back.emplace(b[i], a[i]);
        if (f->second != b[i] || r->second != a[i]) return false;
    }
    return true;
}

}  // namespace awesom
