#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "awesom/error.hpp"
#include "awesom/parallel.hpp"
#include "awesom/som.hpp"
#include "awesom/union_find.hpp"

namespace awesom {

/// Per-node average feature-space distance to lattice neighbors.
struct UMatrix {
    std::size_t x = 0;
    std::size_t y = 0;
    std::vector<double> values;

    double operator()(std::size_t row, std::size_t col) const { return values[row * x + col]; }
    std::size_t size() const noexcept { return values.size(); }
};

/// Per-node cluster ids in [0, n_clusters).
struct NodeLabels {
    std::vector<int> labels;
    int n_clusters = 0;
};

/// Per-point cluster ids in [0, n_clusters).
struct ClusterMap {
    std::vector<int> labels;
    int n_clusters = 0;

    std::size_t size() const noexcept { return labels.size(); }
};

inline constexpr double kDefaultBandwidth = 1.5;
inline constexpr double kDefaultMergeRange = 0.25;

namespace detail {
inline constexpr int kNeighborDr[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
inline constexpr int kNeighborDc[8] = {-1, 0, 1, -1, 1, -1, 0, 1};

/// Visits the in-bounds 8-neighbors of (row, col) in increasing linear index order.
template <class Fn>
void for_each_neighbor(std::size_t x, std::size_t y, std::size_t row, std::size_t col, Fn&& fn) {
    for (int k = 0; k < 8; ++k) {
        const auto r = static_cast<std::int64_t>(row) + kNeighborDr[k];
        const auto c = static_cast<std::int64_t>(col) + kNeighborDc[k];
        if (r < 0 || c < 0 || r >= static_cast<std::int64_t>(y) || c >= static_cast<std::int64_t>(x))
            continue;
        fn(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    }
}
}  // namespace detail

/// Raw U-matrix, optionally smoothed with a truncated Gaussian of the given
/// bandwidth (lattice units). The kernel covers cells within ceil(3 * bandwidth)
/// of the center and is renormalized over the cells that exist.
inline UMatrix compute_umatrix(const Lattice& lattice, double bandwidth = kDefaultBandwidth) {
    if (!(bandwidth >= 0.0) || !std::isfinite(bandwidth)) throw config_error("bandwidth must be >= 0");
    const std::size_t x = lattice.x();
    const std::size_t y = lattice.y();
    UMatrix raw{x, y, std::vector<double>(x * y, 0.0)};
    parallel_for(y, 1, [&](std::size_t rb, std::size_t re) {
        for (std::size_t row = rb; row < re; ++row)
            for (std::size_t col = 0; col < x; ++col) {
                const auto w = lattice.weight(lattice.at(row, col));
                double sum = 0.0;
                int count = 0;
                detail::for_each_neighbor(x, y, row, col, [&](std::size_t r, std::size_t c) {
                    sum += std::sqrt(squared_distance(w, lattice.weight(lattice.at(r, c))));
                    ++count;
                });
                raw.values[row * x + col] = count ? sum / count : 0.0;
            }
    });
    if (bandwidth == 0.0) return raw;

    const auto radius = static_cast<std::int64_t>(std::ceil(3.0 * bandwidth));
    const double inv2s2 = 1.0 / (2.0 * bandwidth * bandwidth);
    UMatrix out{x, y, std::vector<double>(x * y, 0.0)};
    parallel_for(y, 1, [&](std::size_t rb, std::size_t re) {
        for (std::size_t row = rb; row < re; ++row)
            for (std::size_t col = 0; col < x; ++col) {
                double acc = 0.0;
                double norm = 0.0;
                for (std::int64_t dr = -radius; dr <= radius; ++dr) {
                    const auto r = static_cast<std::int64_t>(row) + dr;
                    if (r < 0 || r >= static_cast<std::int64_t>(y)) continue;
                    for (std::int64_t dc = -radius; dc <= radius; ++dc) {
                        const auto c = static_cast<std::int64_t>(col) + dc;
                        if (c < 0 || c >= static_cast<std::int64_t>(x)) continue;
                        const std::int64_t d2 = dr * dr + dc * dc;
                        if (d2 > radius * radius) continue;
                        const double k = std::exp(-static_cast<double>(d2) * inv2s2);
                        acc += k * raw.values[static_cast<std::size_t>(r) * x + static_cast<std::size_t>(c)];
                        norm += k;
                    }
                }
                out.values[row * x + col] = acc / norm;
            }
    });
    return out;
}

/// Steepest descent on the U-matrix from every node. A walk moves to the
/// neighbor with the strictly smallest value (lowest index on ties) and stops
/// when no neighbor is strictly smaller than the current node.
inline std::vector<NodeIndex> find_centroids(const UMatrix& umat) {
    const std::size_t x = umat.x;
    const std::size_t y = umat.y;
    if (umat.values.size() != x * y) throw dimension_error("U-matrix size does not match its dims");

    // one descent step per node, then follow the chains
    std::vector<std::uint32_t> next(x * y);
    for (std::size_t row = 0; row < y; ++row)
        for (std::size_t col = 0; col < x; ++col) {
            const std::size_t m = row * x + col;
            double best = umat.values[m];
            std::size_t best_idx = m;
            detail::for_each_neighbor(x, y, row, col, [&](std::size_t r, std::size_t c) {
                const std::size_t k = r * x + c;
                if (umat.values[k] < best) {
                    best = umat.values[k];
                    best_idx = k;
                }
            });
            next[m] = static_cast<std::uint32_t>(best_idx);
        }

    std::vector<NodeIndex> out(x * y);
    parallel_for(x * y, 256, [&](std::size_t b, std::size_t e) {
        for (std::size_t m = b; m < e; ++m) {
            std::uint32_t cur = static_cast<std::uint32_t>(m);
            while (next[cur] != cur) cur = next[cur];
            out[m] = {cur};
        }
    });
    return out;
}

/// Lattice cells on the Bresenham segment from a to b, endpoints included.
/// The minor-axis offset after k major steps is round-half-up(k * |d_minor| / d_major).
inline std::vector<std::pair<std::int64_t, std::int64_t>> bresenham_segment(std::int64_t r0, std::int64_t c0,
                                                                            std::int64_t r1, std::int64_t c1) {
    const std::int64_t dr = r1 - r0;
    const std::int64_t dc = c1 - c0;
    const std::int64_t sr = dr < 0 ? -1 : 1;
    const std::int64_t sc = dc < 0 ? -1 : 1;
    const std::int64_t ar = dr < 0 ? -dr : dr;
    const std::int64_t ac = dc < 0 ? -dc : dc;
    const bool rows_major = ar >= ac;
    const std::int64_t major = rows_major ? ar : ac;
    const std::int64_t minor = rows_major ? ac : ar;

    std::vector<std::pair<std::int64_t, std::int64_t>> cells;
    cells.reserve(static_cast<std::size_t>(major + 1));
    std::int64_t r = r0, c = c0;
    std::int64_t err = major;  // 2 * (accumulated numerator) relative to the current offset
    cells.emplace_back(r, c);
    for (std::int64_t k = 1; k <= major; ++k) {
        err += 2 * minor;
        bool step_minor = false;
        if (err >= 2 * major) {
            err -= 2 * major;
            step_minor = true;
        }
        if (rows_major) {
            r += sr;
            if (step_minor) c += sc;
        } else {
            c += sc;
            if (step_minor) r += sr;
        }
        cells.emplace_back(r, c);
    }
    return cells;
}

/// Merge threshold tau = min + merge_range * (max - min) of the U-matrix.
inline double merge_threshold(const UMatrix& umat, double merge_range) {
    const auto [lo, hi] = std::minmax_element(umat.values.begin(), umat.values.end());
    return *lo + merge_range * (*hi - *lo);
}

/// Groups centroids whose connecting Bresenham segment never rises above the
/// merge threshold, and labels every node by its centroid's group.
inline NodeLabels merge_centroids(const UMatrix& umat, std::span<const NodeIndex> centroids,
                                  double merge_range = kDefaultMergeRange) {
    if (!(merge_range >= 0.0 && merge_range <= 1.0)) throw config_error("merge_range must lie in [0, 1]");
    if (centroids.size() != umat.values.size())
        throw dimension_error("centroid assignment size does not match the U-matrix");
    const std::size_t x = umat.x;
    if (umat.values.empty()) return {};

    std::vector<std::uint32_t> unique;
    unique.reserve(16);
    for (const NodeIndex c : centroids) {
        if (c.value >= umat.values.size()) throw dimension_error("centroid index out of range");
        unique.push_back(c.value);
    }
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

    const double tau = merge_threshold(umat, merge_range);
    UnionFind uf(unique.size());
    for (std::size_t i = 0; i < unique.size(); ++i)
        for (std::size_t j = i + 1; j < unique.size(); ++j) {
            const auto a = static_cast<std::int64_t>(unique[i]);
            const auto b = static_cast<std::int64_t>(unique[j]);
            const auto xs = static_cast<std::int64_t>(x);
            bool below = true;
            for (const auto& [r, c] : bresenham_segment(a / xs, a % xs, b / xs, b % xs))
                if (umat.values[static_cast<std::size_t>(r * xs + c)] > tau) {
                    below = false;
                    break;
                }
            if (below) uf.unite(i, j);
        }

    std::size_t count = 0;
    const std::vector<int> group = uf.components(&count);
    NodeLabels out;
    out.n_clusters = static_cast<int>(count);
    out.labels.resize(centroids.size());
    for (std::size_t m = 0; m < centroids.size(); ++m) {
        const auto pos = std::lower_bound(unique.begin(), unique.end(), centroids[m].value) - unique.begin();
        out.labels[m] = group[static_cast<std::size_t>(pos)];
    }
    return out;
}

/// Relabels to the ids actually present, preserving their order.
inline ClusterMap compact_labels(std::vector<int> labels) {
    int max_label = -1;
    for (int l : labels) {
        if (l < 0) throw config_error("negative cluster label");
        max_label = std::max(max_label, l);
    }
    std::vector<int> remap(static_cast<std::size_t>(max_label + 1), -1);
    for (int l : labels) remap[static_cast<std::size_t>(l)] = 0;
    int next = 0;
    for (int& r : remap)
        if (r == 0) r = next++;
    for (int& l : labels) l = remap[static_cast<std::size_t>(l)];
    return {std::move(labels), next};
}

/// Point labels from node labels via each point's BMU.
inline ClusterMap label_data(const NodeLabels& node_labels, std::span<const NodeIndex> bmus) {
    std::vector<int> labels(bmus.size());
    const std::size_t nodes = node_labels.labels.size();
    for (const NodeIndex b : bmus)
        if (b.value >= nodes)
            throw dimension_error("BMU index " + std::to_string(b.value) + " outside lattice of " +
                                  std::to_string(nodes) + " nodes");
    parallel_for(bmus.size(), kRowGrain, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) labels[i] = node_labels.labels[bmus[i].value];
    });
    return compact_labels(std::move(labels));
}

}  // namespace awesom
