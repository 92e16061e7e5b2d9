#pragma once

// Brute-force reference implementations used only by the tests. They share no
// code with the library beyond the plain data containers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

/// Row-major weights, nodes x f.
inline std::size_t bmu(const std::vector<double>& weights, std::size_t f, const std::vector<double>& sample) {
    const std::size_t nodes = weights.size() / f;
    std::vector<double> dist(nodes);
    for (std::size_t m = 0; m < nodes; ++m) {
        double s = 0.0;
        for (std::size_t j = 0; j < f; ++j) s += (sample[j] - weights[m * f + j]) * (sample[j] - weights[m * f + j]);
        dist[m] = s;
    }
    // min_element returns the first minimum
    return static_cast<std::size_t>(std::min_element(dist.begin(), dist.end()) - dist.begin());
}

inline double distance(const double* a, const double* b, std::size_t f) {
    double s = 0.0;
    for (std::size_t j = 0; j < f; ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    return std::sqrt(s);
}

inline double quantization_error(const std::vector<double>& weights, std::size_t f, const std::vector<double>& data) {
    const std::size_t n = data.size() / f;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(data.begin() + static_cast<std::ptrdiff_t>(i * f),
                                data.begin() + static_cast<std::ptrdiff_t>((i + 1) * f));
        const std::size_t b = bmu(weights, f, row);
        total += distance(row.data(), weights.data() + b * f, f);
    }
    return total / static_cast<double>(n);
}

inline std::vector<double> umatrix(const std::vector<double>& weights, std::size_t x, std::size_t y, std::size_t f) {
    std::vector<double> out(x * y);
    for (int r = 0; r < static_cast<int>(y); ++r)
        for (int c = 0; c < static_cast<int>(x); ++c) {
            double sum = 0.0;
            int count = 0;
            for (int dr = -1; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    const int rr = r + dr, cc = c + dc;
                    if (rr < 0 || cc < 0 || rr >= static_cast<int>(y) || cc >= static_cast<int>(x)) continue;
                    sum += distance(&weights[(static_cast<std::size_t>(r) * x + static_cast<std::size_t>(c)) * f],
                                    &weights[(static_cast<std::size_t>(rr) * x + static_cast<std::size_t>(cc)) * f], f);
                    ++count;
                }
            out[static_cast<std::size_t>(r) * x + static_cast<std::size_t>(c)] = count ? sum / count : 0.0;
        }
    return out;
}

/// Walks from `start` one step at a time, recomputing the neighbor scan at every node.
inline std::size_t descend(const std::vector<double>& u, std::size_t x, std::size_t y, std::size_t start) {
    std::size_t cur = start;
    for (;;) {
        const int r = static_cast<int>(cur / x), c = static_cast<int>(cur % x);
        std::vector<std::size_t> candidates;
        for (int rr = r - 1; rr <= r + 1; ++rr)
            for (int cc = c - 1; cc <= c + 1; ++cc) {
                if (rr < 0 || cc < 0 || rr >= static_cast<int>(y) || cc >= static_cast<int>(x)) continue;
                if (rr == r && cc == c) continue;
                candidates.push_back(static_cast<std::size_t>(rr) * x + static_cast<std::size_t>(cc));
            }
        std::sort(candidates.begin(), candidates.end());
        std::size_t best = cur;
        for (std::size_t k : candidates)
            if (u[k] < u[best]) best = k;
        if (best == cur) return cur;
        cur = best;
    }
}

/// Closed-form Bresenham cells (row, col) from a to b.
inline std::vector<std::pair<long, long>> segment(long r0, long c0, long r1, long c1) {
    const long dr = r1 - r0, dc = c1 - c0;
    const long major = std::max(std::labs(dr), std::labs(dc));
    std::vector<std::pair<long, long>> cells;
    for (long k = 0; k <= major; ++k) {
        if (major == 0) {
            cells.emplace_back(r0, c0);
            break;
        }
        auto offset = [&](long d) {
            const long mag = (2 * k * std::labs(d) + major) / (2 * major);
            return d < 0 ? -mag : mag;
        };
        cells.emplace_back(r0 + offset(dr), c0 + offset(dc));
    }
    return cells;
}

/// Component id per vertex by repeated min-label propagation until nothing changes,
/// then compacted in order of first appearance.
inline std::vector<int> components(std::size_t vertices, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    std::vector<std::size_t> label(vertices);
    for (std::size_t v = 0; v < vertices; ++v) label[v] = v;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [a, b] : edges) {
            const std::size_t m = std::min(label[a], label[b]);
            if (label[a] != m || label[b] != m) {
                label[a] = label[b] = m;
                changed = true;
            }
        }
    }
    std::vector<int> compact(vertices, -1);
    std::vector<int> out(vertices);
    int next = 0;
    for (std::size_t v = 0; v < vertices; ++v) {
        if (compact[label[v]] < 0) compact[label[v]] = next++;
        out[v] = compact[label[v]];
    }
    return out;
}

/// Merge oracle over a U-matrix and per-node centroid indices.
inline std::vector<int> merge(const std::vector<double>& u, std::size_t x, const std::vector<std::size_t>& centroid,
                              double merge_range) {
    std::vector<std::size_t> unique = centroid;
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    const double lo = *std::min_element(u.begin(), u.end());
    const double hi = *std::max_element(u.begin(), u.end());
    const double tau = lo + merge_range * (hi - lo);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < unique.size(); ++i)
        for (std::size_t j = i + 1; j < unique.size(); ++j) {
            const long a = static_cast<long>(unique[i]), b = static_cast<long>(unique[j]);
            const long xs = static_cast<long>(x);
            double peak = -1.0;
            for (const auto& [r, c] : segment(a / xs, a % xs, b / xs, b % xs))
                peak = std::max(peak, u[static_cast<std::size_t>(r * xs + c)]);
            if (peak <= tau) edges.emplace_back(i, j);
        }
    const auto comp = components(unique.size(), edges);
    std::vector<int> out(centroid.size());
    for (std::size_t m = 0; m < centroid.size(); ++m)
        out[m] = comp[static_cast<std::size_t>(std::find(unique.begin(), unique.end(), centroid[m]) - unique.begin())];
    return out;
}

/// |a and b| / |a or b| over 0/1 vectors.
inline double iou(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        inter += (a[i] && b[i]) ? 1 : 0;
        uni += (a[i] || b[i]) ? 1 : 0;
    }
    return uni ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

struct OwnedMask {
    int realization;
    int cluster;
    std::vector<int> bits;
};

/// Masks in (realization, cluster) order from plain label vectors.
inline std::vector<OwnedMask> masks(const std::vector<std::vector<int>>& maps) {
    std::vector<OwnedMask> out;
    for (std::size_t r = 0; r < maps.size(); ++r) {
        const int k = *std::max_element(maps[r].begin(), maps[r].end());
        for (int c = 0; c <= k; ++c) {
            OwnedMask m{static_cast<int>(r), c, std::vector<int>(maps[r].size(), 0)};
            bool any = false;
            for (std::size_t i = 0; i < maps[r].size(); ++i)
                if (maps[r][i] == c) m.bits[i] = 1, any = true;
            if (any) out.push_back(std::move(m));
        }
    }
    return out;
}

/// Random labels in [0, k) with every id present (requires n >= k).
inline std::vector<int> random_map(std::size_t n, int k, std::mt19937_64& rng) {
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i)
        labels[i] = i < static_cast<std::size_t>(k) ? static_cast<int>(i) : static_cast<int>(rng() % static_cast<std::uint64_t>(k));
    std::shuffle(labels.begin(), labels.end(), rng);
    return labels;
}

}  // namespace oracle
