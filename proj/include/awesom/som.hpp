#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "awesom/dataset.hpp"
#include "awesom/error.hpp"
#include "awesom/parallel.hpp"
#include "awesom/random.hpp"

namespace awesom {

/// Linear node index; node (row, col) lives at row * x + col.
struct NodeIndex {
    std::uint32_t value = 0;

    friend bool operator==(NodeIndex, NodeIndex) = default;
    friend auto operator<=>(NodeIndex, NodeIndex) = default;
};

/// Rectangular x (columns) by y (rows) grid of f-dimensional weight vectors.
class Lattice {
public:
    Lattice() = default;

    Lattice(std::size_t x, std::size_t y, std::size_t f)
        : x_(x), y_(y), f_(f), weights_(x * y * f, 0.0) {
        if (x == 0 || y == 0) throw config_error("lattice must have at least one node");
        if (f == 0) throw config_error("lattice feature dimension must be positive");
        if (x * y > std::numeric_limits<std::uint32_t>::max()) throw config_error("lattice too large");
    }

    Lattice(std::size_t x, std::size_t y, std::size_t f, std::vector<double> weights)
        : Lattice(x, y, f) {
        if (weights.size() != weights_.size())
            throw dimension_error("lattice weight count " + std::to_string(weights.size()) +
                                  " does not match " + std::to_string(weights_.size()));
        weights_ = std::move(weights);
    }

    std::size_t x() const noexcept { return x_; }
    std::size_t y() const noexcept { return y_; }
    std::size_t f() const noexcept { return f_; }
    std::size_t nodes() const noexcept { return x_ * y_; }

    std::size_t col(NodeIndex m) const noexcept { return m.value % x_; }
    std::size_t row(NodeIndex m) const noexcept { return m.value / x_; }
    NodeIndex at(std::size_t row, std::size_t col) const noexcept {
        return {static_cast<std::uint32_t>(row * x_ + col)};
    }

    std::span<const double> weight(NodeIndex m) const noexcept {
        return {weights_.data() + m.value * f_, f_};
    }
    std::span<double> weight(NodeIndex m) noexcept { return {weights_.data() + m.value * f_, f_}; }

    std::span<const double> weights() const noexcept { return weights_; }
    std::span<double> weights() noexcept { return weights_; }

    friend bool operator==(const Lattice&, const Lattice&) = default;

private:
    std::size_t x_ = 0;
    std::size_t y_ = 0;
    std::size_t f_ = 0;
    std::vector<double> weights_;
};

struct TrainConfig {
    std::uint64_t steps = 0;
    double alpha = 0.3;
    double radius0 = 1.0;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(alpha > 0.0 && alpha <= 1.0)) throw config_error("alpha must lie in (0, 1]");
        if (!(radius0 >= 1.0) || !std::isfinite(radius0)) throw config_error("radius0 must be >= 1");
    }
};

/// Default step count: 10 * min(n, 100000).
inline std::uint64_t default_steps(std::size_t n) {
    return 10 * static_cast<std::uint64_t>(std::min<std::size_t>(n, 100000));
}

/// Default initial radius: the larger lattice side.
inline double default_radius(const Lattice& lattice) {
    return static_cast<double>(std::max(lattice.x(), lattice.y()));
}

template <class T, class U>
inline double squared_distance(std::span<const T> a, std::span<const U> b) noexcept {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = static_cast<double>(a[j]) - static_cast<double>(b[j]);
        s += d * d;
    }
    return s;
}

/// Each weight component j is drawn uniformly from [min_j, max_j] of the data.
inline Lattice init_lattice(const Dataset& data, std::size_t x, std::size_t y, std::uint64_t seed) {
    if (data.empty()) throw config_error("cannot initialize a lattice from an empty dataset");
    Lattice lattice(x, y, data.f());
    const auto ranges = feature_ranges(data);
    Rng rng(seed);
    auto w = lattice.weights();
    for (std::size_t m = 0; m < lattice.nodes(); ++m)
        for (std::size_t j = 0; j < data.f(); ++j) {
            const auto [lo, hi] = ranges[j];
            w[m * data.f() + j] = lo == hi ? lo : rng.uniform(lo, hi);
        }
    return lattice;
}

namespace detail {
template <class T>
NodeIndex bmu_unchecked(const Lattice& lattice, std::span<const T> sample) noexcept {
    const std::size_t f = lattice.f();
    const double* w = lattice.weights().data();
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_idx = 0;
    const std::size_t nodes = lattice.nodes();
    for (std::size_t m = 0; m < nodes; ++m, w += f) {
        double s = 0.0;
        for (std::size_t j = 0; j < f; ++j) {
            const double d = static_cast<double>(sample[j]) - w[j];
            s += d * d;
        }
        if (s < best) {
            best = s;
            best_idx = static_cast<std::uint32_t>(m);
        }
    }
    return {best_idx};
}
}  // namespace detail

/// Node minimizing squared Euclidean distance to `sample`; ties go to the lowest index.
template <class T>
NodeIndex best_matching_unit(const Lattice& lattice, std::span<const T> sample) {
    if (sample.size() != lattice.f())
        throw dimension_error("sample has " + std::to_string(sample.size()) +
                              " features, lattice has " + std::to_string(lattice.f()));
    return detail::bmu_unchecked(lattice, sample);
}

inline NodeIndex best_matching_unit(const Lattice& lattice, const std::vector<double>& sample) {
    return best_matching_unit(lattice, std::span<const double>(sample));
}

inline void check_dims(const Lattice& lattice, const Dataset& data) {
    if (data.f() != lattice.f())
        throw dimension_error("dataset has " + std::to_string(data.f()) + " features, lattice has " +
                              std::to_string(lattice.f()));
}

/// Neighborhood radius at iteration t: max(1, ceil(radius0 * (1 - t / steps))).
inline std::int64_t radius_at(double radius0, std::uint64_t t, std::uint64_t steps) {
    const double r = std::ceil(radius0 * (1.0 - static_cast<double>(t) / static_cast<double>(steps)));
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(r));
}

/// Stochastic training with a step neighborhood kernel.
///
/// Every iteration draws one row uniformly at random, finds its BMU c and
/// moves every node m with lattice distance |m - c| < r(t) towards the row
/// by a fraction alpha.
inline Lattice train(Lattice lattice, const Dataset& data, const TrainConfig& cfg) {
    check_dims(lattice, data);
    cfg.validate();
    if (cfg.steps == 0) return lattice;
    if (data.empty()) throw config_error("cannot train on an empty dataset");

    Rng rng(cfg.seed);
    const std::size_t f = lattice.f();
    const auto xs = static_cast<std::int64_t>(lattice.x());
    const auto ys = static_cast<std::int64_t>(lattice.y());
    double* w = lattice.weights().data();
    // (1 - alpha) w + alpha x, which is exactly x for alpha = 1
    const double keep = 1.0 - cfg.alpha;
    for (std::uint64_t t = 0; t < cfg.steps; ++t) {
        const auto sample = data.row(rng.index(data.n()));
        const NodeIndex c = detail::bmu_unchecked(lattice, sample);
        const std::int64_t r = radius_at(cfg.radius0, t, cfg.steps);
        const auto cr = static_cast<std::int64_t>(lattice.row(c));
        const auto cc = static_cast<std::int64_t>(lattice.col(c));
        // dist < r  <=>  dr^2 + dc^2 < r^2 for integer r
        const std::int64_t r2 = r * r;
        for (std::int64_t row = std::max<std::int64_t>(0, cr - r + 1);
             row <= std::min(ys - 1, cr + r - 1); ++row) {
            const std::int64_t dr = row - cr;
            for (std::int64_t col = std::max<std::int64_t>(0, cc - r + 1);
                 col <= std::min(xs - 1, cc + r - 1); ++col) {
                const std::int64_t dc = col - cc;
                if (dr * dr + dc * dc >= r2) continue;
                double* wm = w + static_cast<std::size_t>(row * xs + col) * f;
                for (std::size_t j = 0; j < f; ++j) wm[j] = keep * wm[j] + cfg.alpha * sample[j];
            }
        }
    }
    return lattice;
}

inline constexpr std::size_t kRowGrain = 4096;

/// BMU of every data row. Identical for any thread count.
inline std::vector<NodeIndex> map_to_bmus(const Lattice& lattice, const Dataset& data) {
    check_dims(lattice, data);
    std::vector<NodeIndex> out(data.n());
    parallel_for(data.n(), kRowGrain, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) out[i] = detail::bmu_unchecked(lattice, data.row(i));
    });
    return out;
}

/// Mean Euclidean distance from each row to its BMU weight.
inline double quantization_error(const Lattice& lattice, const Dataset& data) {
    check_dims(lattice, data);
    if (data.empty()) throw config_error("quantization error of an empty dataset");
    std::vector<double> partial(chunk_count(data.n(), kRowGrain), 0.0);
    parallel_for(data.n(), kRowGrain, [&](std::size_t b, std::size_t e) {
        double s = 0.0;
        for (std::size_t i = b; i < e; ++i) {
            const auto row = data.row(i);
            s += std::sqrt(squared_distance(row, lattice.weight(detail::bmu_unchecked(lattice, row))));
        }
        partial[b / kRowGrain] = s;
    });
    double total = 0.0;
    for (double s : partial) total += s;
    return total / static_cast<double>(data.n());
}

/// Quantization error from BMUs already computed by map_to_bmus.
inline double quantization_error(const Lattice& lattice, const Dataset& data, std::span<const NodeIndex> bmus) {
    check_dims(lattice, data);
    if (data.empty()) throw config_error("quantization error of an empty dataset");
    if (bmus.size() != data.n()) throw dimension_error("BMU count does not match the dataset");
    std::vector<double> partial(chunk_count(data.n(), kRowGrain), 0.0);
    parallel_for(data.n(), kRowGrain, [&](std::size_t b, std::size_t e) {
        double s = 0.0;
        for (std::size_t i = b; i < e; ++i) s += std::sqrt(squared_distance(data.row(i), lattice.weight(bmus[i])));
        partial[b / kRowGrain] = s;
    });
    double total = 0.0;
    for (double s : partial) total += s;
    return total / static_cast<double>(data.n());
}

}  // namespace awesom
