#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "awesom/cluster.hpp"
#include "awesom/dataset.hpp"
#include "awesom/error.hpp"
#include "awesom/random.hpp"

namespace awesom {

struct Blobs {
    Dataset data;
    ClusterMap truth;
    std::vector<double> centers;  // k x f, row-major
};

/// k unit-variance Gaussian blobs in f dimensions with centers pairwise at
/// least `separation` apart. Blob j owns a contiguous run of rows; sizes differ
/// by at most one, with the remainder going to the lowest ids.
inline Blobs generate_blobs(std::size_t n, std::size_t f, std::size_t k, double separation, std::uint64_t seed) {
    if (k == 0) throw config_error("blob count must be >= 1");
    if (n < k) throw config_error("need at least one point per blob");
    if (f == 0) throw config_error("blob dimension must be >= 1");
    if (!(separation >= 0.0) || !std::isfinite(separation)) throw config_error("separation must be >= 0");

    Rng rng(seed);
    std::vector<double> centers(k * f, 0.0);
    // rejection sampling in a cube that grows whenever placement keeps failing
    double side = 2.0 * separation * std::pow(static_cast<double>(k), 1.0 / static_cast<double>(f));
    const double sep2 = separation * separation;
    for (std::size_t c = 0; c < k; ++c) {
        for (int attempt = 0;; ++attempt) {
            if (attempt > 0 && attempt % 1000 == 0) side *= 1.25;
            for (std::size_t j = 0; j < f; ++j) centers[c * f + j] = side * (rng.uniform() - 0.5);
            bool ok = true;
            for (std::size_t o = 0; o < c && ok; ++o) {
                double d2 = 0.0;
                for (std::size_t j = 0; j < f; ++j) {
                    const double d = centers[c * f + j] - centers[o * f + j];
                    d2 += d * d;
                }
                ok = d2 >= sep2;
            }
            if (ok) break;
        }
    }

    std::vector<double> values(n * f);
    std::vector<int> truth(n);
    const std::size_t base = n / k;
    const std::size_t extra = n % k;
    std::size_t i = 0;
    for (std::size_t c = 0; c < k; ++c) {
        const std::size_t size = base + (c < extra ? 1 : 0);
        for (std::size_t s = 0; s < size; ++s, ++i) {
            truth[i] = static_cast<int>(c);
            for (std::size_t j = 0; j < f; ++j) values[i * f + j] = centers[c * f + j] + rng.normal();
        }
    }
    return {Dataset(n, f, std::move(values)), ClusterMap{std::move(truth), static_cast<int>(k)}, std::move(centers)};
}

}  // namespace awesom
