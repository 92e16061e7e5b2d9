#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "awesom/blobs.hpp"
#include "awesom/som.hpp"
#include "oracles.hpp"

using namespace awesom;

namespace {

Dataset random_dataset(std::size_t n, std::size_t f, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::vector<double> v(n * f);
    for (auto& x : v) x = u(rng);
    return Dataset(n, f, std::move(v));
}

Lattice random_lattice(std::size_t x, std::size_t y, std::size_t f, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::vector<double> w(x * y * f);
    for (auto& v : w) v = u(rng);
    return Lattice(x, y, f, std::move(w));
}

std::vector<double> as_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(InitLattice, ConstantFeatureCopiedToEveryNode) {
    Dataset data(4, 2, {7.5, 1.0, 7.5, 2.0, 7.5, -3.0, 7.5, 0.5});
    const Lattice lat = init_lattice(data, 5, 3, 42);
    for (std::uint32_t m = 0; m < lat.nodes(); ++m) EXPECT_EQ(lat.weight({m})[0], 7.5);
}

TEST(InitLattice, SeedDeterministic) {
    const auto data = random_dataset(100, 3, 1);
    EXPECT_EQ(init_lattice(data, 10, 7, 99), init_lattice(data, 10, 7, 99));
    EXPECT_NE(init_lattice(data, 10, 7, 99), init_lattice(data, 10, 7, 100));
}

TEST(InitLattice, WeightsWithinFeatureRanges) {
    const auto blobs = generate_blobs(3000, 4, 3, 10.0, 5);
    const Dataset& data = blobs.data;
    std::vector<double> lo(4, INFINITY), hi(4, -INFINITY);
    for (std::size_t i = 0; i < data.n(); ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            lo[j] = std::min(lo[j], data.at(i, j));
            hi[j] = std::max(hi[j], data.at(i, j));
        }
    const Lattice lat = init_lattice(data, 63, 32, 3);
    for (std::uint32_t m = 0; m < lat.nodes(); ++m)
        for (std::size_t j = 0; j < 4; ++j) {
            EXPECT_GE(lat.weight({m})[j], lo[j]);
            EXPECT_LE(lat.weight({m})[j], hi[j]);
        }
}

TEST(InitLattice, Errors) {
    const auto data = random_dataset(5, 2, 1);
    EXPECT_THROW(init_lattice(data, 0, 4, 1), config_error);
    EXPECT_THROW(init_lattice(data, 4, 0, 1), config_error);
    EXPECT_THROW(init_lattice(Dataset{}, 4, 4, 1), config_error);
}

TEST(BestMatchingUnit, SingleNode) {
    const Lattice lat(1, 1, 3, {1.0, 2.0, 3.0});
    EXPECT_EQ(best_matching_unit(lat, std::vector<double>{-100.0, 4.0, 9.0}).value, 0u);
}

TEST(BestMatchingUnit, NearerNodeWins) {
    const Lattice lat(2, 1, 2, {0.0, 0.0, 1.0, 1.0});
    EXPECT_EQ(best_matching_unit(lat, std::vector<double>{0.9, 0.9}).value, 1u);
}

TEST(BestMatchingUnit, TiesGoToLowestIndex) {
    const Lattice lat(3, 1, 1, {2.0, 0.0, 2.0});
    EXPECT_EQ(best_matching_unit(lat, std::vector<double>{1.0}).value, 0u);
    const Lattice same(2, 2, 1, {5.0, 5.0, 5.0, 5.0});
    EXPECT_EQ(best_matching_unit(same, std::vector<double>{0.0}).value, 0u);
}

TEST(BestMatchingUnit, DimensionMismatch) {
    const Lattice lat(2, 2, 3);
    EXPECT_THROW(best_matching_unit(lat, std::vector<double>{1.0, 2.0}), dimension_error);
}

TEST(BestMatchingUnit, MatchesExhaustiveScanOn63x32) {
    const Lattice lat = random_lattice(63, 32, 5, 11);
    const auto w = as_vector(lat.weights());
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int s = 0; s < 1000; ++s) {
        std::vector<double> sample(5);
        for (auto& v : sample) v = u(rng);
        const NodeIndex got = best_matching_unit(lat, sample);
        ASSERT_EQ(got.value, oracle::bmu(w, 5, sample));
        // global argmin: nobody strictly closer
        const double best = squared_distance(std::span<const double>(sample), lat.weight(got));
        for (std::uint32_t m = 0; m < lat.nodes(); ++m)
            ASSERT_GE(squared_distance(std::span<const double>(sample), lat.weight({m})), best);
    }
}

TEST(Train, ZeroStepsIsIdentity) {
    const auto data = random_dataset(50, 3, 2);
    const Lattice lat = init_lattice(data, 6, 4, 1);
    TrainConfig cfg;
    cfg.steps = 0;
    EXPECT_EQ(train(lat, data, cfg), lat);
}

TEST(Train, OneStepAlphaOneLandsOnSample) {
    const Dataset data(1, 3, {0.1, -2.7, 3.3});
    const Lattice lat = random_lattice(4, 4, 3, 8);
    const NodeIndex c = best_matching_unit(lat, data.row(0));
    TrainConfig cfg;
    cfg.steps = 1;
    cfg.alpha = 1.0;
    cfg.radius0 = 1.0;
    const Lattice out = train(lat, data, cfg);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(out.weight(c)[j], data.at(0, j));
    // radius 1 touches only the BMU
    for (std::uint32_t m = 0; m < lat.nodes(); ++m) {
        if (m != c.value) {
            EXPECT_EQ(as_vector(out.weight({m})), as_vector(lat.weight({m})));
        }
    }
}

TEST(Train, RadiusSchedule) {
    EXPECT_EQ(radius_at(10.0, 0, 100), 10);
    EXPECT_EQ(radius_at(10.0, 50, 100), 5);
    EXPECT_EQ(radius_at(10.0, 51, 100), 5);  // ceil(4.9)
    EXPECT_EQ(radius_at(10.0, 99, 100), 1);
    EXPECT_EQ(radius_at(1.0, 0, 100), 1);
}

TEST(Train, NeighborhoodIsStrictDiskAroundBmu) {
    // single data row far from every node; BMU at the center of a 7x7 lattice
    const std::size_t side = 7;
    std::vector<double> w(side * side, 0.0);
    w[3 * side + 3] = 10.0;
    const Lattice lat(side, side, 1, w);
    const Dataset data(1, 1, {11.0});
    TrainConfig cfg;
    cfg.steps = 1;
    cfg.alpha = 0.5;
    cfg.radius0 = 2.0;  // r(0) = 2: nodes with distance < 2 move
    const Lattice out = train(lat, data, cfg);
    for (std::size_t r = 0; r < side; ++r)
        for (std::size_t c = 0; c < side; ++c) {
            const double d = std::hypot(static_cast<double>(r) - 3.0, static_cast<double>(c) - 3.0);
            const double before = w[r * side + c];
            const double after = out.weight(out.at(r, c))[0];
            if (d < 2.0)
                EXPECT_DOUBLE_EQ(after, 0.5 * before + 0.5 * 11.0) << r << "," << c;
            else
                EXPECT_EQ(after, before) << r << "," << c;
        }
}

TEST(Train, SeedDeterministicAndFinite) {
    const auto data = random_dataset(500, 4, 3);
    const Lattice lat = init_lattice(data, 12, 9, 5);
    TrainConfig cfg{5000, 0.3, 12.0, 77};
    const Lattice a = train(lat, data, cfg);
    const Lattice b = train(lat, data, cfg);
    EXPECT_EQ(a, b);
    for (double v : a.weights()) EXPECT_TRUE(std::isfinite(v));
    cfg.seed = 78;
    EXPECT_NE(train(lat, data, cfg), a);
}

TEST(Train, SingleStepPullsBmuTowardsSample) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const auto data = random_dataset(1, 3, rng());
        const Lattice lat = random_lattice(5, 4, 3, rng());
        const NodeIndex c = best_matching_unit(lat, data.row(0));
        TrainConfig cfg;
        cfg.steps = 1;
        cfg.alpha = std::uniform_real_distribution<double>(0.01, 1.0)(rng);
        cfg.radius0 = 3.0;
        cfg.seed = rng();
        const Lattice out = train(lat, data, cfg);
        EXPECT_LE(squared_distance(data.row(0), out.weight(c)), squared_distance(data.row(0), lat.weight(c)));
    }
}

TEST(Train, ReducesQuantizationErrorOnBlobs) {
    const auto blobs = generate_blobs(3000, 4, 3, 10.0, 1);
    const Lattice lat = init_lattice(blobs.data, 63, 32, 1);
    const double before = quantization_error(lat, blobs.data);
    TrainConfig cfg{default_steps(blobs.data.n()), 0.3, default_radius(lat), 1};
    const double after = quantization_error(train(lat, blobs.data, cfg), blobs.data);
    EXPECT_LT(after, before);
}

TEST(Train, ConfigValidation) {
    const auto data = random_dataset(5, 2, 1);
    const Lattice lat(2, 2, 2);
    EXPECT_THROW(train(lat, data, TrainConfig{10, 0.0, 1.0, 0}), config_error);
    EXPECT_THROW(train(lat, data, TrainConfig{10, 1.5, 1.0, 0}), config_error);
    EXPECT_THROW(train(lat, data, TrainConfig{10, 0.3, 0.5, 0}), config_error);
    EXPECT_THROW(train(Lattice(2, 2, 3), data, TrainConfig{10, 0.3, 1.0, 0}), dimension_error);
}

TEST(QuantizationError, ZeroWhenNodesAreTheRows) {
    const Dataset data(4, 2, {0.0, 1.0, 2.0, 3.0, -4.0, 5.0, 6.5, -7.0});
    const Lattice lat(2, 2, 2, {0.0, 1.0, 2.0, 3.0, -4.0, 5.0, 6.5, -7.0});
    EXPECT_EQ(quantization_error(lat, data), 0.0);
}

TEST(QuantizationError, SingleNodeSingleRow) {
    const Dataset data(1, 2, {3.0, 4.0});
    const Lattice lat(1, 1, 2, {0.0, 0.0});
    EXPECT_DOUBLE_EQ(quantization_error(lat, data), 5.0);
}

TEST(QuantizationError, MatchesScalarLoopOracle) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto data = random_dataset(9000, 4, seed);  // spans several row chunks
        const Lattice lat = random_lattice(8, 6, 4, seed + 100);
        const double want = oracle::quantization_error(as_vector(lat.weights()), 4, as_vector(data.values()));
        EXPECT_NEAR(quantization_error(lat, data), want, 1e-9 * want);
    }
}

TEST(MapToBmus, SingleRow) {
    const auto data = random_dataset(1, 3, 4);
    const Lattice lat = random_lattice(5, 5, 3, 4);
    const auto bmus = map_to_bmus(lat, data);
    ASSERT_EQ(bmus.size(), 1u);
    EXPECT_EQ(bmus[0], best_matching_unit(lat, data.row(0)));
}

TEST(MapToBmus, ParallelMatchesSequential) {
    const auto data = random_dataset(100000, 3, 9);
    const Lattice lat = random_lattice(10, 8, 3, 9);
    set_num_threads(1);
    const auto seq = map_to_bmus(lat, data);
    set_num_threads(4);
    const auto par = map_to_bmus(lat, data);
    set_num_threads(0);
    EXPECT_EQ(seq, par);
}

TEST(MapToBmus, MatchesBruteForce) {
    const auto data = random_dataset(2000, 4, 21);
    const Lattice lat = random_lattice(9, 7, 4, 22);
    const auto w = as_vector(lat.weights());
    const auto bmus = map_to_bmus(lat, data);
    for (std::size_t i = 0; i < data.n(); ++i) ASSERT_EQ(bmus[i].value, oracle::bmu(w, 4, as_vector(data.row(i))));
}

TEST(MapToBmus, DimensionMismatch) {
    EXPECT_THROW(map_to_bmus(Lattice(2, 2, 3), random_dataset(4, 2, 1)), dimension_error);
    EXPECT_THROW(quantization_error(Lattice(2, 2, 3), random_dataset(4, 2, 1)), dimension_error);
}
