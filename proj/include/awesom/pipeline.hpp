#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "awesom/cluster.hpp"
#include "awesom/dataset.hpp"
#include "awesom/io.hpp"
#include "awesom/som.hpp"

namespace awesom {

struct PipelineOptions {
    std::size_t xdim = 63;
    std::size_t ydim = 32;
    std::optional<std::uint64_t> steps;  // default_steps(n)
    double alpha = 0.3;
    std::optional<double> radius0;  // default_radius(lattice)
    std::uint64_t seed = 1;
    NormMethod normalize = NormMethod::zscore;
    double merge_range = kDefaultMergeRange;
    double bandwidth = kDefaultBandwidth;
};

struct PipelineResult {
    Model model;
    UMatrix umatrix;
    ClusterMap clusters;
    TrainConfig train_config;  // effective values, defaults resolved
    double qe_before = 0.0;
    double qe_after = 0.0;
};

/// normalize -> init -> train -> U-matrix -> centroids -> merge -> label.
inline PipelineResult run_pipeline(const Dataset& raw, const PipelineOptions& opt) {
    if (!(opt.merge_range >= 0.0 && opt.merge_range <= 1.0)) throw config_error("merge_range must lie in [0, 1]");
    auto [data, record] = normalize(raw, opt.normalize);

    PipelineResult res;
    Lattice lattice = init_lattice(data, opt.xdim, opt.ydim, opt.seed);
    res.train_config.steps = opt.steps.value_or(default_steps(data.n()));
    res.train_config.alpha = opt.alpha;
    res.train_config.radius0 = opt.radius0.value_or(default_radius(lattice));
    res.train_config.seed = opt.seed;
    res.train_config.validate();

    res.qe_before = quantization_error(lattice, data);
    lattice = train(std::move(lattice), data, res.train_config);
    const auto bmus = map_to_bmus(lattice, data);
    res.qe_after = quantization_error(lattice, data, bmus);

    res.umatrix = compute_umatrix(lattice, opt.bandwidth);
    const auto centroids = find_centroids(res.umatrix);
    const NodeLabels node_labels = merge_centroids(res.umatrix, centroids, opt.merge_range);
    res.clusters = label_data(node_labels, bmus);
    res.model = Model{std::move(lattice), std::move(record)};
    return res;
}

}  // namespace awesom
