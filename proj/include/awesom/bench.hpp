#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "awesom/blobs.hpp"
#include "awesom/pipeline.hpp"
#include "awesom/random.hpp"
#include "awesom/sce.hpp"

namespace awesom {

enum class BenchStage { som, sce };

inline std::string_view to_string(BenchStage s) { return s == BenchStage::som ? "som" : "sce"; }

/// One timed run. Columns not used by a stage are written as 0.
struct BenchRecord {
    BenchStage stage = BenchStage::som;
    std::size_t n = 0;
    std::size_t f = 0;
    std::size_t x = 0;
    std::size_t y = 0;
    std::uint64_t steps = 0;
    std::size_t realizations = 0;
    double mean_clusters = 0.0;
    std::uint64_t comparisons = 0;
    int repeat = 0;
    double wall_seconds = 0.0;
    std::uint64_t peak_rss_bytes = 0;
};

inline constexpr std::string_view kBenchCsvHeader =
    "stage,n,f,x,y,steps,realizations,mean_clusters,comparisons,repeat,wall_seconds,peak_rss_bytes";

inline void write_csv_row(std::ostream& out, const BenchRecord& r) {
    out << to_string(r.stage) << ',' << r.n << ',' << r.f << ',' << r.x << ',' << r.y << ',' << r.steps << ','
        << r.realizations << ',' << r.mean_clusters << ',' << r.comparisons << ',' << r.repeat << ','
        << r.wall_seconds << ',' << r.peak_rss_bytes << '\n';
}

/// High-water resident set size of this process, or 0 when unavailable.
inline std::uint64_t peak_rss_bytes() {
    std::ifstream status("/proc/self/status");
    std::string line;
    while (std::getline(status, line))
        if (line.rfind("VmHWM:", 0) == 0) {
            try {
                return std::stoull(line.substr(6)) * 1024;
            } catch (const std::exception&) {
                return 0;
            }
        }
    return 0;
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

/// Times the SOM stage (init through point labels) on pre-generated data.
inline BenchRecord bench_som(const Dataset& data, std::size_t x, std::size_t y, std::uint64_t steps,
                             std::uint64_t seed) {
    PipelineOptions opt;
    opt.xdim = x;
    opt.ydim = y;
    opt.steps = steps;
    opt.seed = seed;
    opt.normalize = NormMethod::none;
    Stopwatch sw;
    const auto res = run_pipeline(data, opt);
    BenchRecord rec;
    rec.stage = BenchStage::som;
    rec.wall_seconds = sw.seconds();
    rec.n = data.n();
    rec.f = data.f();
    rec.x = x;
    rec.y = y;
    rec.steps = steps;
    rec.mean_clusters = res.clusters.n_clusters;
    rec.peak_rss_bytes = peak_rss_bytes();
    return rec;
}

/// R noisy copies of `truth`: ids permuted per copy and a fraction of points
/// reassigned to a random cluster.
inline std::vector<Realization> perturbed_realizations(const ClusterMap& truth, std::size_t realizations,
                                                       double flip_fraction, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Realization> out;
    out.reserve(realizations);
    const int k = truth.n_clusters;
    for (std::size_t r = 0; r < realizations; ++r) {
        std::vector<int> perm(static_cast<std::size_t>(k));
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
        std::vector<int> labels(truth.labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            int l = truth.labels[i];
            if (rng.uniform() < flip_fraction) l = static_cast<int>(rng.index(static_cast<std::size_t>(k)));
            labels[i] = perm[static_cast<std::size_t>(l)];
        }
        out.push_back({static_cast<int>(r), compact_labels(std::move(labels))});
    }
    return out;
}

/// Times the full SCE stack over pre-built realizations.
inline BenchRecord bench_sce(std::span<const Realization> reals, const SceConfig& cfg) {
    Stopwatch sw;
    const auto res = run_sce(reals, cfg);
    BenchRecord rec;
    rec.stage = BenchStage::sce;
    rec.wall_seconds = sw.seconds();
    rec.n = reals.front().map.size();
    rec.realizations = reals.size();
    double clusters = 0.0;
    for (const auto& r : reals) clusters += r.map.n_clusters;
    rec.mean_clusters = clusters / static_cast<double>(reals.size());
    rec.comparisons = res.graph.comparisons;
    rec.peak_rss_bytes = peak_rss_bytes();
    return rec;
}

}  // namespace awesom
