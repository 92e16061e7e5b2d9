// awesom: command-line front end.
//
//   awesom pipeline --data in.csv --xdim 63 --ydim 32 --out-model m.bin --out-labels l.bin
//   awesom sce --labels a.bin,b.bin,c.bin --out consensus.bin
//   awesom bench --stage som --sizes 1e4,1e5 --f 6
//   awesom generate --n 3000 --f 4 --k 3 --separation 10 --out blobs.bin --out-truth truth.bin
//
// Exit codes: 0 ok, 2 bad flags or parameters, 3 I/O or format error,
// 4 dimension mismatch, 5 label files disagree on point count.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "awesom/awesom.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitDimension = 4;
constexpr int kExitLength = 5;

class length_mismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_json(const std::string& path, const ordered_json& doc) {
    std::ofstream out(path);
    if (!out) throw awesom::io_error("cannot open '" + path + "' for writing");
    out << doc.dump(2) << '\n';
    if (!out) throw awesom::io_error("failed writing '" + path + "'");
}

struct PipelineArgs {
    std::string data;
    std::string format;
    std::optional<std::uint64_t> steps;
    std::optional<double> radius;
    std::string normalize = "zscore";
    std::string out_model = "awesom_model.bin";
    std::string out_labels = "awesom_labels.bin";
    std::string manifest;
    awesom::PipelineOptions opt;
};

int cmd_pipeline(const PipelineArgs& a) {
    awesom::PipelineOptions opt = a.opt;
    opt.steps = a.steps;
    opt.radius0 = a.radius;
    opt.normalize = awesom::parse_norm_method(a.normalize);
    const auto format = a.format.empty() ? awesom::guess_data_format(a.data) : awesom::parse_data_format(a.format);

    const awesom::Dataset raw = awesom::load_dataset(a.data, format);
    const auto res = awesom::run_pipeline(raw, opt);
    awesom::save_model(a.out_model, res.model);
    awesom::save_labels(a.out_labels, res.clusters.labels);

    ordered_json m;
    m["command"] = "pipeline";
    m["data"] = a.data;
    m["format"] = format == awesom::DataFormat::csv ? "csv" : "binary";
    m["n"] = raw.n();
    m["f"] = raw.f();
    m["xdim"] = opt.xdim;
    m["ydim"] = opt.ydim;
    m["steps"] = res.train_config.steps;
    m["alpha"] = res.train_config.alpha;
    m["radius0"] = res.train_config.radius0;
    m["seed"] = opt.seed;
    m["normalize"] = std::string(awesom::to_string(opt.normalize));
    m["merge_range"] = opt.merge_range;
    m["bandwidth"] = opt.bandwidth;
    m["cluster_count"] = res.clusters.n_clusters;
    m["qe_before"] = res.qe_before;
    m["qe_after"] = res.qe_after;
    m["out_model"] = a.out_model;
    m["out_labels"] = a.out_labels;
    write_json(a.manifest.empty() ? a.out_labels + ".json" : a.manifest, m);

    std::cerr << "clusters: " << res.clusters.n_clusters << "  QE " << res.qe_before << " -> " << res.qe_after
              << '\n';
    return 0;
}

struct SceArgs {
    std::vector<std::string> labels;
    double gmin = awesom::SceConfig{}.g_min;
    int vmin = 0;
    std::string out = "awesom_sce.bin";
    std::string out_strengths;
    std::string manifest;
};

int cmd_sce(const SceArgs& a) {
    if (a.labels.size() < 2) throw awesom::config_error("--labels needs at least 2 files");
    std::vector<awesom::Realization> reals;
    for (std::size_t r = 0; r < a.labels.size(); ++r) {
        auto labels = awesom::load_labels(a.labels[r]);
        if (!reals.empty() && labels.size() != reals.front().map.size())
            throw length_mismatch("'" + a.labels[r] + "' has " + std::to_string(labels.size()) + " points, '" +
                                  a.labels[0] + "' has " + std::to_string(reals.front().map.size()));
        for (int l : labels)
            if (l < 0) throw awesom::format_error("'" + a.labels[r] + "' contains unassigned (-1) points");
        reals.push_back({static_cast<int>(r), awesom::compact_labels(std::move(labels))});
    }
    const awesom::SceConfig cfg{a.gmin, a.vmin};
    const auto res = awesom::run_sce(reals, cfg);
    const auto& fm = res.final_map;

    const std::string strengths = a.out_strengths.empty() ? a.out + ".strengths" : a.out_strengths;
    awesom::save_labels(a.out, fm.labels);
    awesom::save_labels(strengths, fm.strengths);

    ordered_json m;
    m["command"] = "sce";
    m["labels"] = a.labels;
    m["realizations"] = reals.size();
    m["n"] = fm.labels.size();
    m["gmin"] = cfg.g_min;
    m["vmin"] = res.v_min;
    m["masks"] = res.masks.size();
    m["comparisons"] = res.graph.comparisons;
    m["edges"] = res.graph.edges.size();
    m["group_count"] = fm.n_groups;
    m["unassigned_fraction"] = static_cast<double>(fm.unassigned()) / static_cast<double>(fm.labels.size());
    m["out"] = a.out;
    m["out_strengths"] = strengths;
    write_json(a.manifest.empty() ? a.out + ".json" : a.manifest, m);
    return 0;
}

struct BenchArgs {
    std::string stage = "som";
    std::vector<double> sizes;
    std::size_t f = 6;
    int repeats = 1;
    std::uint64_t seed = 1;
    std::size_t xdim = 63;
    std::size_t ydim = 32;
    std::uint64_t steps = 100000;
    std::size_t realizations = 10;
    std::size_t clusters = 7;
    double flip = 0.05;
    double separation = 10.0;
    std::string out;
};

int cmd_bench(const BenchArgs& a) {
    if (a.stage != "som" && a.stage != "sce") throw awesom::config_error("--stage must be som or sce");
    if (a.repeats < 1) throw awesom::config_error("--repeats must be >= 1");
    std::ofstream file;
    if (!a.out.empty()) {
        file.open(a.out);
        if (!file) throw awesom::io_error("cannot open '" + a.out + "' for writing");
    }
    std::ostream& out = a.out.empty() ? std::cout : file;
    out << awesom::kBenchCsvHeader << '\n';
    for (const double size : a.sizes) {
        if (!(size >= 1.0) || size != std::floor(size)) throw awesom::config_error("--sizes entries must be positive integers");
        const auto n = static_cast<std::size_t>(size);
        const auto blobs = awesom::generate_blobs(n, a.f, a.clusters, a.separation, a.seed);
        std::vector<awesom::Realization> reals;
        if (a.stage == "sce") reals = awesom::perturbed_realizations(blobs.truth, a.realizations, a.flip, a.seed);
        for (int rep = 0; rep < a.repeats; ++rep) {
            auto rec = a.stage == "som" ? awesom::bench_som(blobs.data, a.xdim, a.ydim, a.steps, a.seed)
                                        : awesom::bench_sce(reals, awesom::SceConfig{});
            rec.repeat = rep;
            awesom::write_csv_row(out, rec);
            out.flush();
        }
    }
    return 0;
}

struct GenerateArgs {
    std::size_t n = 1000;
    std::size_t f = 4;
    std::size_t k = 3;
    double separation = 10.0;
    std::uint64_t seed = 1;
    std::string out;
    std::string out_truth;
};

int cmd_generate(const GenerateArgs& a) {
    const auto blobs = awesom::generate_blobs(a.n, a.f, a.k, a.separation, a.seed);
    if (awesom::guess_data_format(a.out) == awesom::DataFormat::csv)
        awesom::save_csv(a.out, blobs.data);
    else
        awesom::save_binary(a.out, blobs.data);
    if (!a.out_truth.empty()) awesom::save_labels(a.out_truth, blobs.truth.labels);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"awesom: self-organizing map clustering with ensemble stacking"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker threads (default: AWESOM_THREADS or hardware concurrency)");

    PipelineArgs pa;
    auto* pipeline = app.add_subcommand("pipeline", "train a SOM and label every data point");
    pipeline->add_option("--data", pa.data, "input dataset (.csv or binary)")->required();
    pipeline->add_option("--format", pa.format, "csv|binary (default: from extension)");
    pipeline->add_option("--xdim", pa.opt.xdim, "lattice columns")->capture_default_str()->check(CLI::PositiveNumber);
    pipeline->add_option("--ydim", pa.opt.ydim, "lattice rows")->capture_default_str()->check(CLI::PositiveNumber);
    pipeline->add_option("--steps", pa.steps, "training iterations (default: 10*min(n, 100000))");
    pipeline->add_option("--alpha", pa.opt.alpha, "learning rate in (0, 1]")->capture_default_str();
    pipeline->add_option("--radius", pa.radius, "initial neighborhood radius (default: max(xdim, ydim))");
    pipeline->add_option("--seed", pa.opt.seed, "RNG seed")->capture_default_str();
    pipeline->add_option("--normalize", pa.normalize, "none|zscore|minmax")->capture_default_str();
    pipeline->add_option("--merge-range", pa.opt.merge_range, "centroid merge range in [0, 1]")->capture_default_str();
    pipeline->add_option("--bandwidth", pa.opt.bandwidth, "U-matrix smoothing bandwidth")->capture_default_str();
    pipeline->add_option("--out-model", pa.out_model, "model output path")->capture_default_str();
    pipeline->add_option("--out-labels", pa.out_labels, "label output path")->capture_default_str();
    pipeline->add_option("--manifest", pa.manifest, "manifest path (default: <out-labels>.json)");

    SceArgs sa;
    auto* sce = app.add_subcommand("sce", "stack several label files into one consensus labeling");
    sce->add_option("--labels", sa.labels, "comma-separated label files")->required()->delimiter(',');
    sce->add_option("--gmin", sa.gmin, "similarity threshold in [0, 1]")->capture_default_str();
    sce->add_option("--vmin", sa.vmin, "minimum votes (default: ceil(R/2))");
    sce->add_option("--out", sa.out, "consensus label output")->capture_default_str();
    sce->add_option("--out-strengths", sa.out_strengths, "winning vote counts (default: <out>.strengths)");
    sce->add_option("--manifest", sa.manifest, "manifest path (default: <out>.json)");

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "scaling benchmark, CSV on stdout or --out");
    bench->add_option("--stage", ba.stage, "som|sce")->capture_default_str();
    bench->add_option("--sizes", ba.sizes, "point counts, e.g. 1e4,1e5")->required()->delimiter(',');
    bench->add_option("--f", ba.f, "feature count")->capture_default_str()->check(CLI::PositiveNumber);
    bench->add_option("--repeats", ba.repeats, "runs per size")->capture_default_str();
    bench->add_option("--seed", ba.seed, "RNG seed")->capture_default_str();
    bench->add_option("--xdim", ba.xdim, "lattice columns")->capture_default_str()->check(CLI::PositiveNumber);
    bench->add_option("--ydim", ba.ydim, "lattice rows")->capture_default_str()->check(CLI::PositiveNumber);
    bench->add_option("--steps", ba.steps, "fixed training iterations")->capture_default_str();
    bench->add_option("--realizations", ba.realizations, "R for the sce stage")->capture_default_str();
    bench->add_option("--clusters", ba.clusters, "blob count (N_C for the sce stage)")->capture_default_str();
    bench->add_option("--flip", ba.flip, "label noise for sce realizations")->capture_default_str();
    bench->add_option("--separation", ba.separation, "blob center separation")->capture_default_str();
    bench->add_option("--out", ba.out, "CSV output path (default: stdout)");

    GenerateArgs ga;
    auto* generate = app.add_subcommand("generate", "write a Gaussian blob dataset");
    generate->add_option("--n", ga.n, "points")->capture_default_str();
    generate->add_option("--f", ga.f, "features")->capture_default_str();
    generate->add_option("--k", ga.k, "blobs")->capture_default_str();
    generate->add_option("--separation", ga.separation, "minimum center distance")->capture_default_str();
    generate->add_option("--seed", ga.seed, "RNG seed")->capture_default_str();
    generate->add_option("--out", ga.out, "dataset output (.csv or binary)")->required();
    generate->add_option("--out-truth", ga.out_truth, "truth label output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        if (code == 0) return 0;
        std::cerr << app.help();
        return kExitUsage;
    }

    try {
        awesom::set_num_threads(threads);
        if (*pipeline) return cmd_pipeline(pa);
        if (*sce) return cmd_sce(sa);
        if (*bench) return cmd_bench(ba);
        if (*generate) return cmd_generate(ga);
    } catch (const awesom::config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const awesom::io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const awesom::dimension_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDimension;
    } catch (const length_mismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitLength;
    }
    return kExitUsage;
}
