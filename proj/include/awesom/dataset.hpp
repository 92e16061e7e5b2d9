#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "awesom/error.hpp"

namespace awesom {

enum class NormMethod : std::uint8_t { none = 0, zscore = 1, minmax = 2 };

inline std::string_view to_string(NormMethod m) {
    switch (m) {
        case NormMethod::none: return "none";
        case NormMethod::zscore: return "zscore";
        case NormMethod::minmax: return "minmax";
    }
    return "unknown";
}

inline NormMethod parse_norm_method(std::string_view s) {
    if (s == "none") return NormMethod::none;
    if (s == "zscore") return NormMethod::zscore;
    if (s == "minmax") return NormMethod::minmax;
    throw config_error("unknown normalization method '" + std::string(s) + "'");
}

/// Per-feature transform parameters. For zscore `offset`/`scale` are mean and
/// population std; for minmax they are min and (max - min). A feature with
/// zero spread is flagged constant and maps to 0.
struct NormalizationRecord {
    struct Feature {
        double offset = 0.0;
        double scale = 1.0;
        bool constant = false;

        friend bool operator==(const Feature&, const Feature&) = default;
    };

    NormMethod method = NormMethod::none;
    std::vector<Feature> features;

    double apply(std::size_t j, double v) const {
        if (method == NormMethod::none) return v;
        const Feature& p = features[j];
        return p.constant ? 0.0 : (v - p.offset) / p.scale;
    }

    friend bool operator==(const NormalizationRecord&, const NormalizationRecord&) = default;
};

/// Dense row-major n x f matrix of finite reals.
class Dataset {
public:
    Dataset() = default;

    Dataset(std::size_t n, std::size_t f, std::vector<double> values,
            std::vector<std::string> feature_names = {})
        : n_(n), f_(f), values_(std::move(values)), names_(std::move(feature_names)) {
        if (n_ == 0) throw config_error("dataset is empty");
        if (f_ == 0) throw config_error("dataset has zero features");
        if (values_.size() != n_ * f_)
            throw dimension_error("dataset payload holds " + std::to_string(values_.size()) +
                                  " values, expected " + std::to_string(n_ * f_));
        if (!names_.empty() && names_.size() != f_)
            throw dimension_error("feature name count does not match feature count");
        for (double v : values_)
            if (!std::isfinite(v)) throw format_error("dataset contains a non-finite value");
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t f() const noexcept { return f_; }
    bool empty() const noexcept { return n_ == 0; }

    std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * f_, f_};
    }
    double at(std::size_t i, std::size_t j) const noexcept { return values_[i * f_ + j]; }

    std::span<const double> values() const noexcept { return values_; }
    const std::vector<std::string>& feature_names() const noexcept { return names_; }

    const NormalizationRecord& normalization() const noexcept { return norm_; }
    void set_normalization(NormalizationRecord r) { norm_ = std::move(r); }

private:
    std::size_t n_ = 0;
    std::size_t f_ = 0;
    std::vector<double> values_;
    std::vector<std::string> names_;
    NormalizationRecord norm_;
};

/// Per-feature [min, max] over all rows.
inline std::vector<std::pair<double, double>> feature_ranges(const Dataset& data) {
    std::vector<std::pair<double, double>> r(data.f(), {0.0, 0.0});
    if (data.empty()) return r;
    for (std::size_t j = 0; j < data.f(); ++j) r[j] = {data.at(0, j), data.at(0, j)};
    for (std::size_t i = 1; i < data.n(); ++i)
        for (std::size_t j = 0; j < data.f(); ++j) {
            const double v = data.at(i, j);
            r[j].first = std::min(r[j].first, v);
            r[j].second = std::max(r[j].second, v);
        }
    return r;
}

/// Applies an existing record to another dataset (e.g. new data for a saved model).
inline Dataset apply_normalization(const Dataset& data, const NormalizationRecord& rec) {
    if (rec.method != NormMethod::none && rec.features.size() != data.f())
        throw dimension_error("normalization record has " + std::to_string(rec.features.size()) +
                              " features, dataset has " + std::to_string(data.f()));
    std::vector<double> out(data.values().begin(), data.values().end());
    if (rec.method != NormMethod::none)
        for (std::size_t i = 0; i < data.n(); ++i)
            for (std::size_t j = 0; j < data.f(); ++j)
                out[i * data.f() + j] = rec.apply(j, data.at(i, j));
    Dataset result(data.n(), data.f(), std::move(out), data.feature_names());
    result.set_normalization(rec);
    return result;
}

inline std::pair<Dataset, NormalizationRecord> normalize(const Dataset& data, NormMethod method) {
    NormalizationRecord rec;
    rec.method = method;
    const std::size_t n = data.n();
    const std::size_t f = data.f();
    if (method == NormMethod::zscore) {
        rec.features.resize(f);
        for (std::size_t j = 0; j < f; ++j) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) sum += data.at(i, j);
            const double mean = sum / static_cast<double>(n);
            double ss = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = data.at(i, j) - mean;
                ss += d * d;
            }
            const double sd = std::sqrt(ss / static_cast<double>(n));
            rec.features[j] = {mean, sd, !(sd > 0.0)};
        }
    } else if (method == NormMethod::minmax) {
        const auto ranges = feature_ranges(data);
        rec.features.resize(f);
        for (std::size_t j = 0; j < f; ++j) {
            const double span = ranges[j].second - ranges[j].first;
            rec.features[j] = {ranges[j].first, span, !(span > 0.0)};
        }
    }
    Dataset out = apply_normalization(data, rec);
    return {std::move(out), std::move(rec)};
}

}  // namespace awesom
