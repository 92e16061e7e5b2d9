#pragma once

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "awesom/dataset.hpp"
#include "awesom/error.hpp"
#include "awesom/som.hpp"

// Binary layouts (all integers and floats little-endian, no padding):
//
//   dataset  "AWSF" u32 version=1  u64 n  u32 f  u8 dtype=0   then n*f f32, row-major
//   labels   "AWSL" u32 version=1  u64 n  u8 dtype=1          then n i32
//   model    "AWSM" u32 version=1  u32 x  u32 y  u32 f        then x*y*f f64 weights,
//            u8 norm method  u32 feature count  then per feature: f64 offset, f64 scale, u8 constant

namespace awesom {

enum class DataFormat { csv, binary };

inline DataFormat parse_data_format(std::string_view s) {
    if (s == "csv") return DataFormat::csv;
    if (s == "binary" || s == "bin") return DataFormat::binary;
    throw config_error("unknown data format '" + std::string(s) + "'");
}

/// csv for *.csv / *.txt, binary otherwise.
inline DataFormat guess_data_format(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    return (ext == ".csv" || ext == ".txt") ? DataFormat::csv : DataFormat::binary;
}

inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::size_t kCsvWarnRows = 1'000'000;

namespace detail {

class ByteWriter {
public:
    void bytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    template <class U>
    void uint(U v) {
        for (std::size_t k = 0; k < sizeof(U); ++k) buf_.push_back(static_cast<char>((v >> (8 * k)) & 0xFF));
    }
    void u32(std::uint32_t v) { uint(v); }
    void u64(std::uint64_t v) { uint(v); }
    void i32(std::int32_t v) { uint(static_cast<std::uint32_t>(v)); }
    void f32(float v) { uint(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }

    void write_to(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open '" + path.string() + "' for writing");
        out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
        if (!out) throw io_error("failed writing '" + path.string() + "'");
    }

    void reserve(std::size_t n) { buf_.reserve(n); }

private:
    std::vector<char> buf_;
};

class ByteReader {
public:
    ByteReader(std::vector<char> data, std::string what) : data_(std::move(data)), what_(std::move(what)) {}

    std::size_t remaining() const noexcept { return data_.size() - pos_; }

    void need(std::size_t n, std::string_view context) const {
        if (remaining() < n) throw format_error(what_ + ": truncated " + std::string(context));
    }

    void magic(std::string_view expected) {
        need(expected.size(), "header");
        if (std::string_view(data_.data() + pos_, expected.size()) != expected)
            throw format_error(what_ + ": bad magic (expected " + std::string(expected) + ")");
        pos_ += expected.size();
    }

    template <class U>
    U uint(std::string_view context = "header") {
        need(sizeof(U), context);
        U v = 0;
        for (std::size_t k = 0; k < sizeof(U); ++k)
            v |= static_cast<U>(static_cast<U>(static_cast<unsigned char>(data_[pos_ + k])) << (8 * k));
        pos_ += sizeof(U);
        return v;
    }
    std::uint8_t u8(std::string_view c = "header") { return uint<std::uint8_t>(c); }
    std::uint32_t u32(std::string_view c = "header") { return uint<std::uint32_t>(c); }
    std::uint64_t u64(std::string_view c = "header") { return uint<std::uint64_t>(c); }
    std::int32_t i32(std::string_view c) { return static_cast<std::int32_t>(uint<std::uint32_t>(c)); }
    float f32(std::string_view c) { return std::bit_cast<float>(uint<std::uint32_t>(c)); }
    double f64(std::string_view c) { return std::bit_cast<double>(uint<std::uint64_t>(c)); }

    void version() {
        const std::uint32_t v = u32();
        if (v != kFormatVersion) throw format_error(what_ + ": unsupported version " + std::to_string(v));
    }

    void expect_end() const {
        if (remaining() != 0) throw format_error(what_ + ": " + std::to_string(remaining()) + " trailing bytes");
    }

    const std::string& what() const noexcept { return what_; }

private:
    std::vector<char> data_;
    std::size_t pos_ = 0;
    std::string what_;
};

inline std::vector<char> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path.string() + "'");
    in.seekg(0, std::ios::end);
    const auto size = in.tellg();
    in.seekg(0, std::ios::beg);
    std::vector<char> buf(static_cast<std::size_t>(size));
    in.read(buf.data(), size);
    if (!in) throw io_error("failed reading '" + path.string() + "'");
    return buf;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

inline bool parse_number(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace detail

/// CSV with an optional header row. The first row is a header when any of its
/// cells is not a number.
inline Dataset load_csv(const std::filesystem::path& path) {
    const auto raw = detail::read_file(path);
    const std::string_view text(raw.data(), raw.size());
    const std::string where = path.string();

    std::vector<std::string> names;
    std::vector<double> values;
    std::size_t f = 0;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        const std::string_view line = detail::trim(text.substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
        if (line.empty()) continue;
        const auto cells = detail::split_csv(line);
        if (first) {
            first = false;
            f = cells.size();
            double dummy;
            bool header = false;
            for (auto c : cells)
                if (!detail::parse_number(c, dummy)) header = true;
            if (header) {
                for (auto c : cells) names.emplace_back(c);
                continue;
            }
        }
        if (cells.size() != f)
            throw format_error(where + ":" + std::to_string(line_no) + ": expected " + std::to_string(f) +
                               " cells, found " + std::to_string(cells.size()));
        for (auto c : cells) {
            double v;
            if (!detail::parse_number(c, v))
                throw format_error(where + ":" + std::to_string(line_no) + ": non-numeric cell '" + std::string(c) + "'");
            if (!std::isfinite(v))
                throw format_error(where + ":" + std::to_string(line_no) + ": non-finite cell '" + std::string(c) + "'");
            values.push_back(v);
        }
        ++rows;
    }
    if (rows == 0) throw format_error(where + ": no data rows");
    if (rows > kCsvWarnRows)
        std::cerr << "warning: " << where << " has " << rows << " CSV rows; the binary format is faster at this scale\n";
    return Dataset(rows, f, std::move(values), std::move(names));
}

inline Dataset load_binary(const std::filesystem::path& path) {
    detail::ByteReader in(detail::read_file(path), path.string());
    in.magic("AWSF");
    in.version();
    const std::uint64_t n = in.u64();
    const std::uint32_t f = in.u32();
    const std::uint8_t dtype = in.u8();
    if (dtype != 0) throw format_error(in.what() + ": unsupported dtype " + std::to_string(dtype));
    if (n == 0 || f == 0) throw format_error(in.what() + ": empty dataset");
    if (n > in.remaining() / 4 / f) throw format_error(in.what() + ": truncated payload");
    std::vector<double> values(n * f);
    for (auto& v : values) {
        v = in.f32("payload");
        if (!std::isfinite(v)) throw format_error(in.what() + ": non-finite value in payload");
    }
    in.expect_end();
    return Dataset(n, f, std::move(values));
}

inline Dataset load_dataset(const std::filesystem::path& path, DataFormat format) {
    return format == DataFormat::csv ? load_csv(path) : load_binary(path);
}

inline Dataset load_dataset(const std::filesystem::path& path) { return load_dataset(path, guess_data_format(path)); }

/// Values are narrowed to f32.
inline void save_binary(const std::filesystem::path& path, const Dataset& data) {
    detail::ByteWriter out;
    out.reserve(21 + data.values().size() * 4);
    out.bytes("AWSF");
    out.u32(kFormatVersion);
    out.u64(data.n());
    out.u32(static_cast<std::uint32_t>(data.f()));
    out.u8(0);
    for (double v : data.values()) out.f32(static_cast<float>(v));
    out.write_to(path);
}

inline void save_csv(const std::filesystem::path& path, const Dataset& data) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path.string() + "' for writing");
    const auto& names = data.feature_names();
    for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
    if (!names.empty()) out << '\n';
    out.precision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < data.n(); ++i) {
        for (std::size_t j = 0; j < data.f(); ++j) out << (j ? "," : "") << data.at(i, j);
        out << '\n';
    }
    if (!out) throw io_error("failed writing '" + path.string() + "'");
}

inline void save_labels(const std::filesystem::path& path, std::span<const int> labels) {
    detail::ByteWriter out;
    out.reserve(17 + labels.size() * 4);
    out.bytes("AWSL");
    out.u32(kFormatVersion);
    out.u64(labels.size());
    out.u8(1);
    for (int l : labels) out.i32(l);
    out.write_to(path);
}

inline std::vector<int> load_labels(const std::filesystem::path& path) {
    detail::ByteReader in(detail::read_file(path), path.string());
    in.magic("AWSL");
    in.version();
    const std::uint64_t n = in.u64();
    const std::uint8_t dtype = in.u8();
    if (dtype != 1) throw format_error(in.what() + ": unsupported dtype " + std::to_string(dtype));
    if (n > in.remaining() / 4) throw format_error(in.what() + ": truncated payload");
    std::vector<int> labels(n);
    for (auto& l : labels) {
        l = in.i32("payload");
        if (l < -1) throw format_error(in.what() + ": label " + std::to_string(l) + " below -1");
    }
    in.expect_end();
    return labels;
}

struct Model {
    Lattice lattice;
    NormalizationRecord normalization;

    friend bool operator==(const Model&, const Model&) = default;
};

inline void save_model(const std::filesystem::path& path, const Model& model) {
    const Lattice& lat = model.lattice;
    detail::ByteWriter out;
    out.reserve(20 + lat.weights().size() * 8 + 5 + model.normalization.features.size() * 17);
    out.bytes("AWSM");
    out.u32(kFormatVersion);
    out.u32(static_cast<std::uint32_t>(lat.x()));
    out.u32(static_cast<std::uint32_t>(lat.y()));
    out.u32(static_cast<std::uint32_t>(lat.f()));
    for (double w : lat.weights()) out.f64(w);
    out.u8(static_cast<std::uint8_t>(model.normalization.method));
    out.u32(static_cast<std::uint32_t>(model.normalization.features.size()));
    for (const auto& p : model.normalization.features) {
        out.f64(p.offset);
        out.f64(p.scale);
        out.u8(p.constant ? 1 : 0);
    }
    out.write_to(path);
}

inline Model load_model(const std::filesystem::path& path) {
    detail::ByteReader in(detail::read_file(path), path.string());
    in.magic("AWSM");
    in.version();
    const std::uint32_t x = in.u32();
    const std::uint32_t y = in.u32();
    const std::uint32_t f = in.u32();
    if (x == 0 || y == 0 || f == 0) throw format_error(in.what() + ": zero lattice dimension");
    const std::uint64_t count = std::uint64_t{x} * y * f;
    if (count > in.remaining() / 8) throw format_error(in.what() + ": truncated weights");
    std::vector<double> weights(count);
    for (auto& w : weights) w = in.f64("weights");

    Model model;
    model.lattice = Lattice(x, y, f, std::move(weights));
    const std::uint8_t method = in.u8("normalization");
    if (method > 2) throw format_error(in.what() + ": unknown normalization method " + std::to_string(method));
    model.normalization.method = static_cast<NormMethod>(method);
    const std::uint32_t nf = in.u32("normalization");
    if (nf != 0 && nf != f) throw format_error(in.what() + ": normalization feature count mismatch");
    model.normalization.features.resize(nf);
    for (auto& p : model.normalization.features) {
        p.offset = in.f64("normalization");
        p.scale = in.f64("normalization");
        p.constant = in.u8("normalization") != 0;
    }
    in.expect_end();
    return model;
}

}  // namespace awesom
