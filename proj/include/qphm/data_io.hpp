// Copyright 2026 The qphm Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "qphm/data.hpp"
#include "qphm/error.hpp"

/**
 * @file data_io.hpp
 * CSV bridges for raw signals and feature tables.
 *
 * Signal CSV: an optional first line `label,load_lbs,sample_rate_hz`, then one
 * block per signal. A block starts with a metadata line holding those three
 * fields (e.g. `outer_ring,150,48828`) followed by one sample per line; blocks
 * are separated by blank lines.
 *
 * Feature CSV: header `mean,variance,max_amplitude,peak_to_peak,rms,label`,
 * one row per sample, numbers printed with 17 significant digits.
 */
namespace qphm::data {

inline constexpr std::string_view kSignalHeader = "label,load_lbs,sample_rate_hz";
inline constexpr std::string_view kFeatureHeader =
    "mean,variance,max_amplitude,peak_to_peak,rms,label";

namespace io_detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return fields;
}

inline bool parse_double(std::string_view text, double &out) {
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    const char *end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end && !text.empty();
}

inline std::string format_double(double v, int digits) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

} // namespace io_detail

/// Significant digits used for stored signal samples.
inline constexpr int kSignalDigits = 9;
/// Significant digits used for feature values; exact round trip for doubles.
inline constexpr int kFeatureDigits = 17;

inline void write_signals_csv(std::ostream &out, std::span<const RawSignal> signals) {
    out << kSignalHeader << '\n';
    for (std::size_t i = 0; i < signals.size(); ++i) {
        const auto &s = signals[i];
        if (i > 0) {
            out << '\n';
        }
        out << label_name(s.label) << ',' << io_detail::format_double(s.load_lbs, 17) << ','
            << io_detail::format_double(s.sample_rate_hz, 17) << '\n';
        for (double x : s.samples) {
            out << io_detail::format_double(x, kSignalDigits) << '\n';
        }
    }
}

inline std::vector<RawSignal> read_signals_csv(std::istream &in,
                                               const std::string &source = "<signals>") {
    std::vector<RawSignal> signals;
    std::string line;
    std::size_t line_no = 0;
    bool in_block = false;
    auto finish_block = [&](std::size_t at) {
        if (in_block && signals.back().samples.empty()) {
            throw ParseError(source, at, "signal block has no samples");
        }
        in_block = false;
    };
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = io_detail::trim(line);
        if (text.empty()) {
            finish_block(line_no);
            continue;
        }
        if (text == kSignalHeader) {
            if (in_block && !signals.back().samples.empty()) {
                throw ParseError(source, line_no, "header inside a sample block");
            }
            continue;
        }
        if (!in_block) {
            const auto fields = io_detail::split_fields(text);
            if (fields.size() != 3) {
                throw ParseError(source, line_no,
                                 "expected metadata line 'label,load_lbs,sample_rate_hz', got " +
                                     std::to_string(fields.size()) + " fields");
            }
            RawSignal sig;
            const auto label = parse_label(fields[0]);
            if (!label) {
                throw ParseError(source, line_no,
                                 "unknown label '" + std::string(fields[0]) +
                                     "' (expected baseline, outer_ring or inner_ring)");
            }
            sig.label = *label;
            if (!io_detail::parse_double(fields[1], sig.load_lbs)) {
                throw ParseError(source, line_no, "field load_lbs is not a number");
            }
            if (!io_detail::parse_double(fields[2], sig.sample_rate_hz) ||
                !(sig.sample_rate_hz > 0.0)) {
                throw ParseError(source, line_no, "field sample_rate_hz must be a positive number");
            }
            signals.push_back(std::move(sig));
            in_block = true;
            continue;
        }
        double v = 0.0;
        if (!io_detail::parse_double(text, v) || !std::isfinite(v)) {
            throw ParseError(source, line_no, "sample '" + std::string(text) + "' is not a finite number");
        }
        signals.back().samples.push_back(v);
    }
    finish_block(line_no);
    return signals;
}

inline void write_features_csv(std::ostream &out, std::span<const FeatureVector> features) {
    out << kFeatureHeader << '\n';
    for (const auto &f : features) {
        for (double v : f.values()) {
            out << io_detail::format_double(v, kFeatureDigits) << ',';
        }
        out << label_name(f.label) << '\n';
    }
}

inline std::vector<FeatureVector> read_features_csv(std::istream &in,
                                                    const std::string &source = "<features>") {
    std::vector<FeatureVector> rows;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        throw ParseError(source, 1, "missing header");
    }
    ++line_no;
    if (io_detail::trim(line) != kFeatureHeader) {
        throw ParseError(source, 1, "expected header '" + std::string(kFeatureHeader) + "'");
    }
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = io_detail::trim(line);
        if (text.empty()) {
            continue;
        }
        const auto fields = io_detail::split_fields(text);
        if (fields.size() != kNumFeatures + 1) {
            throw ParseError(source, line_no,
                             "expected " + std::to_string(kNumFeatures + 1) + " columns, got " +
                                 std::to_string(fields.size()));
        }
        std::array<double, kNumFeatures> v{};
        for (std::size_t i = 0; i < kNumFeatures; ++i) {
            if (!io_detail::parse_double(fields[i], v[i]) || !std::isfinite(v[i])) {
                throw ParseError(source, line_no,
                                 "column " + std::string(kFeatureNames[i]) + " is not a finite number");
            }
        }
        const auto label = parse_label(fields[kNumFeatures]);
        if (!label) {
            throw ParseError(source, line_no,
                             "unknown label '" + std::string(fields[kNumFeatures]) + "'");
        }
        rows.push_back({v[0], v[1], v[2], v[3], v[4], *label});
    }
    return rows;
}

inline std::ifstream open_input(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    return in;
}

inline std::ofstream open_output(const std::string &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    return out;
}

inline std::vector<RawSignal> load_signals_csv(const std::string &path) {
    auto in = open_input(path);
    return read_signals_csv(in, path);
}

inline std::vector<FeatureVector> load_features_csv(const std::string &path) {
    auto in = open_input(path);
    return read_features_csv(in, path);
}

inline void save_signals_csv(std::span<const RawSignal> signals, const std::string &path) {
    auto out = open_output(path);
    write_signals_csv(out, signals);
    if (!out) {
        throw IoError("write to '" + path + "' failed");
    }
}

inline void save_features_csv(std::span<const FeatureVector> features, const std::string &path) {
    auto out = open_output(path);
    write_features_csv(out, features);
    if (!out) {
        throw IoError("write to '" + path + "' failed");
    }
}

} // namespace qphm::data
