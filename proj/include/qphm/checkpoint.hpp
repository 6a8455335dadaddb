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

#include <cstdio>
#include <istream>
#include <iterator>
#include <ostream>
#include <span>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "qphm/data_io.hpp"
#include "qphm/error.hpp"
#include "qphm/hybrid.hpp"

/**
 * @file checkpoint.hpp
 * Hybrid model checkpoints as JSON:
 *
 *   { "version": 1,
 *     "normalizer": { "min": [5], "max": [5] },
 *     "pqc": { "num_qubits": 5, "angles": [[alpha, beta, gamma], ...] },
 *     "mlp": { "layers": [ { "rows", "cols", "weights": [rows*cols], "biases": [rows] } ] } }
 *
 * Numbers are written with 17 significant digits so a save/load round trip
 * restores every parameter bit for bit.
 */
namespace qphm::hybrid {

inline constexpr int kCheckpointVersion = 1;

namespace ckpt_detail {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_array(std::ostream &out, std::span<const double> values) {
    out << '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << (i ? ", " : "") << num(values[i]);
    }
    out << ']';
}

inline const nlohmann::json &field(const nlohmann::json &obj, const char *key,
                                   const std::string &path, const std::string &source) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ParseError(source, 0, "missing field " + path + key);
    }
    return obj.at(key);
}

inline std::vector<double> numbers(const nlohmann::json &arr, std::size_t expected,
                                   const std::string &path, const std::string &source) {
    if (!arr.is_array()) {
        throw ParseError(source, 0, "field " + path + " must be an array");
    }
    if (arr.size() != expected) {
        throw ParseError(source, 0,
                         "field " + path + ": expected " + std::to_string(expected) +
                             " numbers, got " + std::to_string(arr.size()));
    }
    std::vector<double> out;
    out.reserve(expected);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) {
            throw ParseError(source, 0, "field " + path + "[" + std::to_string(i) + "] is not a number");
        }
        out.push_back(arr[i].get<double>());
    }
    return out;
}

inline std::size_t count(const nlohmann::json &v, const std::string &path,
                         const std::string &source) {
    if (!v.is_number_unsigned() || v.get<std::size_t>() == 0) {
        throw ParseError(source, 0, "field " + path + " must be a positive integer");
    }
    return v.get<std::size_t>();
}

} // namespace ckpt_detail

inline void write_checkpoint(std::ostream &out, const HybridModel &model) {
    using ckpt_detail::write_array;
    model.validate();
    out << "{\n  \"version\": " << kCheckpointVersion << ",\n";
    out << "  \"normalizer\": {\n    \"min\": ";
    write_array(out, model.normalizer.min);
    out << ",\n    \"max\": ";
    write_array(out, model.normalizer.max);
    out << "\n  },\n";
    out << "  \"pqc\": {\n    \"num_qubits\": " << model.pqc.num_qubits() << ",\n    \"angles\": [";
    for (std::size_t i = 0; i < model.pqc.num_qubits(); ++i) {
        const auto &t = model.pqc.angles[i];
        const double triplet[3] = {t.alpha, t.beta, t.gamma};
        out << (i ? ",\n      " : "\n      ");
        write_array(out, triplet);
    }
    out << "\n    ]\n  },\n";
    out << "  \"mlp\": {\n    \"layers\": [";
    for (std::size_t li = 0; li < model.mlp.layers.size(); ++li) {
        const auto &l = model.mlp.layers[li];
        out << (li ? ",\n" : "\n") << "      {\n        \"rows\": " << l.rows
            << ",\n        \"cols\": " << l.cols << ",\n        \"weights\": ";
        write_array(out, l.weights);
        out << ",\n        \"biases\": ";
        write_array(out, l.biases);
        out << "\n      }";
    }
    out << "\n    ]\n  }\n}\n";
}

inline HybridModel read_checkpoint(std::istream &in, const std::string &source = "<checkpoint>") {
    using namespace ckpt_detail;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        // The message carries line and column of the offending byte.
        throw ParseError(source, 0, e.what());
    }
    const auto &version = field(doc, "version", "", source);
    if (!version.is_number_integer() || version.get<int>() != kCheckpointVersion) {
        throw ParseError(source, 0, "unsupported checkpoint version");
    }

    HybridModel model;
    const auto &norm = field(doc, "normalizer", "", source);
    const auto lo = numbers(field(norm, "min", "normalizer.", source), data::kNumFeatures,
                            "normalizer.min", source);
    const auto hi = numbers(field(norm, "max", "normalizer.", source), data::kNumFeatures,
                            "normalizer.max", source);
    std::copy(lo.begin(), lo.end(), model.normalizer.min.begin());
    std::copy(hi.begin(), hi.end(), model.normalizer.max.begin());

    const auto &q = field(doc, "pqc", "", source);
    const std::size_t nq = count(field(q, "num_qubits", "pqc.", source), "pqc.num_qubits", source);
    const auto &angles = field(q, "angles", "pqc.", source);
    if (!angles.is_array() || angles.size() != nq) {
        throw ParseError(source, 0, "field pqc.angles must hold num_qubits triplets");
    }
    model.pqc = pqc::PqcParams(nq);
    for (std::size_t i = 0; i < nq; ++i) {
        const auto t = numbers(angles[i], 3, "pqc.angles[" + std::to_string(i) + "]", source);
        model.pqc.angles[i] = {t[0], t[1], t[2]};
    }

    const auto &layers = field(field(doc, "mlp", "", source), "layers", "mlp.", source);
    if (!layers.is_array() || layers.empty()) {
        throw ParseError(source, 0, "field mlp.layers must be a nonempty array");
    }
    for (std::size_t li = 0; li < layers.size(); ++li) {
        const std::string p = "mlp.layers[" + std::to_string(li) + "].";
        const std::size_t rows = count(field(layers[li], "rows", p, source), p + "rows", source);
        const std::size_t cols = count(field(layers[li], "cols", p, source), p + "cols", source);
        nn::DenseLayer layer(rows, cols);
        layer.weights = numbers(field(layers[li], "weights", p, source), rows * cols, p + "weights", source);
        layer.biases = numbers(field(layers[li], "biases", p, source), rows, p + "biases", source);
        model.mlp.layers.push_back(std::move(layer));
    }

    try {
        model.validate();
    } catch (const std::invalid_argument &e) {
        throw ParseError(source, 0, std::string("invalid model: ") + e.what());
    }
    return model;
}

inline void save_checkpoint(const HybridModel &model, const std::string &path) {
    auto out = data::open_output(path);
    write_checkpoint(out, model);
    if (!out) {
        throw IoError("write to '" + path + "' failed");
    }
}

inline HybridModel load_checkpoint(const std::string &path) {
    auto in = data::open_input(path);
    return read_checkpoint(in, path);
}

} // namespace qphm::hybrid
