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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qphm/data.hpp"
#include "qphm/mlp.hpp"
#include "qphm/pqc.hpp"

/**
 * @file hybrid.hpp
 * normalize -> angle-encode -> rotation PQC -> <Z> readout -> MLP -> softmax,
 * trained end to end with Adam on the PQC angles and MLP weights together.
 */
namespace qphm::hybrid {

inline constexpr std::array<std::size_t, 3> kDefaultMlpShape = {data::kNumFeatures, 10,
                                                                data::kNumClasses};

struct HybridModel {
    data::NormalizerParams normalizer;
    pqc::PqcParams pqc;
    nn::MlpModel mlp;

    /// Feature count = PQC qubits = MLP inputs; MLP emits one score per class.
    void validate() const {
        normalizer.validate();
        pqc.validate();
        mlp.validate();
        if (pqc.num_qubits() != data::kNumFeatures) {
            throw std::invalid_argument("PQC has " + std::to_string(pqc.num_qubits()) +
                                        " qubits, expected " +
                                        std::to_string(data::kNumFeatures));
        }
        if (mlp.input_dim() != pqc.num_qubits()) {
            throw std::invalid_argument("MLP input dimension " + std::to_string(mlp.input_dim()) +
                                        " does not match PQC qubit count " +
                                        std::to_string(pqc.num_qubits()));
        }
        if (mlp.output_dim() != data::kNumClasses) {
            throw std::invalid_argument("MLP must produce " + std::to_string(data::kNumClasses) +
                                        " class scores");
        }
    }

    [[nodiscard]] std::size_t num_parameters() const {
        return pqc.num_parameters() + mlp.num_parameters();
    }

    /// PQC angles (alpha, beta, gamma per qubit) followed by the MLP parameters.
    [[nodiscard]] std::vector<double> parameters() const {
        std::vector<double> flat;
        flat.reserve(num_parameters());
        for (const auto &t : pqc.angles) {
            flat.insert(flat.end(), {t.alpha, t.beta, t.gamma});
        }
        nn::append_parameters(mlp, flat);
        return flat;
    }

    void assign_parameters(std::span<const double> flat) {
        if (flat.size() != num_parameters()) {
            throw std::invalid_argument("parameter vector has wrong length");
        }
        std::size_t pos = 0;
        for (auto &t : pqc.angles) {
            t.alpha = flat[pos++];
            t.beta = flat[pos++];
            t.gamma = flat[pos++];
        }
        nn::assign_parameters(mlp, flat.subspan(pos));
    }

    friend bool operator==(const HybridModel &, const HybridModel &) = default;
};

/// Independent generator streams derived from one user seed (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

enum SeedStream : std::uint64_t { kPqcInit = 1, kMlpInit = 2, kShuffle = 3 };

/// PQC angles uniform in [0, 2 pi); Glorot-uniform MLP.
inline HybridModel init_hybrid(const data::NormalizerParams &normalizer, std::uint64_t seed) {
    HybridModel model;
    model.normalizer = normalizer;
    model.pqc = pqc::PqcParams(data::kNumFeatures);
    std::mt19937_64 rng(derive_seed(seed, kPqcInit));
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (auto &t : model.pqc.angles) {
        t.alpha = angle(rng);
        t.beta = angle(rng);
        t.gamma = angle(rng);
    }
    model.mlp = nn::init_mlp(kDefaultMlpShape, derive_seed(seed, kMlpInit));
    return model;
}

struct TrainConfig {
    double learning_rate = 0.01;
    std::size_t epochs = 150;
    std::size_t batch_size = 32;
    std::size_t num_runs = 25;
    std::uint64_t base_seed = 0;
    pqc::GradientMethod gradient_method = pqc::GradientMethod::parameter_shift;
    double fd_step = 1e-4;
    /// Worker threads for per-sample gradients; results are identical for any count.
    std::size_t num_threads = 1;

    void validate() const {
        if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
            throw std::invalid_argument("learning rate must be positive");
        }
        if (epochs == 0 || batch_size == 0 || num_runs == 0 || num_threads == 0) {
            throw std::invalid_argument("epochs, batch size, runs and threads must be positive");
        }
        if (!(fd_step > 0.0)) {
            throw std::invalid_argument("finite-difference step must be positive");
        }
    }
};

/// Normalized, clamped features of one sample, ready for encoding.
inline std::array<double, data::kNumFeatures> normalized_input(const HybridModel &model,
                                                               const data::FeatureVector &f) {
    return data::apply_normalizer(model.normalizer, f);
}

inline std::vector<double> hybrid_forward(const HybridModel &model,
                                          const std::array<double, data::kNumFeatures> &raw) {
    const auto x = data::apply_normalizer(model.normalizer, raw);
    const auto z = pqc::pqc_forward(x, model.pqc);
    return nn::mlp_forward(model.mlp, z.expectations).probabilities;
}

inline std::vector<double> hybrid_forward(const HybridModel &model, const data::FeatureVector &f) {
    return hybrid_forward(model, f.values());
}

inline std::size_t argmax(std::span<const double> p) {
    return static_cast<std::size_t>(std::distance(p.begin(), std::max_element(p.begin(), p.end())));
}

/// Batch-mean gradients in HybridModel::parameters() order, and the batch-mean loss.
struct HybridGradients {
    std::vector<double> flat;
    double loss = 0.0;

    /// d loss / d(alpha, beta, gamma) of qubit i.
    [[nodiscard]] pqc::RotationAngles pqc_block(std::size_t qubit) const {
        const std::size_t o = pqc::kAnglesPerQubit * qubit;
        return {flat[o], flat[o + 1], flat[o + 2]};
    }
};

namespace detail {

/// Writes one sample's gradient into `out` (length num_parameters) and returns its loss.
inline double sample_gradient(const HybridModel &model, const data::FeatureVector &sample,
                              pqc::GradientMethod method, double fd_step, std::span<double> out) {
    const auto x = normalized_input(model, sample);
    const auto z = pqc::pqc_forward(x, model.pqc);
    const auto fwd = nn::mlp_forward(model.mlp, z.expectations);
    const std::size_t label = data::class_index(sample.label);
    const double loss = nn::cross_entropy(fwd.probabilities, label);
    const auto g = nn::mlp_backward(model.mlp, fwd, label);
    const auto jac = pqc::pqc_gradient(x, model.pqc, method, fd_step);

    std::size_t pos = 0;
    for (std::size_t i = 0; i < model.pqc.num_qubits(); ++i) {
        for (std::size_t k = 0; k < pqc::kAnglesPerQubit; ++k) {
            out[pos++] = g.input[i] * jac.blocks[i][k];
        }
    }
    for (const auto &l : g.layers) {
        for (double w : l.weights) {
            out[pos++] = w;
        }
        for (double b : l.biases) {
            out[pos++] = b;
        }
    }
    return loss;
}

} // namespace detail

/**
 * Chain rule across the quantum/classical boundary:
 * dL/dtheta_(i,k) = dL/dz_i * d<Z_i>/dtheta_(i,k), where dL/dz comes from MLP
 * backpropagation and d<Z>/dtheta from parameter-shift or finite differences.
 *
 * Per-sample gradients may be computed on `num_threads` workers; they are
 * summed in sample order afterwards, so the result does not depend on the
 * thread count.
 */
inline HybridGradients hybrid_gradients(const HybridModel &model,
                                        std::span<const data::FeatureVector> batch,
                                        pqc::GradientMethod method =
                                            pqc::GradientMethod::parameter_shift,
                                        double fd_step = 1e-4, std::size_t num_threads = 1) {
    if (batch.empty()) {
        throw std::invalid_argument("gradient batch is empty");
    }
    const std::size_t np = model.num_parameters();
    std::vector<double> per_sample(batch.size() * np, 0.0);
    std::vector<double> losses(batch.size(), 0.0);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
            losses[s] = detail::sample_gradient(
                model, batch[s], method, fd_step,
                std::span<double>(per_sample).subspan(s * np, np));
        }
    };
    const std::size_t workers = std::min(num_threads, batch.size());
    if (workers <= 1) {
        work(0, batch.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (batch.size() + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t b = w * chunk;
            const std::size_t e = std::min(batch.size(), b + chunk);
            if (b < e) {
                pool.emplace_back(work, b, e);
            }
        }
        for (auto &t : pool) {
            t.join();
        }
    }

    HybridGradients out;
    out.flat.assign(np, 0.0);
    for (std::size_t s = 0; s < batch.size(); ++s) {
        for (std::size_t p = 0; p < np; ++p) {
            out.flat[p] += per_sample[s * np + p];
        }
        out.loss += losses[s];
    }
    const auto n = static_cast<double>(batch.size());
    for (double &g : out.flat) {
        g /= n;
    }
    out.loss /= n;
    return out;
}

/// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
    std::array<std::array<std::size_t, data::kNumClasses>, data::kNumClasses> counts{};

    void add(std::size_t truth, std::size_t predicted) { ++counts[truth][predicted]; }

    void merge(const ConfusionMatrix &other) {
        for (std::size_t r = 0; r < data::kNumClasses; ++r) {
            for (std::size_t c = 0; c < data::kNumClasses; ++c) {
                counts[r][c] += other.counts[r][c];
            }
        }
    }

    [[nodiscard]] std::size_t row_total(std::size_t r) const {
        return std::accumulate(counts[r].begin(), counts[r].end(), std::size_t{0});
    }
    [[nodiscard]] std::size_t total() const {
        std::size_t n = 0;
        for (std::size_t r = 0; r < data::kNumClasses; ++r) {
            n += row_total(r);
        }
        return n;
    }
    [[nodiscard]] std::size_t trace() const {
        std::size_t n = 0;
        for (std::size_t r = 0; r < data::kNumClasses; ++r) {
            n += counts[r][r];
        }
        return n;
    }
    [[nodiscard]] double accuracy() const {
        const std::size_t n = total();
        return n == 0 ? 0.0 : static_cast<double>(trace()) / static_cast<double>(n);
    }
    /// Row-normalized percentage; an empty row reports 0.
    [[nodiscard]] double row_percent(std::size_t r, std::size_t c) const {
        const std::size_t n = row_total(r);
        return n == 0 ? 0.0 : 100.0 * static_cast<double>(counts[r][c]) / static_cast<double>(n);
    }
    friend bool operator==(const ConfusionMatrix &, const ConfusionMatrix &) = default;
};

struct Evaluation {
    double accuracy = 0.0; ///< trace / total of `confusion`
    double loss = 0.0;     ///< mean cross-entropy
    ConfusionMatrix confusion;
};

inline Evaluation evaluate(const HybridModel &model, std::span<const data::FeatureVector> samples) {
    if (samples.empty()) {
        throw std::invalid_argument("cannot evaluate on an empty set");
    }
    Evaluation ev;
    for (const auto &s : samples) {
        const auto p = hybrid_forward(model, s);
        const std::size_t truth = data::class_index(s.label);
        ev.loss += nn::cross_entropy(p, truth);
        ev.confusion.add(truth, argmax(p));
    }
    ev.loss /= static_cast<double>(samples.size());
    ev.accuracy = ev.confusion.accuracy();
    return ev;
}

struct EpochPoint {
    std::size_t epoch = 0;
    double train_accuracy = 0.0;
    double train_loss = 0.0;
    friend bool operator==(const EpochPoint &, const EpochPoint &) = default;
};

struct RunMetrics {
    std::uint64_t seed = 0;
    /// Entry 0 is the freshly initialized model, entry e the model after epoch e.
    std::vector<EpochPoint> curve;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    double train_loss = 0.0;
    double test_loss = 0.0;
    ConfusionMatrix confusion; ///< test set
    friend bool operator==(const RunMetrics &, const RunMetrics &) = default;
};

struct TrainResult {
    HybridModel model;
    RunMetrics metrics;
};

inline void require_all_classes(std::span<const data::FeatureVector> samples,
                                const std::string &what) {
    std::array<std::size_t, data::kNumClasses> seen{};
    for (const auto &s : samples) {
        ++seen[data::class_index(s.label)];
    }
    for (std::size_t c = 0; c < data::kNumClasses; ++c) {
        if (seen[c] == 0) {
            throw std::invalid_argument(
                what + " has no samples of class " +
                std::string(data::label_name(static_cast<data::HealthState>(c))));
        }
    }
}

/**
 * One training run: fit the normalizer on the training split, initialize from
 * `seed`, then for each epoch shuffle (seeded) and take one joint Adam step per
 * mini-batch over PQC angles and MLP parameters.
 */
inline TrainResult train_run(const data::SplitDataset &dataset, const TrainConfig &config,
                             std::uint64_t seed) {
    config.validate();
    require_all_classes(dataset.train, "training set");
    if (dataset.test.empty()) {
        throw std::invalid_argument("test set is empty");
    }

    TrainResult result;
    HybridModel &model = result.model;
    model = init_hybrid(data::fit_normalizer(dataset.train), seed);
    RunMetrics &metrics = result.metrics;
    metrics.seed = seed;

    auto record = [&](std::size_t epoch) {
        const auto ev = evaluate(model, dataset.train);
        metrics.curve.push_back({epoch, ev.accuracy, ev.loss});
    };
    record(0);

    std::vector<double> params = model.parameters();
    nn::AdamState adam(params.size(), config.learning_rate);
    std::vector<std::size_t> order(dataset.train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(derive_seed(seed, kShuffle));
    std::vector<data::FeatureVector> batch;
    batch.reserve(config.batch_size);

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            batch.clear();
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            for (std::size_t k = start; k < end; ++k) {
                batch.push_back(dataset.train[order[k]]);
            }
            const auto grads = hybrid_gradients(model, batch, config.gradient_method,
                                                config.fd_step, config.num_threads);
            nn::adam_step(params, grads.flat, adam);
            model.assign_parameters(params);
        }
        record(epoch);
    }

    metrics.train_accuracy = metrics.curve.back().train_accuracy;
    metrics.train_loss = metrics.curve.back().train_loss;
    const auto test = evaluate(model, dataset.test);
    metrics.test_accuracy = test.accuracy;
    metrics.test_loss = test.loss;
    metrics.confusion = test.confusion;
    return result;
}

struct MetricSummary {
    double mean = 0.0;
    double std = 0.0; ///< sample standard deviation (n - 1)
};

inline MetricSummary summarize(std::span<const double> values) {
    if (values.size() < 2) {
        throw std::invalid_argument("summary needs at least 2 values");
    }
    MetricSummary s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) {
        ss += (v - s.mean) * (v - s.mean);
    }
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return s;
}

struct MultiRunReport {
    std::vector<RunMetrics> runs;
    MetricSummary train_accuracy;
    MetricSummary test_accuracy;
    MetricSummary train_loss;
    MetricSummary test_loss;
    /// Test-set confusion counts summed over all runs.
    ConfusionMatrix pooled_confusion;
    /// Model of the first run, kept for checkpointing.
    HybridModel first_model;
};

/**
 * Trains config.num_runs models (seeds base_seed, base_seed + 1, ...) on the
 * same split, or on an explicit seed list, and aggregates mean and sample std.
 */
inline MultiRunReport multi_seed_report(const data::SplitDataset &dataset, const TrainConfig &config,
                                        std::span<const std::uint64_t> seeds = {}) {
    config.validate();
    std::vector<std::uint64_t> run_seeds(seeds.begin(), seeds.end());
    if (run_seeds.empty()) {
        for (std::size_t r = 0; r < config.num_runs; ++r) {
            run_seeds.push_back(config.base_seed + r);
        }
    }
    if (run_seeds.size() < 2) {
        throw std::invalid_argument("a multi-seed report needs at least 2 runs");
    }
    MultiRunReport report;
    std::vector<double> tr_acc, te_acc, tr_loss, te_loss;
    for (std::size_t r = 0; r < run_seeds.size(); ++r) {
        auto run = train_run(dataset, config, run_seeds[r]);
        if (r == 0) {
            report.first_model = run.model;
        }
        tr_acc.push_back(run.metrics.train_accuracy);
        te_acc.push_back(run.metrics.test_accuracy);
        tr_loss.push_back(run.metrics.train_loss);
        te_loss.push_back(run.metrics.test_loss);
        report.pooled_confusion.merge(run.metrics.confusion);
        report.runs.push_back(std::move(run.metrics));
    }
    report.train_accuracy = summarize(tr_acc);
    report.test_accuracy = summarize(te_acc);
    // Every run scores the same test set, so the mean accuracy is the pooled
    // ratio; taking it from integer counts keeps the two bit-identical.
    report.test_accuracy.mean = report.pooled_confusion.accuracy();
    report.train_loss = summarize(tr_loss);
    report.test_loss = summarize(te_loss);
    return report;
}

} // namespace qphm::hybrid
