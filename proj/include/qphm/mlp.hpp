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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

/**
 * @file mlp.hpp
 * Small dense feed-forward classifier: elu hidden layers, softmax output,
 * categorical cross-entropy, analytic backpropagation and Adam.
 */
namespace qphm::nn {

/// y = W x + b with W stored row-major (rows = outputs, cols = inputs).
struct DenseLayer {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> weights;
    std::vector<double> biases;

    DenseLayer() = default;
    DenseLayer(std::size_t out_dim, std::size_t in_dim)
        : rows(out_dim), cols(in_dim), weights(out_dim * in_dim, 0.0), biases(out_dim, 0.0) {}

    [[nodiscard]] double &w(std::size_t r, std::size_t c) { return weights[r * cols + c]; }
    [[nodiscard]] double w(std::size_t r, std::size_t c) const { return weights[r * cols + c]; }

    void validate() const {
        if (rows == 0 || cols == 0 || weights.size() != rows * cols || biases.size() != rows) {
            throw std::invalid_argument("dense layer dimensions are inconsistent");
        }
        auto finite = [](double v) { return std::isfinite(v); };
        if (!std::all_of(weights.begin(), weights.end(), finite) ||
            !std::all_of(biases.begin(), biases.end(), finite)) {
            throw std::invalid_argument("dense layer holds non-finite parameters");
        }
    }
    friend bool operator==(const DenseLayer &, const DenseLayer &) = default;
};

/// elu on every hidden layer, softmax on the last.
struct MlpModel {
    std::vector<DenseLayer> layers;

    [[nodiscard]] std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().cols; }
    [[nodiscard]] std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().rows; }

    [[nodiscard]] std::size_t num_parameters() const {
        std::size_t n = 0;
        for (const auto &l : layers) {
            n += l.weights.size() + l.biases.size();
        }
        return n;
    }

    void validate() const {
        if (layers.empty()) {
            throw std::invalid_argument("MLP has no layers");
        }
        for (std::size_t i = 0; i < layers.size(); ++i) {
            layers[i].validate();
            if (i > 0 && layers[i].cols != layers[i - 1].rows) {
                throw std::invalid_argument("MLP layer " + std::to_string(i) + " expects " +
                                            std::to_string(layers[i].cols) + " inputs but layer " +
                                            std::to_string(i - 1) + " produces " +
                                            std::to_string(layers[i - 1].rows));
            }
        }
    }
    friend bool operator==(const MlpModel &, const MlpModel &) = default;
};

inline constexpr double kEluAlpha = 1.0;

inline double elu(double x) { return x >= 0.0 ? x : kEluAlpha * std::expm1(x); }

/// Derivative of elu; 1 at exactly zero.
inline double elu_grad(double x) { return x >= 0.0 ? 1.0 : kEluAlpha * std::exp(x); }

/// Max-shifted softmax.
inline std::vector<double> softmax(std::span<const double> logits) {
    const double top = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - top);
        total += p[i];
    }
    for (double &v : p) {
        v /= total;
    }
    return p;
}

inline constexpr double kProbabilityFloor = 1e-12;

/// -ln(max(p[label], 1e-12)).
inline double cross_entropy(std::span<const double> probabilities, std::size_t label) {
    if (label >= probabilities.size()) {
        throw std::out_of_range("label " + std::to_string(label) + " out of range");
    }
    double total = 0.0;
    for (double p : probabilities) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("probability entry outside [0, 1]");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("probabilities do not sum to 1");
    }
    return -std::log(std::max(probabilities[label], kProbabilityFloor));
}

/// Per-layer inputs and pre-activations retained for backpropagation.
struct ForwardCache {
    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> pre_activations;
};

struct ForwardResult {
    std::vector<double> probabilities;
    ForwardCache cache;
};

inline ForwardResult mlp_forward(const MlpModel &model, std::span<const double> x) {
    if (model.layers.empty() || x.size() != model.input_dim()) {
        throw std::invalid_argument("input length " + std::to_string(x.size()) +
                                    " does not match MLP input dimension " +
                                    std::to_string(model.input_dim()));
    }
    ForwardResult out;
    std::vector<double> act(x.begin(), x.end());
    for (std::size_t li = 0; li < model.layers.size(); ++li) {
        const auto &layer = model.layers[li];
        std::vector<double> z(layer.rows);
        for (std::size_t r = 0; r < layer.rows; ++r) {
            double acc = layer.biases[r];
            for (std::size_t c = 0; c < layer.cols; ++c) {
                acc += layer.w(r, c) * act[c];
            }
            z[r] = acc;
        }
        out.cache.inputs.push_back(std::move(act));
        const bool last = li + 1 == model.layers.size();
        if (last) {
            out.probabilities = softmax(z);
        } else {
            act.resize(z.size());
            std::transform(z.begin(), z.end(), act.begin(), elu);
        }
        out.cache.pre_activations.push_back(std::move(z));
    }
    return out;
}

/// Gradients shaped like the model's layers, plus dL/dx for the input vector.
struct MlpGradients {
    std::vector<DenseLayer> layers;
    std::vector<double> input;
};

/**
 * Backpropagates the cross-entropy loss of one sample. Softmax and
 * cross-entropy are fused, giving dL/dlogits = p - onehot(label).
 */
inline MlpGradients mlp_backward(const MlpModel &model, const ForwardResult &forward,
                                 std::size_t label) {
    const auto &cache = forward.cache;
    const std::size_t nl = model.layers.size();
    if (cache.inputs.size() != nl || cache.pre_activations.size() != nl ||
        forward.probabilities.size() != model.output_dim()) {
        throw std::invalid_argument("forward cache does not match model depth");
    }
    for (std::size_t li = 0; li < nl; ++li) {
        if (cache.inputs[li].size() != model.layers[li].cols ||
            cache.pre_activations[li].size() != model.layers[li].rows) {
            throw std::invalid_argument("forward cache does not match layer " +
                                        std::to_string(li) + " shape");
        }
    }
    if (label >= model.output_dim()) {
        throw std::out_of_range("label " + std::to_string(label) + " out of range");
    }

    MlpGradients grads;
    grads.layers.resize(nl);
    std::vector<double> delta = forward.probabilities;
    delta[label] -= 1.0;
    for (std::size_t li = nl; li-- > 0;) {
        const auto &layer = model.layers[li];
        const auto &in = cache.inputs[li];
        DenseLayer g(layer.rows, layer.cols);
        for (std::size_t r = 0; r < layer.rows; ++r) {
            g.biases[r] = delta[r];
            for (std::size_t c = 0; c < layer.cols; ++c) {
                g.w(r, c) = delta[r] * in[c];
            }
        }
        std::vector<double> upstream(layer.cols, 0.0);
        for (std::size_t c = 0; c < layer.cols; ++c) {
            double acc = 0.0;
            for (std::size_t r = 0; r < layer.rows; ++r) {
                acc += layer.w(r, c) * delta[r];
            }
            upstream[c] = acc;
        }
        grads.layers[li] = std::move(g);
        if (li == 0) {
            grads.input = std::move(upstream);
        } else {
            const auto &z_prev = cache.pre_activations[li - 1];
            for (std::size_t c = 0; c < upstream.size(); ++c) {
                upstream[c] *= elu_grad(z_prev[c]);
            }
            delta = std::move(upstream);
        }
    }
    return grads;
}

inline double glorot_bound(std::size_t fan_in, std::size_t fan_out) {
    return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

/// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
inline MlpModel init_mlp(std::span<const std::size_t> shape, std::uint64_t seed) {
    if (shape.size() < 2 ||
        std::any_of(shape.begin(), shape.end(), [](std::size_t d) { return d == 0; })) {
        throw std::invalid_argument("MLP shape needs at least two positive dimensions");
    }
    std::mt19937_64 rng(seed);
    MlpModel model;
    for (std::size_t i = 0; i + 1 < shape.size(); ++i) {
        DenseLayer layer(shape[i + 1], shape[i]);
        const double bound = glorot_bound(shape[i], shape[i + 1]);
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (double &w : layer.weights) {
            w = dist(rng);
        }
        model.layers.push_back(std::move(layer));
    }
    return model;
}

// Flat parameter order: for each layer, weights (row-major) then biases.

inline void append_parameters(const MlpModel &model, std::vector<double> &out) {
    for (const auto &l : model.layers) {
        out.insert(out.end(), l.weights.begin(), l.weights.end());
        out.insert(out.end(), l.biases.begin(), l.biases.end());
    }
}

inline void append_parameters(const MlpGradients &grads, std::vector<double> &out) {
    for (const auto &l : grads.layers) {
        out.insert(out.end(), l.weights.begin(), l.weights.end());
        out.insert(out.end(), l.biases.begin(), l.biases.end());
    }
}

/// Reads parameters back from `flat` in append order; returns the count consumed.
inline std::size_t assign_parameters(MlpModel &model, std::span<const double> flat) {
    if (flat.size() < model.num_parameters()) {
        throw std::invalid_argument("flat parameter vector too short for MLP");
    }
    std::size_t pos = 0;
    for (auto &l : model.layers) {
        for (double &w : l.weights) {
            w = flat[pos++];
        }
        for (double &b : l.biases) {
            b = flat[pos++];
        }
    }
    return pos;
}

/// Adam with bias correction. Defaults beta1 0.9, beta2 0.999, eps 1e-8.
struct AdamState {
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t t = 0;
    std::vector<double> m;
    std::vector<double> v;

    AdamState() = default;
    AdamState(std::size_t num_parameters, double lr)
        : learning_rate(lr), m(num_parameters, 0.0), v(num_parameters, 0.0) {}
};

inline void adam_step(std::span<double> params, std::span<const double> grads,
                      AdamState &state) {
    if (params.size() != grads.size() || state.m.size() != params.size() ||
        state.v.size() != params.size()) {
        throw std::invalid_argument("Adam parameter, gradient and moment shapes disagree");
    }
    state.t += 1;
    const double t = static_cast<double>(state.t);
    const double correction1 = 1.0 - std::pow(state.beta1, t);
    const double correction2 = 1.0 - std::pow(state.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
        const double m_hat = state.m[i] / correction1;
        const double v_hat = state.v[i] / correction2;
        params[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
}

} // namespace qphm::nn
