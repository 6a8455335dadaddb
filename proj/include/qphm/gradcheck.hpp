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
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qphm/hybrid.hpp"
#include "qphm/mlp.hpp"
#include "qphm/pqc.hpp"

/**
 * @file gradcheck.hpp
 * Gradient self-test: every analytic or parameter-shift gradient in the
 * library is compared against central finite differences of the forward pass.
 */
namespace qphm::gradcheck {

struct CheckResult {
    std::string name;
    std::string metric;   ///< "abs" or "rel"
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct GradCheckOptions {
    std::uint64_t seed = 0;
    std::size_t pqc_draws = 100;
    std::size_t mlp_models = 20;
    std::size_t hybrid_configs = 10;
    /// Added to every analytic gradient entry before comparison. Test hook:
    /// a nonzero value must make the checks fail.
    double inject_error = 0.0;
};

struct GradCheckReport {
    std::vector<CheckResult> checks;
    [[nodiscard]] bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const auto &c) { return c.passed; });
    }
};

/// |a - b| / max(|a|, |b|, 1e-6); the floor keeps near-zero entries from
/// dominating through roundoff.
inline double relative_error(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

inline pqc::PqcParams random_pqc(std::size_t n, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> angle(-2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
    pqc::PqcParams p(n);
    for (auto &t : p.angles) {
        t = {angle(rng), angle(rng), angle(rng)};
    }
    return p;
}

inline std::vector<double> random_unit_vector(std::size_t n, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> x(n);
    for (double &v : x) {
        v = unit(rng);
    }
    return x;
}

/// Glorot weights with random (nonzero) biases so every parameter is exercised.
inline nn::MlpModel random_mlp(std::mt19937_64 &rng) {
    auto model = nn::init_mlp(hybrid::kDefaultMlpShape, rng());
    std::uniform_real_distribution<double> bias(-0.5, 0.5);
    for (auto &l : model.layers) {
        for (double &b : l.biases) {
            b = bias(rng);
        }
    }
    return model;
}

/// Parameter-shift vs. central differences (h = 1e-4) on the PQC, plus gamma nullity.
inline std::vector<CheckResult> check_pqc(const GradCheckOptions &opt) {
    std::mt19937_64 rng(hybrid::derive_seed(opt.seed, 11));
    double worst = 0.0;
    double worst_gamma = 0.0;
    for (std::size_t d = 0; d < opt.pqc_draws; ++d) {
        const auto x = random_unit_vector(data::kNumFeatures, rng);
        const auto params = random_pqc(data::kNumFeatures, rng);
        const auto shift = pqc::pqc_gradient_parameter_shift(x, params);
        const auto fd = pqc::pqc_gradient_finite_difference(x, params, 1e-4);
        for (std::size_t i = 0; i < params.num_qubits(); ++i) {
            for (std::size_t k = 0; k < pqc::kAnglesPerQubit; ++k) {
                const double analytic = shift.blocks[i][k] + opt.inject_error;
                worst = std::max(worst, std::abs(analytic - fd.blocks[i][k]));
            }
            worst_gamma = std::max(worst_gamma, std::abs(shift.blocks[i].gamma + opt.inject_error));
        }
    }
    return {{"pqc parameter-shift vs finite difference", "abs", worst, 1e-6, worst <= 1e-6},
            {"pqc gamma gradient nullity", "abs", worst_gamma, 1e-12, worst_gamma < 1e-12}};
}

/// Backpropagation vs. central differences (h = 1e-5) over weights, biases and inputs.
inline CheckResult check_mlp(const GradCheckOptions &opt) {
    std::mt19937_64 rng(hybrid::derive_seed(opt.seed, 12));
    std::uniform_real_distribution<double> input(-1.0, 1.0);
    std::uniform_int_distribution<std::size_t> label_dist(0, data::kNumClasses - 1);
    constexpr double h = 1e-5;
    double worst = 0.0;
    for (std::size_t m = 0; m < opt.mlp_models; ++m) {
        auto model = random_mlp(rng);
        std::vector<double> x(model.input_dim());
        for (double &v : x) {
            v = input(rng);
        }
        const std::size_t label = label_dist(rng);
        auto loss = [&](const nn::MlpModel &mdl, const std::vector<double> &in) {
            return nn::cross_entropy(nn::mlp_forward(mdl, in).probabilities, label);
        };
        const auto grads = nn::mlp_backward(model, nn::mlp_forward(model, x), label);

        std::vector<double> analytic;
        nn::append_parameters(grads, analytic);
        std::vector<double> flat;
        nn::append_parameters(model, flat);
        for (std::size_t p = 0; p < flat.size(); ++p) {
            auto probe = model;
            auto shifted = flat;
            shifted[p] = flat[p] + h;
            nn::assign_parameters(probe, shifted);
            const double up = loss(probe, x);
            shifted[p] = flat[p] - h;
            nn::assign_parameters(probe, shifted);
            const double down = loss(probe, x);
            worst = std::max(worst, relative_error(analytic[p] + opt.inject_error, (up - down) / (2 * h)));
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            auto xs = x;
            xs[i] = x[i] + h;
            const double up = loss(model, xs);
            xs[i] = x[i] - h;
            const double down = loss(model, xs);
            worst = std::max(worst, relative_error(grads.input[i] + opt.inject_error,
                                                   (up - down) / (2 * h)));
        }
    }
    return {"mlp backprop vs finite difference", "rel", worst, 1e-5, worst < 1e-5};
}

/// Batch-mean loss of a hybrid model over a set of samples.
inline double hybrid_loss(const hybrid::HybridModel &model,
                          std::span<const data::FeatureVector> batch) {
    double acc = 0.0;
    for (const auto &s : batch) {
        acc += nn::cross_entropy(hybrid::hybrid_forward(model, s), data::class_index(s.label));
    }
    return acc / static_cast<double>(batch.size());
}

/// Random model plus a small batch of raw feature vectors inside the normalizer range.
struct HybridProbe {
    hybrid::HybridModel model;
    std::vector<data::FeatureVector> batch;
};

inline HybridProbe random_hybrid_probe(std::mt19937_64 &rng, std::size_t batch_size = 6) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    data::NormalizerParams norm;
    for (std::size_t i = 0; i < data::kNumFeatures; ++i) {
        norm.min[i] = -1.0 + unit(rng);
        norm.max[i] = norm.min[i] + 0.5 + 2.0 * unit(rng);
    }
    HybridProbe probe;
    probe.model = hybrid::init_hybrid(norm, rng());
    probe.model.mlp = random_mlp(rng);
    for (std::size_t s = 0; s < batch_size; ++s) {
        std::array<double, data::kNumFeatures> v{};
        for (std::size_t i = 0; i < data::kNumFeatures; ++i) {
            // Stay strictly inside the range so clamping never flattens the loss.
            v[i] = norm.min[i] + (0.02 + 0.96 * unit(rng)) * (norm.max[i] - norm.min[i]);
        }
        probe.batch.push_back({v[0], v[1], v[2], v[3], v[4],
                               static_cast<data::HealthState>(s % data::kNumClasses)});
    }
    return probe;
}

/// End-to-end hybrid gradients vs. central differences (h = 1e-4) over every parameter.
inline CheckResult check_hybrid(const GradCheckOptions &opt) {
    std::mt19937_64 rng(hybrid::derive_seed(opt.seed, 13));
    constexpr double h = 1e-4;
    double worst = 0.0;
    for (std::size_t c = 0; c < opt.hybrid_configs; ++c) {
        auto probe = random_hybrid_probe(rng);
        const auto grads = hybrid::hybrid_gradients(probe.model, probe.batch);
        const auto flat = probe.model.parameters();
        auto model = probe.model;
        for (std::size_t p = 0; p < flat.size(); ++p) {
            auto shifted = flat;
            shifted[p] = flat[p] + h;
            model.assign_parameters(shifted);
            const double up = hybrid_loss(model, probe.batch);
            shifted[p] = flat[p] - h;
            model.assign_parameters(shifted);
            const double down = hybrid_loss(model, probe.batch);
            worst = std::max(worst, std::abs(grads.flat[p] + opt.inject_error - (up - down) / (2 * h)));
        }
    }
    return {"hybrid end-to-end vs finite difference", "abs", worst, 1e-4, worst <= 1e-4};
}

inline GradCheckReport run_gradient_checks(const GradCheckOptions &opt = {}) {
    GradCheckReport report;
    report.checks = check_pqc(opt);
    report.checks.push_back(check_mlp(opt));
    report.checks.push_back(check_hybrid(opt));
    return report;
}

} // namespace qphm::gradcheck
