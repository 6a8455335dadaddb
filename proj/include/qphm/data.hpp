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
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

/**
 * @file data.hpp
 * Vibration-signal preprocessing: decimation, overlapping segmentation,
 * time-domain features, min-max normalization, stratified splitting and a
 * seeded synthetic bearing-signal generator.
 */
namespace qphm::data {

enum class HealthState : std::uint8_t { baseline = 0, outer_ring = 1, inner_ring = 2 };

inline constexpr std::size_t kNumClasses = 3;
inline constexpr std::size_t kNumFeatures = 5;

/// Identifier used in CSV files.
inline std::string_view label_name(HealthState s) {
    switch (s) {
    case HealthState::baseline:
        return "baseline";
    case HealthState::outer_ring:
        return "outer_ring";
    case HealthState::inner_ring:
        return "inner_ring";
    }
    return "?";
}

/// Short display label: ND (no damage), OR, IR.
inline std::string_view label_abbrev(HealthState s) {
    switch (s) {
    case HealthState::baseline:
        return "ND";
    case HealthState::outer_ring:
        return "OR";
    case HealthState::inner_ring:
        return "IR";
    }
    return "?";
}

inline std::optional<HealthState> parse_label(std::string_view text) {
    for (std::size_t k = 0; k < kNumClasses; ++k) {
        const auto s = static_cast<HealthState>(k);
        if (text == label_name(s)) {
            return s;
        }
    }
    return std::nullopt;
}

inline std::size_t class_index(HealthState s) { return static_cast<std::size_t>(s); }

struct RawSignal {
    std::vector<double> samples;
    double sample_rate_hz = 0.0;
    HealthState label = HealthState::baseline;
    double load_lbs = 0.0;

    void validate() const {
        if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
            throw std::invalid_argument("sample rate must be positive");
        }
        if (samples.empty()) {
            throw std::invalid_argument("signal has no samples");
        }
    }
    friend bool operator==(const RawSignal &, const RawSignal &) = default;
};

struct Segment {
    std::vector<double> samples;
    HealthState label = HealthState::baseline;
};

struct FeatureVector {
    double mean = 0.0;
    double variance = 0.0;
    double max_amplitude = 0.0;
    double peak_to_peak = 0.0;
    double rms = 0.0;
    HealthState label = HealthState::baseline;

    [[nodiscard]] std::array<double, kNumFeatures> values() const {
        return {mean, variance, max_amplitude, peak_to_peak, rms};
    }
    friend bool operator==(const FeatureVector &, const FeatureVector &) = default;
};

inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "mean", "variance", "max_amplitude", "peak_to_peak", "rms"};

/// Defaults of the bearing pipeline.
inline constexpr double kTargetRateHz = 48828.0;
inline constexpr std::size_t kSegmentLength = 4000;
inline constexpr std::size_t kSegmentOverlap = 200;

/// Keeps every k-th sample, k = sample_rate / target_rate (no anti-alias filter).
inline RawSignal downsample(const RawSignal &signal, double target_rate_hz) {
    signal.validate();
    if (!(target_rate_hz > 0.0)) {
        throw std::invalid_argument("target rate must be positive");
    }
    const double ratio = signal.sample_rate_hz / target_rate_hz;
    const double k = std::round(ratio);
    if (k < 1.0 || std::abs(ratio - k) > 1e-9 * ratio) {
        throw std::invalid_argument("sample rate " + std::to_string(signal.sample_rate_hz) +
                                    " Hz is not an integer multiple of " +
                                    std::to_string(target_rate_hz) + " Hz");
    }
    const auto step = static_cast<std::size_t>(k);
    RawSignal out;
    out.sample_rate_hz = target_rate_hz;
    out.label = signal.label;
    out.load_lbs = signal.load_lbs;
    out.samples.reserve(signal.samples.size() / step + 1);
    for (std::size_t i = 0; i < signal.samples.size(); i += step) {
        out.samples.push_back(signal.samples[i]);
    }
    return out;
}

/// Number of windows of `length` with stride length - overlap; trailing remainder dropped.
inline std::size_t segment_count(std::size_t signal_length, std::size_t length,
                                 std::size_t overlap) {
    if (length == 0 || overlap >= length) {
        throw std::invalid_argument("segment length must exceed overlap");
    }
    if (signal_length < length) {
        return 0;
    }
    return (signal_length - length) / (length - overlap) + 1;
}

inline std::vector<Segment> segment(const RawSignal &signal,
                                    std::size_t length = kSegmentLength,
                                    std::size_t overlap = kSegmentOverlap) {
    const std::size_t count = segment_count(signal.samples.size(), length, overlap);
    if (count == 0) {
        throw std::invalid_argument("signal of " + std::to_string(signal.samples.size()) +
                                    " samples is shorter than segment length " +
                                    std::to_string(length));
    }
    const std::size_t stride = length - overlap;
    std::vector<Segment> out;
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        const auto first = signal.samples.begin() + static_cast<std::ptrdiff_t>(s * stride);
        out.push_back({std::vector<double>(first, first + static_cast<std::ptrdiff_t>(length)),
                       signal.label});
    }
    return out;
}

/// Mean, population variance, max |x|, max - min and rms of a window.
inline FeatureVector extract_features(std::span<const double> samples, HealthState label) {
    if (samples.empty()) {
        throw std::invalid_argument("cannot extract features from an empty segment");
    }
    const auto n = static_cast<double>(samples.size());
    double sum = 0.0;
    double sum_sq = 0.0;
    double lo = samples.front();
    double hi = samples.front();
    double max_abs = 0.0;
    for (double x : samples) {
        sum += x;
        sum_sq += x * x;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        max_abs = std::max(max_abs, std::abs(x));
    }
    FeatureVector f;
    f.label = label;
    f.mean = sum / n;
    double centered = 0.0;
    for (double x : samples) {
        centered += (x - f.mean) * (x - f.mean);
    }
    f.variance = centered / n;
    f.max_amplitude = max_abs;
    f.peak_to_peak = hi - lo;
    f.rms = std::sqrt(sum_sq / n);
    return f;
}

inline FeatureVector extract_features(const Segment &seg) {
    return extract_features(seg.samples, seg.label);
}

/// Per-feature min/max fitted on training data.
struct NormalizerParams {
    std::array<double, kNumFeatures> min{};
    std::array<double, kNumFeatures> max{};

    void validate() const {
        for (std::size_t i = 0; i < kNumFeatures; ++i) {
            if (!std::isfinite(min[i]) || !std::isfinite(max[i]) || max[i] < min[i]) {
                throw std::invalid_argument("normalizer bounds invalid for feature " +
                                            std::string(kFeatureNames[i]));
            }
        }
    }
    friend bool operator==(const NormalizerParams &, const NormalizerParams &) = default;
};

inline NormalizerParams fit_normalizer(std::span<const FeatureVector> train) {
    if (train.size() < 2) {
        throw std::invalid_argument("normalizer needs at least 2 training samples");
    }
    NormalizerParams p;
    p.min = train.front().values();
    p.max = p.min;
    for (const auto &f : train) {
        const auto v = f.values();
        for (std::size_t i = 0; i < kNumFeatures; ++i) {
            p.min[i] = std::min(p.min[i], v[i]);
            p.max[i] = std::max(p.max[i], v[i]);
        }
    }
    return p;
}

/// (x - min) / (max - min) clamped to [0, 1]; constant features map to 0.5.
inline std::array<double, kNumFeatures>
apply_normalizer(const NormalizerParams &p, const std::array<double, kNumFeatures> &raw) {
    std::array<double, kNumFeatures> out{};
    for (std::size_t i = 0; i < kNumFeatures; ++i) {
        if (!std::isfinite(raw[i])) {
            throw std::invalid_argument("feature " + std::string(kFeatureNames[i]) +
                                        " is not finite");
        }
        const double span = p.max[i] - p.min[i];
        out[i] = span > 0.0 ? std::clamp((raw[i] - p.min[i]) / span, 0.0, 1.0) : 0.5;
    }
    return out;
}

inline std::array<double, kNumFeatures> apply_normalizer(const NormalizerParams &p,
                                                         const FeatureVector &f) {
    return apply_normalizer(p, f.values());
}

struct SplitDataset {
    std::vector<FeatureVector> train;
    std::vector<FeatureVector> test;
};

/**
 * Seeded stratified split: each class is shuffled independently and
 * ceil(fraction * n_class) samples go to training. Output keeps class order.
 */
inline SplitDataset split(std::span<const FeatureVector> dataset, double train_fraction,
                          std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("train fraction must lie strictly between 0 and 1");
    }
    std::array<std::vector<std::size_t>, kNumClasses> by_class;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        by_class[class_index(dataset[i].label)].push_back(i);
    }
    std::mt19937_64 rng(seed);
    SplitDataset out;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        auto &idx = by_class[c];
        if (idx.empty()) {
            throw std::invalid_argument("class " +
                                        std::string(label_name(static_cast<HealthState>(c))) +
                                        " has no samples");
        }
        std::shuffle(idx.begin(), idx.end(), rng);
        const auto n_train = static_cast<std::size_t>(
            std::ceil(train_fraction * static_cast<double>(idx.size()) - 1e-9));
        for (std::size_t k = 0; k < idx.size(); ++k) {
            (k < n_train ? out.train : out.test).push_back(dataset[idx[k]]);
        }
    }
    return out;
}

/// downsample -> segment -> extract_features for one signal.
inline std::vector<FeatureVector> signal_features(const RawSignal &signal,
                                                  double target_rate_hz = kTargetRateHz,
                                                  std::size_t length = kSegmentLength,
                                                  std::size_t overlap = kSegmentOverlap) {
    const RawSignal uniform = downsample(signal, target_rate_hz);
    std::vector<FeatureVector> out;
    for (const auto &seg : segment(uniform, length, overlap)) {
        out.push_back(extract_features(seg));
    }
    return out;
}

/**
 * Synthetic bearing test-rig signals.
 *
 * baseline:   shaft-rate sinusoid plus white noise.
 * outer_ring: baseline plus an impulse train at the outer-race fault rate,
 *             each impulse ringing at a structural resonance and decaying
 *             exponentially.
 * inner_ring: the same impulse mechanism at the inner-race fault rate with
 *             impulse amplitude modulated at the shaft rate.
 *
 * Per-signal load, noise level and impulse strength are jittered so the
 * classes overlap somewhat in feature space. Baseline records are produced at
 * twice the fault-record rate, so the pipeline's decimation step is exercised.
 */
struct SynthConfig {
    std::size_t per_class = 12;         ///< signals per class
    double duration_s = 3.0;            ///< record length
    double baseline_rate_hz = 97656.0;  ///< baseline sample rate
    double fault_rate_hz = 48828.0;     ///< outer/inner ring sample rate
    double shaft_hz = 25.0;
    double shaft_amplitude = 0.3;
    double noise_std = 0.25;             ///< white-noise std (before jitter)
    double noise_jitter = 0.25;         ///< relative per-signal noise-level spread
    double outer_fault_hz = 81.125;
    double inner_fault_hz = 118.875;
    double resonance_hz = 2900.0;
    double decay_per_s = 1200.0;
    double outer_impulse = 1.2;
    double inner_impulse = 3.6;
    double impulse_jitter = 0.25;       ///< relative per-signal impulse-strength spread
    double inner_modulation_depth = 0.8;

    void validate() const {
        auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
        auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
        if (per_class == 0) {
            throw std::invalid_argument("per_class must be positive");
        }
        if (!positive(duration_s) || !positive(baseline_rate_hz) || !positive(fault_rate_hz) ||
            !positive(shaft_hz) || !positive(outer_fault_hz) || !positive(inner_fault_hz) ||
            !positive(resonance_hz) || !positive(decay_per_s)) {
            throw std::invalid_argument("synth durations, rates and frequencies must be positive");
        }
        if (!nonneg(shaft_amplitude) || !nonneg(noise_std) || !nonneg(outer_impulse) ||
            !nonneg(inner_impulse)) {
            throw std::invalid_argument("synth amplitudes and noise level must be nonnegative");
        }
        if (!(noise_jitter >= 0.0 && noise_jitter < 1.0) ||
            !(impulse_jitter >= 0.0 && impulse_jitter < 1.0) ||
            !(inner_modulation_depth >= 0.0 && inner_modulation_depth <= 1.0)) {
            throw std::invalid_argument("synth jitter fractions must lie in [0, 1)");
        }
    }
};

namespace detail {

/// Adds a decaying resonance burst at every fault period.
inline void add_impulse_train(std::vector<double> &x, double rate_hz, double fault_hz,
                              double amplitude, const SynthConfig &cfg, double phase_s,
                              bool modulate) {
    const double period = 1.0 / fault_hz;
    const double ring_s = 5.0 / cfg.decay_per_s;
    const auto ring_len = static_cast<std::size_t>(ring_s * rate_hz);
    const double duration = static_cast<double>(x.size()) / rate_hz;
    for (double t0 = phase_s; t0 < duration; t0 += period) {
        double a = amplitude;
        if (modulate) {
            a *= 1.0 - cfg.inner_modulation_depth *
                           0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * cfg.shaft_hz * t0));
        }
        const auto start = static_cast<std::size_t>(std::ceil(t0 * rate_hz));
        for (std::size_t k = start; k < std::min(x.size(), start + ring_len); ++k) {
            const double dt = static_cast<double>(k) / rate_hz - t0;
            x[k] += a * std::exp(-cfg.decay_per_s * dt) *
                    std::sin(2.0 * std::numbers::pi * cfg.resonance_hz * dt);
        }
    }
}

} // namespace detail

/// Signals in class-major order: per_class baseline, then outer_ring, then inner_ring.
inline std::vector<RawSignal> synth_generate(const SynthConfig &cfg, std::uint64_t seed) {
    cfg.validate();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    constexpr std::array<double, 7> loads = {0.0, 50.0, 100.0, 150.0, 200.0, 250.0, 300.0};

    std::vector<RawSignal> out;
    out.reserve(kNumClasses * cfg.per_class);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        const auto label = static_cast<HealthState>(c);
        for (std::size_t s = 0; s < cfg.per_class; ++s) {
            RawSignal sig;
            sig.label = label;
            sig.sample_rate_hz =
                label == HealthState::baseline ? cfg.baseline_rate_hz : cfg.fault_rate_hz;
            sig.load_lbs = label == HealthState::baseline ? 270.0 : loads[s % loads.size()];
            const auto n = static_cast<std::size_t>(std::round(cfg.duration_s * sig.sample_rate_hz));
            sig.samples.assign(n, 0.0);

            const double shaft_phase = 2.0 * std::numbers::pi * unit(rng);
            const double noise =
                cfg.noise_std * (1.0 + cfg.noise_jitter * (2.0 * unit(rng) - 1.0));
            const double impulse_scale = 1.0 + cfg.impulse_jitter * (2.0 * unit(rng) - 1.0);
            const double impulse_phase = unit(rng);
            for (std::size_t k = 0; k < n; ++k) {
                const double t = static_cast<double>(k) / sig.sample_rate_hz;
                sig.samples[k] = cfg.shaft_amplitude *
                                     std::sin(2.0 * std::numbers::pi * cfg.shaft_hz * t + shaft_phase) +
                                 noise * gauss(rng);
            }
            if (label == HealthState::outer_ring) {
                detail::add_impulse_train(sig.samples, sig.sample_rate_hz, cfg.outer_fault_hz,
                                          cfg.outer_impulse * impulse_scale, cfg,
                                          impulse_phase / cfg.outer_fault_hz, false);
            } else if (label == HealthState::inner_ring) {
                detail::add_impulse_train(sig.samples, sig.sample_rate_hz, cfg.inner_fault_hz,
                                          cfg.inner_impulse * impulse_scale, cfg,
                                          impulse_phase / cfg.inner_fault_hz, true);
            }
            out.push_back(std::move(sig));
        }
    }
    return out;
}

} // namespace qphm::data
