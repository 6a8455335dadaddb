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

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qphm/quantum_sim.hpp"

namespace qphm::encoding {

/// A normalized feature vector and the product state it encodes to.
struct EncodedInput {
    std::vector<double> source;
    sim::QuantumState state;
};

namespace detail {

inline void check_encodable(std::span<const double> x) {
    if (x.empty() || x.size() > sim::kMaxQubits) {
        throw std::invalid_argument("encoded vector length " + std::to_string(x.size()) +
                                    " outside [1, " + std::to_string(sim::kMaxQubits) + "]");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        // Negated form also rejects NaN.
        if (!(x[i] >= 0.0 && x[i] <= 1.0)) {
            throw std::domain_error("feature " + std::to_string(i) + " = " +
                                    std::to_string(x[i]) +
                                    " outside [0, 1]; normalize before encoding");
        }
    }
}

} // namespace detail

/// Ry angles pi * x_i, so that Ry(pi x_i)|0> = cos(pi x_i / 2)|0> + sin(pi x_i / 2)|1>.
inline std::vector<double> encode_as_ry_rotations(std::span<const double> x) {
    detail::check_encodable(x);
    std::vector<double> angles;
    angles.reserve(x.size());
    for (double v : x) {
        angles.push_back(std::numbers::pi * v);
    }
    return angles;
}

/**
 * Angle encoding: qubit i carries cos(pi x_i / 2)|0> + sin(pi x_i / 2)|1> and
 * the register is the tensor product over i. Values outside [0, 1] are
 * rejected rather than clamped.
 */
inline EncodedInput angle_encode(std::span<const double> x) {
    detail::check_encodable(x);
    auto qubit = [](double v) {
        const double half = std::numbers::pi * v / 2.0;
        return sim::QuantumState::from_amplitudes({{std::cos(half), 0.0}, {std::sin(half), 0.0}});
    };
    sim::QuantumState state = qubit(x[0]);
    for (std::size_t i = 1; i < x.size(); ++i) {
        state = sim::tensor_product(state, qubit(x[i]));
    }
    return {std::vector<double>(x.begin(), x.end()), std::move(state)};
}

} // namespace qphm::encoding
