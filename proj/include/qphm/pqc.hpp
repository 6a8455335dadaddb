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

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qphm/encoding.hpp"
#include "qphm/quantum_sim.hpp"

/**
 * @file pqc.hpp
 * Trainable rotation circuit: on every qubit, encoding Ry(pi x_i) followed by
 * Ry(alpha_i), Rx(beta_i), Rz(gamma_i), read out as <Z_i>.
 *
 * There are no entangling gates, so qubit i's angles only influence <Z_i> and
 * the Jacobian is block diagonal. Gradients are stored in that compressed
 * block form: one (d/dalpha, d/dbeta, d/dgamma) triplet per qubit.
 */
namespace qphm::pqc {

struct RotationAngles {
    double alpha = 0.0; ///< Ry
    double beta = 0.0;  ///< Rx
    double gamma = 0.0; ///< Rz

    [[nodiscard]] double &operator[](std::size_t k) {
        return k == 0 ? alpha : (k == 1 ? beta : gamma);
    }
    [[nodiscard]] double operator[](std::size_t k) const {
        return k == 0 ? alpha : (k == 1 ? beta : gamma);
    }
    friend bool operator==(const RotationAngles &, const RotationAngles &) = default;
};

inline constexpr std::size_t kAnglesPerQubit = 3;

struct PqcParams {
    std::vector<RotationAngles> angles; ///< one triplet per qubit

    PqcParams() = default;
    explicit PqcParams(std::size_t num_qubits) : angles(num_qubits) {}
    explicit PqcParams(std::vector<RotationAngles> a) : angles(std::move(a)) {}

    [[nodiscard]] std::size_t num_qubits() const noexcept { return angles.size(); }
    [[nodiscard]] std::size_t num_parameters() const noexcept {
        return kAnglesPerQubit * angles.size();
    }

    void validate() const {
        if (angles.empty() || angles.size() > sim::kMaxQubits) {
            throw std::invalid_argument("PQC qubit count out of range");
        }
        for (const auto &t : angles) {
            if (!std::isfinite(t.alpha) || !std::isfinite(t.beta) || !std::isfinite(t.gamma)) {
                throw std::invalid_argument("PQC angles must be finite");
            }
        }
    }
    friend bool operator==(const PqcParams &, const PqcParams &) = default;
};

/// <Z_i> per qubit.
struct PqcOutput {
    std::vector<double> expectations;
};

/// d<Z_i>/d(alpha_i, beta_i, gamma_i); all cross-qubit entries are zero.
struct PqcJacobian {
    std::vector<RotationAngles> blocks;

    /// Expands to the full (num_qubits x 3 num_qubits) row-major matrix.
    [[nodiscard]] std::vector<double> dense() const {
        const std::size_t n = blocks.size();
        std::vector<double> out(n * kAnglesPerQubit * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < kAnglesPerQubit; ++k) {
                out[i * (kAnglesPerQubit * n) + kAnglesPerQubit * i + k] = blocks[i][k];
            }
        }
        return out;
    }
};

enum class GradientMethod { parameter_shift, finite_difference };

namespace detail {

inline void check_inputs(std::span<const double> x, const PqcParams &params) {
    params.validate();
    if (x.size() != params.num_qubits()) {
        throw std::invalid_argument("feature length " + std::to_string(x.size()) +
                                    " does not match PQC qubit count " +
                                    std::to_string(params.num_qubits()));
    }
}

/// Applies encoding and trainable rotations of one qubit onto `target`.
inline sim::QuantumState apply_qubit_block(sim::QuantumState state, std::size_t target,
                                           double encoding_angle, const RotationAngles &t) {
    state = sim::apply_single_qubit_gate(state, sim::gate_ry(encoding_angle), target);
    state = sim::apply_single_qubit_gate(state, sim::gate_ry(t.alpha), target);
    state = sim::apply_single_qubit_gate(state, sim::gate_rx(t.beta), target);
    state = sim::apply_single_qubit_gate(state, sim::gate_rz(t.gamma), target);
    return state;
}

/// <Z> of the single-qubit sub-circuit belonging to one qubit.
inline double qubit_expectation(double encoding_angle, const RotationAngles &t) {
    auto state = apply_qubit_block(sim::new_zero_state(1), 0, encoding_angle, t);
    return sim::expectation_z(state, 0);
}

} // namespace detail

/**
 * <Z> on every qubit. The circuit has no entangling gates, so the register
 * stays a product state and each qubit is simulated on its own; a change to
 * one qubit's angles cannot perturb another qubit's readout, not even by
 * rounding.
 */
inline PqcOutput pqc_forward(std::span<const double> x, const PqcParams &params) {
    detail::check_inputs(x, params);
    const auto enc = encoding::encode_as_ry_rotations(x);
    PqcOutput out;
    out.expectations.reserve(params.num_qubits());
    for (std::size_t i = 0; i < params.num_qubits(); ++i) {
        out.expectations.push_back(detail::qubit_expectation(enc[i], params.angles[i]));
    }
    return out;
}

/// The same circuit run on one dense register of num_qubits qubits.
inline PqcOutput pqc_forward_dense(std::span<const double> x, const PqcParams &params) {
    detail::check_inputs(x, params);
    const auto enc = encoding::encode_as_ry_rotations(x);
    auto state = sim::new_zero_state(params.num_qubits());
    for (std::size_t i = 0; i < params.num_qubits(); ++i) {
        state = detail::apply_qubit_block(std::move(state), i, enc[i], params.angles[i]);
    }
    PqcOutput out;
    out.expectations.reserve(params.num_qubits());
    for (std::size_t i = 0; i < params.num_qubits(); ++i) {
        out.expectations.push_back(sim::expectation_z(state, i));
    }
    return out;
}

/**
 * Parameter-shift rule: d<Z>/dtheta = (<Z>(theta + pi/2) - <Z>(theta - pi/2)) / 2,
 * exact for Pauli-rotation generators. Each shifted evaluation only re-runs
 * the sub-circuit of the qubit that owns the parameter.
 */
inline PqcJacobian pqc_gradient_parameter_shift(std::span<const double> x,
                                                const PqcParams &params) {
    detail::check_inputs(x, params);
    const auto enc = encoding::encode_as_ry_rotations(x);
    constexpr double shift = std::numbers::pi / 2.0;
    PqcJacobian jac{std::vector<RotationAngles>(params.num_qubits())};
    for (std::size_t i = 0; i < params.num_qubits(); ++i) {
        for (std::size_t k = 0; k < kAnglesPerQubit; ++k) {
            RotationAngles plus = params.angles[i];
            RotationAngles minus = params.angles[i];
            plus[k] += shift;
            minus[k] -= shift;
            jac.blocks[i][k] = 0.5 * (detail::qubit_expectation(enc[i], plus) -
                                      detail::qubit_expectation(enc[i], minus));
        }
    }
    return jac;
}

/// Central differences (f(theta + h) - f(theta - h)) / 2h.
inline PqcJacobian pqc_gradient_finite_difference(std::span<const double> x,
                                                  const PqcParams &params, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw std::invalid_argument("finite-difference step must be positive");
    }
    detail::check_inputs(x, params);
    const auto enc = encoding::encode_as_ry_rotations(x);
    PqcJacobian jac{std::vector<RotationAngles>(params.num_qubits())};
    for (std::size_t i = 0; i < params.num_qubits(); ++i) {
        for (std::size_t k = 0; k < kAnglesPerQubit; ++k) {
            RotationAngles plus = params.angles[i];
            RotationAngles minus = params.angles[i];
            plus[k] += h;
            minus[k] -= h;
            jac.blocks[i][k] = (detail::qubit_expectation(enc[i], plus) -
                                detail::qubit_expectation(enc[i], minus)) /
                               (2.0 * h);
        }
    }
    return jac;
}

inline PqcJacobian pqc_gradient(std::span<const double> x, const PqcParams &params,
                                GradientMethod method, double fd_step = 1e-4) {
    return method == GradientMethod::parameter_shift
               ? pqc_gradient_parameter_shift(x, params)
               : pqc_gradient_finite_difference(x, params, fd_step);
}

} // namespace qphm::pqc
