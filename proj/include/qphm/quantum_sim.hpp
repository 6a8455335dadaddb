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
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

/**
 * @file quantum_sim.hpp
 * Dense statevector simulation of small qubit registers.
 *
 * Basis ordering: qubit 0 is the most significant bit of the basis index, so
 * the amplitude vector of |q0 q1 ... q(n-1)> reads left to right like the
 * tensor product |q0> (x) |q1> (x) ... (x) |q(n-1)>.
 */
namespace qphm::sim {

using Complex = std::complex<double>;

/// Largest register the simulator will allocate (2^20 amplitudes, 16 MiB).
inline constexpr std::size_t kMaxQubits = 20;

/// Tolerance on sum |a_k|^2 = 1 when a state is built from user amplitudes.
inline constexpr double kNormTolerance = 1e-10;

/// Entrywise tolerance on U^dagger U = I.
inline constexpr double kUnitaryTolerance = 1e-12;

namespace detail {

inline void check_qubit_count(std::size_t num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("qubit count " + std::to_string(num_qubits) +
                                    " outside supported range [1, " +
                                    std::to_string(kMaxQubits) + "]");
    }
}

inline bool is_finite(const Complex &z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline void check_finite_angle(double xi) {
    if (!std::isfinite(xi)) {
        throw std::invalid_argument("rotation angle must be finite");
    }
}

} // namespace detail

/**
 * Square unitary matrix acting on one (dim 2) or two (dim 4) qubits, stored
 * row-major. Construction validates unitarity, so every GateMatrix in the
 * program is unitary.
 */
class GateMatrix {
  public:
    GateMatrix(std::size_t dim, std::vector<Complex> entries)
        : dim_(dim), entries_(std::move(entries)) {
        if (dim_ != 2 && dim_ != 4) {
            throw std::invalid_argument("gate dimension must be 2 or 4");
        }
        if (entries_.size() != dim_ * dim_) {
            throw std::invalid_argument("gate entry count does not match dim^2");
        }
        for (const auto &z : entries_) {
            if (!detail::is_finite(z)) {
                throw std::invalid_argument("gate entries must be finite");
            }
        }
        if (unitarity_error() > kUnitaryTolerance) {
            throw std::invalid_argument("gate matrix is not unitary");
        }
    }

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::span<const Complex> entries() const noexcept { return entries_; }
    [[nodiscard]] const Complex &operator()(std::size_t row, std::size_t col) const {
        return entries_[row * dim_ + col];
    }

    /// Max entrywise |(U^dagger U - I)_{ij}|.
    [[nodiscard]] double unitarity_error() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = 0; j < dim_; ++j) {
                Complex acc{0.0, 0.0};
                for (std::size_t k = 0; k < dim_; ++k) {
                    acc += std::conj(entries_[k * dim_ + i]) * entries_[k * dim_ + j];
                }
                if (i == j) {
                    acc -= 1.0;
                }
                worst = std::max(worst, std::abs(acc));
            }
        }
        return worst;
    }

  private:
    std::size_t dim_;
    std::vector<Complex> entries_;
};

/// Hadamard gate, (1/sqrt 2)[[1, 1], [1, -1]].
inline GateMatrix gate_h() {
    const double s = 1.0 / std::numbers::sqrt2;
    return GateMatrix(2, {{s, 0.0}, {s, 0.0}, {s, 0.0}, {-s, 0.0}});
}

inline GateMatrix gate_rx(double xi) {
    detail::check_finite_angle(xi);
    const double c = std::cos(xi / 2.0);
    const double s = std::sin(xi / 2.0);
    return GateMatrix(2, {{c, 0.0}, {0.0, -s}, {0.0, -s}, {c, 0.0}});
}

inline GateMatrix gate_ry(double xi) {
    detail::check_finite_angle(xi);
    const double c = std::cos(xi / 2.0);
    const double s = std::sin(xi / 2.0);
    return GateMatrix(2, {{c, 0.0}, {-s, 0.0}, {s, 0.0}, {c, 0.0}});
}

inline GateMatrix gate_rz(double xi) {
    detail::check_finite_angle(xi);
    return GateMatrix(2, {std::polar(1.0, -xi / 2.0), {0.0, 0.0}, {0.0, 0.0},
                          std::polar(1.0, xi / 2.0)});
}

/// CNOT with the first (most significant) qubit as control.
inline GateMatrix gate_cnot() {
    std::vector<Complex> e(16, Complex{0.0, 0.0});
    e[0 * 4 + 0] = 1.0;
    e[1 * 4 + 1] = 1.0;
    e[2 * 4 + 3] = 1.0;
    e[3 * 4 + 2] = 1.0;
    return GateMatrix(4, std::move(e));
}

/**
 * Normalized amplitude vector over 2^n basis states.
 *
 * States are values: every operation below returns a new state and leaves its
 * input untouched.
 */
class QuantumState {
  public:
    /// Validates length (power of two, within kMaxQubits), finiteness and norm.
    static QuantumState from_amplitudes(std::vector<Complex> amplitudes) {
        const std::size_t len = amplitudes.size();
        if (len < 2 || (len & (len - 1)) != 0) {
            throw std::invalid_argument("amplitude count must be a power of two >= 2");
        }
        std::size_t n = 0;
        while ((std::size_t{1} << n) < len) {
            ++n;
        }
        detail::check_qubit_count(n);
        double norm2 = 0.0;
        for (const auto &z : amplitudes) {
            if (!detail::is_finite(z)) {
                throw std::invalid_argument("amplitudes must be finite");
            }
            norm2 += std::norm(z);
        }
        if (std::abs(norm2 - 1.0) > kNormTolerance) {
            throw std::invalid_argument("amplitudes are not normalized (sum |a|^2 = " +
                                        std::to_string(norm2) + ")");
        }
        return QuantumState(n, std::move(amplitudes));
    }

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::size_t size() const noexcept { return amplitudes_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    [[nodiscard]] const Complex &operator[](std::size_t index) const { return amplitudes_[index]; }

    [[nodiscard]] double norm_squared() const noexcept {
        double acc = 0.0;
        for (const auto &z : amplitudes_) {
            acc += std::norm(z);
        }
        return acc;
    }

    /// Bit position (from the least significant end) of a qubit's basis bit.
    [[nodiscard]] std::size_t bit_of(std::size_t qubit) const {
        if (qubit >= num_qubits_) {
            throw std::out_of_range("qubit index " + std::to_string(qubit) +
                                    " out of range for " + std::to_string(num_qubits_) +
                                    "-qubit state");
        }
        return num_qubits_ - 1 - qubit;
    }

  private:
    QuantumState(std::size_t n, std::vector<Complex> amplitudes)
        : num_qubits_(n), amplitudes_(std::move(amplitudes)) {}

    friend QuantumState new_zero_state(std::size_t);
    friend QuantumState apply_single_qubit_gate(const QuantumState &, const GateMatrix &,
                                                std::size_t);
    friend QuantumState apply_cnot(const QuantumState &, std::size_t, std::size_t);
    friend QuantumState tensor_product(const QuantumState &, const QuantumState &);

    std::size_t num_qubits_;
    std::vector<Complex> amplitudes_;
};

inline QuantumState new_zero_state(std::size_t num_qubits) {
    detail::check_qubit_count(num_qubits);
    std::vector<Complex> amps(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
    amps[0] = 1.0;
    return QuantumState(num_qubits, std::move(amps));
}

/// Computational basis state |index>, qubit 0 being the most significant bit.
inline QuantumState basis_state(std::size_t num_qubits, std::size_t index) {
    detail::check_qubit_count(num_qubits);
    const std::size_t len = std::size_t{1} << num_qubits;
    if (index >= len) {
        throw std::out_of_range("basis index out of range");
    }
    std::vector<Complex> amps(len, Complex{0.0, 0.0});
    amps[index] = 1.0;
    return QuantumState::from_amplitudes(std::move(amps));
}

/// (I (x) ... (x) U (x) ... (x) I)|psi> with U acting on `target`.
inline QuantumState apply_single_qubit_gate(const QuantumState &state, const GateMatrix &gate,
                                            std::size_t target) {
    if (gate.dim() != 2) {
        throw std::invalid_argument("single-qubit gate must be 2x2");
    }
    const std::size_t stride = std::size_t{1} << state.bit_of(target);
    std::vector<Complex> out(state.amplitudes_);
    const Complex u00 = gate(0, 0), u01 = gate(0, 1), u10 = gate(1, 0), u11 = gate(1, 1);
    for (std::size_t base = 0; base < out.size(); base += 2 * stride) {
        for (std::size_t k = base; k < base + stride; ++k) {
            const Complex a0 = state.amplitudes_[k];
            const Complex a1 = state.amplitudes_[k + stride];
            out[k] = u00 * a0 + u01 * a1;
            out[k + stride] = u10 * a0 + u11 * a1;
        }
    }
    return QuantumState(state.num_qubits_, std::move(out));
}

inline QuantumState apply_cnot(const QuantumState &state, std::size_t control,
                               std::size_t target) {
    if (control == target) {
        throw std::invalid_argument("CNOT control and target must differ");
    }
    const std::size_t cmask = std::size_t{1} << state.bit_of(control);
    const std::size_t tmask = std::size_t{1} << state.bit_of(target);
    std::vector<Complex> out(state.amplitudes_);
    for (std::size_t k = 0; k < out.size(); ++k) {
        if ((k & cmask) != 0) {
            out[k] = state.amplitudes_[k ^ tmask];
        }
    }
    return QuantumState(state.num_qubits_, std::move(out));
}

/// Born-rule probabilities |a_k|^2 per basis index.
inline std::vector<double> probabilities(const QuantumState &state) {
    std::vector<double> p;
    p.reserve(state.size());
    for (const auto &z : state.amplitudes()) {
        p.push_back(std::norm(z));
    }
    return p;
}

/// <psi| Z_target |psi> = P(target = 0) - P(target = 1).
inline double expectation_z(const QuantumState &state, std::size_t target) {
    const std::size_t mask = std::size_t{1} << state.bit_of(target);
    double acc = 0.0;
    const auto amps = state.amplitudes();
    for (std::size_t k = 0; k < amps.size(); ++k) {
        const double p = std::norm(amps[k]);
        acc += (k & mask) ? -p : p;
    }
    return std::clamp(acc, -1.0, 1.0);
}

/**
 * Shot-sampled estimate of <Z_target>: draws `shots` measurement outcomes from
 * a seeded generator. Not used by training; the main path uses the exact
 * expectation.
 */
inline double sample_expectation_z(const QuantumState &state, std::size_t target,
                                   std::size_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw std::invalid_argument("shot count must be positive");
    }
    const double p0 = 0.5 * (1.0 + expectation_z(state, target));
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution outcome_zero(std::clamp(p0, 0.0, 1.0));
    long long acc = 0;
    for (std::size_t s = 0; s < shots; ++s) {
        acc += outcome_zero(rng) ? 1 : -1;
    }
    return static_cast<double>(acc) / static_cast<double>(shots);
}

/// Kronecker product a (x) b; qubits of `a` come first.
inline QuantumState tensor_product(const QuantumState &a, const QuantumState &b) {
    detail::check_qubit_count(a.num_qubits() + b.num_qubits());
    std::vector<Complex> out;
    out.reserve(a.size() * b.size());
    for (const auto &za : a.amplitudes()) {
        for (const auto &zb : b.amplitudes()) {
            out.push_back(za * zb);
        }
    }
    return QuantumState(a.num_qubits() + b.num_qubits(), std::move(out));
}

/// Polar/azimuthal angles of a single qubit, half-angle convention.
struct BlochAngles {
    double theta = 0.0; ///< [0, pi]
    double phi = 0.0;   ///< [0, 2 pi); 0 at the poles
};

/**
 * Angles (theta, phi) with |psi> = e^{i g}(cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>).
 *
 * The global phase is removed by rotating c0 onto the positive real axis (or
 * c1 when |c0| is numerically zero).
 */
inline BlochAngles bloch_angles(const QuantumState &state) {
    if (state.num_qubits() != 1) {
        throw std::invalid_argument("bloch_angles requires a single-qubit state");
    }
    constexpr double pole_eps = 1e-12;
    Complex c0 = state[0];
    Complex c1 = state[1];
    const double r0 = std::abs(c0);
    const double r1 = std::abs(c1);
    if (r0 >= pole_eps) {
        const Complex strip = std::polar(1.0, -std::arg(c0));
        c0 *= strip;
        c1 *= strip;
    } else {
        return {std::numbers::pi, 0.0};
    }
    BlochAngles out;
    out.theta = 2.0 * std::atan2(r1, r0);
    if (r1 < pole_eps) {
        out.theta = 0.0;
        return out;
    }
    double phi = std::arg(c1);
    if (phi < 0.0) {
        phi += 2.0 * std::numbers::pi;
    }
    if (phi >= 2.0 * std::numbers::pi) {
        phi = 0.0;
    }
    out.phi = phi;
    return out;
}

/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
inline QuantumState from_bloch_angles(const BlochAngles &angles) {
    if (!std::isfinite(angles.theta) || !std::isfinite(angles.phi)) {
        throw std::invalid_argument("Bloch angles must be finite");
    }
    return QuantumState::from_amplitudes(
        {Complex{std::cos(angles.theta / 2.0), 0.0},
         std::polar(std::sin(angles.theta / 2.0), angles.phi)});
}

} // namespace qphm::sim
