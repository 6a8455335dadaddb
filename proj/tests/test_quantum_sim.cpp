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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qphm/quantum_sim.hpp"

using namespace qphm::sim;
namespace oracle = qphm::oracle;

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void expect_amplitudes(const QuantumState &s, const std::vector<Complex> &expected,
                       double tol = 1e-12) {
    ASSERT_EQ(s.size(), expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) {
        EXPECT_NEAR(s[k].real(), expected[k].real(), tol) << "index " << k;
        EXPECT_NEAR(s[k].imag(), expected[k].imag(), tol) << "index " << k;
    }
}

} // namespace

TEST(ZeroState, Construction) {
    expect_amplitudes(new_zero_state(1), {1.0, 0.0});
    expect_amplitudes(new_zero_state(2), {1.0, 0.0, 0.0, 0.0});
    const auto s5 = new_zero_state(5);
    EXPECT_EQ(s5.size(), 32u);
    EXPECT_EQ(s5[0], Complex(1.0, 0.0));
    for (std::size_t k = 1; k < 32; ++k) {
        EXPECT_EQ(s5[k], Complex(0.0, 0.0));
    }
}

TEST(ZeroState, RejectsOutOfRangeQubitCounts) {
    EXPECT_THROW(new_zero_state(0), std::invalid_argument);
    EXPECT_THROW(new_zero_state(21), std::invalid_argument);
    EXPECT_NO_THROW(new_zero_state(20));
}

TEST(QuantumState, FromAmplitudesValidates) {
    EXPECT_THROW(QuantumState::from_amplitudes({1.0, 0.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(QuantumState::from_amplitudes({1.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(QuantumState::from_amplitudes({Complex(NAN, 0.0), 0.0}), std::invalid_argument);
    EXPECT_NO_THROW(QuantumState::from_amplitudes({kInvSqrt2, Complex(0, kInvSqrt2)}));
}

TEST(Gates, HadamardMatchesDefinition) {
    const auto h = gate_h();
    EXPECT_NEAR(h(0, 0).real(), kInvSqrt2, 1e-15);
    EXPECT_NEAR(h(0, 1).real(), kInvSqrt2, 1e-15);
    EXPECT_NEAR(h(1, 0).real(), kInvSqrt2, 1e-15);
    EXPECT_NEAR(h(1, 1).real(), -kInvSqrt2, 1e-15);
}

TEST(Gates, RotationsMatchTextbookMatrices) {
    for (double t : {-2.3, 0.0, 0.4, kPi / 3, kPi, 5.9}) {
        const auto ms = {std::pair{gate_rx(t), oracle::rx(t)}, std::pair{gate_ry(t), oracle::ry(t)},
                         std::pair{gate_rz(t), oracle::rz(t)}};
        for (const auto &[g, ref] : ms) {
            for (std::size_t r = 0; r < 2; ++r)
                for (std::size_t c = 0; c < 2; ++c)
                    EXPECT_NEAR(std::abs(g(r, c) - ref[r][c]), 0.0, 1e-15);
        }
    }
}

TEST(Gates, RxZeroIsIdentity) {
    const auto g = gate_rx(0.0);
    EXPECT_EQ(g(0, 0), Complex(1.0, 0.0));
    EXPECT_EQ(std::abs(g(0, 1)), 0.0);
    EXPECT_EQ(std::abs(g(1, 0)), 0.0);
    EXPECT_EQ(g(1, 1), Complex(1.0, 0.0));
}

TEST(Gates, RejectNonFiniteAngles) {
    EXPECT_THROW(gate_rx(NAN), std::invalid_argument);
    EXPECT_THROW(gate_ry(INFINITY), std::invalid_argument);
    EXPECT_THROW(gate_rz(-INFINITY), std::invalid_argument);
}

TEST(Gates, NonUnitaryMatrixIsRejected) {
    EXPECT_THROW(GateMatrix(2, {1.0, 1.0, 0.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(GateMatrix(3, std::vector<Complex>(9, 0.0)), std::invalid_argument);
    EXPECT_THROW(GateMatrix(2, {1.0, 0.0, 0.0}), std::invalid_argument);
}

TEST(Gates, UnitarityOverRandomAngles) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> a(-4 * kPi, 4 * kPi);
    EXPECT_LE(gate_h().unitarity_error(), 1e-12);
    EXPECT_LE(gate_cnot().unitarity_error(), 1e-12);
    for (int i = 0; i < 100; ++i) {
        const double t = a(rng);
        EXPECT_LE(gate_rx(t).unitarity_error(), 1e-12);
        EXPECT_LE(gate_ry(t).unitarity_error(), 1e-12);
        EXPECT_LE(gate_rz(t).unitarity_error(), 1e-12);
    }
}

TEST(SingleQubitGate, HadamardOnZero) {
    const auto s = apply_single_qubit_gate(new_zero_state(1), gate_h(), 0);
    expect_amplitudes(s, {kInvSqrt2, kInvSqrt2});
    const auto back = apply_single_qubit_gate(s, gate_h(), 0);
    expect_amplitudes(back, {1.0, 0.0});
}

TEST(SingleQubitGate, RyPiFlipsZeroToOne) {
    expect_amplitudes(apply_single_qubit_gate(new_zero_state(1), gate_ry(kPi), 0), {0.0, 1.0});
}

TEST(SingleQubitGate, RzKeepsProbabilities) {
    auto s = apply_single_qubit_gate(new_zero_state(1), gate_h(), 0);
    s = apply_single_qubit_gate(s, gate_rz(0.7), 0);
    const auto p = probabilities(s);
    EXPECT_NEAR(p[0], 0.5, 1e-12);
    EXPECT_NEAR(p[1], 0.5, 1e-12);
    // e^{-0.35 i}/sqrt2, e^{0.35 i}/sqrt2 from the 2x2 product.
    expect_amplitudes(s, {std::polar(kInvSqrt2, -0.35), std::polar(kInvSqrt2, 0.35)});
}

TEST(SingleQubitGate, RejectsBadTargetsAndTwoQubitGates) {
    const auto s = new_zero_state(2);
    EXPECT_THROW(apply_single_qubit_gate(s, gate_h(), 2), std::out_of_range);
    EXPECT_THROW(apply_single_qubit_gate(s, gate_cnot(), 0), std::invalid_argument);
}

TEST(SingleQubitGate, QubitZeroIsMostSignificant) {
    // X-like flip (Ry(pi)) on qubit 0 of |00> gives |10> = basis index 2.
    const auto s = apply_single_qubit_gate(new_zero_state(2), gate_ry(kPi), 0);
    EXPECT_NEAR(std::abs(s[2]), 1.0, 1e-12);
}

TEST(SingleQubitGate, AgreesWithDenseKroneckerConstruction) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> a(-kPi, kPi);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 4;
        const std::size_t target = static_cast<std::size_t>(rng() % n);
        const double t = a(rng);
        const int kind = trial % 4;
        const GateMatrix g = kind == 0 ? gate_rx(t) : kind == 1 ? gate_ry(t) : kind == 2 ? gate_rz(t) : gate_h();
        oracle::Matrix u = {{g(0, 0), g(0, 1)}, {g(1, 0), g(1, 1)}};
        const auto amps = oracle::random_state(n, rng);
        const auto expected = oracle::matvec(oracle::embed(u, target, n), amps);
        const auto got = apply_single_qubit_gate(QuantumState::from_amplitudes(amps), g, target);
        for (std::size_t k = 0; k < expected.size(); ++k) {
            ASSERT_LE(std::abs(got[k] - expected[k]), 1e-12) << "trial " << trial;
        }
    }
}

TEST(Cnot, TruthTableMatchesMatrix) {
    const auto cnot = gate_cnot();
    for (std::size_t in = 0; in < 4; ++in) {
        const auto out = apply_cnot(basis_state(2, in), 0, 1);
        for (std::size_t k = 0; k < 4; ++k) {
            EXPECT_EQ(out[k], cnot(k, in)) << "input " << in << " output " << k;
        }
    }
    EXPECT_NEAR(std::abs(apply_cnot(basis_state(2, 2), 0, 1)[3]), 1.0, 0.0);   // |10> -> |11>
    EXPECT_NEAR(std::abs(apply_cnot(basis_state(2, 0), 0, 1)[0]), 1.0, 0.0);   // |00> -> |00>
}

TEST(Cnot, ReversedControlFlipsQubitZero) {
    // control qubit 1, target qubit 0: |01> -> |11>
    const auto out = apply_cnot(basis_state(2, 1), 1, 0);
    EXPECT_EQ(std::abs(out[3]), 1.0);
}

TEST(Cnot, BellState) {
    auto s = apply_single_qubit_gate(new_zero_state(2), gate_h(), 0);
    s = apply_cnot(s, 0, 1);
    // Dense 4x4 product CNOT (H (x) I)|00>.
    const oracle::Matrix h = {{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}};
    const oracle::Matrix cnot = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};
    const auto expected =
        oracle::matvec(cnot, oracle::matvec(oracle::kron(h, oracle::identity(2)), {1.0, 0.0, 0.0, 0.0}));
    expect_amplitudes(s, expected);
    const auto p = probabilities(s);
    EXPECT_NEAR(p[0], 0.5, 1e-12);
    EXPECT_NEAR(p[1], 0.0, 1e-12);
    EXPECT_NEAR(p[2], 0.0, 1e-12);
    EXPECT_NEAR(p[3], 0.5, 1e-12);
}

TEST(Cnot, RejectsInvalidIndices) {
    const auto s = new_zero_state(3);
    EXPECT_THROW(apply_cnot(s, 1, 1), std::invalid_argument);
    EXPECT_THROW(apply_cnot(s, 0, 3), std::out_of_range);
    EXPECT_THROW(apply_cnot(s, 5, 0), std::out_of_range);
}

TEST(Probabilities, BasicCases) {
    const auto p0 = probabilities(new_zero_state(1));
    EXPECT_EQ(p0[0], 1.0);
    EXPECT_EQ(p0[1], 0.0);
    const auto ph = probabilities(apply_single_qubit_gate(new_zero_state(1), gate_h(), 0));
    EXPECT_NEAR(ph[0], 0.5, 1e-15);
    EXPECT_NEAR(ph[1], 0.5, 1e-15);
}

TEST(ExpectationZ, BasisStatesAndRy) {
    EXPECT_EQ(expectation_z(new_zero_state(1), 0), 1.0);
    EXPECT_EQ(expectation_z(basis_state(1, 1), 0), -1.0);
    for (double t : {0.0, kPi / 3, kPi / 2, kPi}) {
        const auto s = apply_single_qubit_gate(new_zero_state(1), gate_ry(t), 0);
        const double brute = std::pow(std::cos(t / 2), 2) - std::pow(std::sin(t / 2), 2);
        EXPECT_NEAR(expectation_z(s, 0), brute, 1e-12);
        EXPECT_NEAR(expectation_z(s, 0), std::cos(t), 1e-12);
    }
    EXPECT_THROW(expectation_z(new_zero_state(2), 2), std::out_of_range);
}

TEST(ExpectationZ, MultiQubitTargetsReadTheirOwnBit) {
    // |01>: qubit 0 is |0>, qubit 1 is |1>.
    const auto s = basis_state(2, 1);
    EXPECT_EQ(expectation_z(s, 0), 1.0);
    EXPECT_EQ(expectation_z(s, 1), -1.0);
}

TEST(ExpectationZ, RzInvariance) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> a(-10.0, 10.0);
    for (int i = 0; i < 500; ++i) {
        const auto psi = QuantumState::from_amplitudes(oracle::random_state(1, rng));
        const auto rotated = apply_single_qubit_gate(psi, gate_rz(a(rng)), 0);
        EXPECT_NEAR(expectation_z(rotated, 0), expectation_z(psi, 0), 1e-12);
    }
}

TEST(ShotSampling, ConvergesToExactExpectation) {
    const auto s = apply_single_qubit_gate(new_zero_state(1), gate_ry(1.1), 0);
    const double est = sample_expectation_z(s, 0, 200000, 5);
    EXPECT_NEAR(est, std::cos(1.1), 0.01);
    EXPECT_EQ(est, sample_expectation_z(s, 0, 200000, 5));
    EXPECT_THROW(sample_expectation_z(s, 0, 0, 5), std::invalid_argument);
}

TEST(TensorProduct, Examples) {
    expect_amplitudes(tensor_product(new_zero_state(1), basis_state(1, 1)), {0.0, 1.0, 0.0, 0.0});
    const auto plus = apply_single_qubit_gate(new_zero_state(1), gate_h(), 0);
    expect_amplitudes(tensor_product(plus, plus), {0.5, 0.5, 0.5, 0.5});
    EXPECT_THROW(tensor_product(new_zero_state(10), new_zero_state(11)), std::invalid_argument);
}

TEST(TensorProduct, ProbabilitiesFactorize) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t na = 1 + trial % 3, nb = 1 + (trial / 3) % 3;
        const auto a = QuantumState::from_amplitudes(oracle::random_state(na, rng));
        const auto b = QuantumState::from_amplitudes(oracle::random_state(nb, rng));
        const auto ab = tensor_product(a, b);
        EXPECT_EQ(ab.num_qubits(), na + nb);
        EXPECT_NEAR(ab.norm_squared(), 1.0, 1e-12);
        const auto pa = probabilities(a), pb = probabilities(b), pab = probabilities(ab);
        for (std::size_t i = 0; i < pa.size(); ++i)
            for (std::size_t j = 0; j < pb.size(); ++j)
                EXPECT_NEAR(pab[i * pb.size() + j], pa[i] * pb[j], 1e-12);
    }
}

TEST(Norm, PreservedAcrossRandomCircuits) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> a(-kPi, kPi);
    for (int c = 0; c < 300; ++c) {
        const std::size_t n = 1 + c % 4;
        auto s = QuantumState::from_amplitudes(oracle::random_state(n, rng));
        for (int g = 0; g < 10; ++g) {
            const std::size_t q = rng() % n;
            switch (rng() % 5) {
            case 0: s = apply_single_qubit_gate(s, gate_h(), q); break;
            case 1: s = apply_single_qubit_gate(s, gate_rx(a(rng)), q); break;
            case 2: s = apply_single_qubit_gate(s, gate_ry(a(rng)), q); break;
            case 3: s = apply_single_qubit_gate(s, gate_rz(a(rng)), q); break;
            default:
                if (n > 1) {
                    s = apply_cnot(s, q, (q + 1) % n);
                }
            }
        }
        EXPECT_NEAR(s.norm_squared(), 1.0, 1e-10);
    }
}

TEST(Bloch, Poles) {
    const auto z = bloch_angles(new_zero_state(1));
    EXPECT_EQ(z.theta, 0.0);
    EXPECT_EQ(z.phi, 0.0);
    const auto o = bloch_angles(basis_state(1, 1));
    EXPECT_NEAR(o.theta, kPi, 1e-15);
    EXPECT_EQ(o.phi, 0.0);
    // Global phase on |1> must not leak into phi.
    const auto oi = bloch_angles(QuantumState::from_amplitudes({0.0, Complex(0.0, 1.0)}));
    EXPECT_NEAR(oi.theta, kPi, 1e-15);
    EXPECT_EQ(oi.phi, 0.0);
}

TEST(Bloch, EqualSuperpositionIsEquator) {
    const auto a = bloch_angles(apply_single_qubit_gate(new_zero_state(1), gate_h(), 0));
    EXPECT_NEAR(a.theta, kPi / 2, 1e-12);
    EXPECT_NEAR(a.phi, 0.0, 1e-12);
}

TEST(Bloch, StripsGlobalPhase) {
    const Complex g = std::polar(1.0, 1.234);
    const auto a = bloch_angles(QuantumState::from_amplitudes({g * kInvSqrt2, g * Complex(0, kInvSqrt2)}));
    EXPECT_NEAR(a.theta, kPi / 2, 1e-12);
    EXPECT_NEAR(a.phi, kPi / 2, 1e-12);
}

TEST(Bloch, RejectsMultiQubitStates) {
    EXPECT_THROW(bloch_angles(new_zero_state(2)), std::invalid_argument);
}

TEST(Bloch, RoundTripOverRandomStates) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> th(0.0, kPi), ph(0.0, 2 * kPi);
    for (int i = 0; i < 1000; ++i) {
        // Random state with a random global phase.
        const auto psi = QuantumState::from_amplitudes(oracle::random_state(1, rng));
        const auto angles = bloch_angles(psi);
        EXPECT_GE(angles.theta, 0.0);
        EXPECT_LE(angles.theta, kPi);
        EXPECT_GE(angles.phi, 0.0);
        EXPECT_LT(angles.phi, 2 * kPi);
        const auto rebuilt = from_bloch_angles(angles);
        // Equal up to global phase: |<rebuilt|psi>| = 1.
        const Complex overlap = std::conj(rebuilt[0]) * psi[0] + std::conj(rebuilt[1]) * psi[1];
        EXPECT_NEAR(std::abs(overlap), 1.0, 1e-10);
        // extract(reconstruct(extract)) is a fixed point.
        const auto again = bloch_angles(rebuilt);
        EXPECT_NEAR(again.theta, angles.theta, 1e-10);
        const double dphi = std::remainder(again.phi - angles.phi, 2 * kPi);
        EXPECT_NEAR(dphi, 0.0, 1e-10);

        const BlochAngles direct{th(rng), ph(rng)};
        const auto back = bloch_angles(from_bloch_angles(direct));
        EXPECT_NEAR(back.theta, direct.theta, 1e-10);
        EXPECT_NEAR(std::remainder(back.phi - direct.phi, 2 * kPi), 0.0, 1e-10);
    }
}
