#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "plgc/random.hpp"
#include "plgc/statevector.hpp"

namespace {

using namespace plgc;

constexpr double ln2 = std::numbers::ln2;

Statevector random_state(int n, Rng& rng) {
    Statevector psi = zero_state(n);
    for (auto& a : psi.amplitudes) {
        a = {rng.uniform_unit() - 0.5, rng.uniform_unit() - 0.5};
    }
    const double nrm = norm(psi);
    for (auto& a : psi.amplitudes) a /= nrm;
    return psi;
}

TEST(Statevector, ZeroState) {
    const Statevector psi = zero_state(3);
    EXPECT_EQ(psi.n_qubits, 3);
    EXPECT_EQ(psi.dim(), 8u);
    EXPECT_DOUBLE_EQ(std::abs(psi.amplitudes[0]), 1.0);
    EXPECT_DOUBLE_EQ(norm(psi), 1.0);
    EXPECT_THROW(zero_state(0), std::invalid_argument);
    EXPECT_THROW(zero_state(max_statevector_qubits + 1), std::invalid_argument);
}

TEST(Statevector, PauliXFlipsBasisStates) {
    Statevector psi = zero_state(3);
    apply_x(psi, 1);
    EXPECT_DOUBLE_EQ(std::abs(psi.amplitudes[0b010]), 1.0);
    apply_x(psi, 2);
    EXPECT_DOUBLE_EQ(std::abs(psi.amplitudes[0b110]), 1.0);
    apply_x(psi, 1);
    EXPECT_DOUBLE_EQ(std::abs(psi.amplitudes[0b100]), 1.0);
}

TEST(Statevector, RyRotatesSingleQubit) {
    // Ry(t)|0> = cos(t/2)|0> + sin(t/2)|1>.
    const double theta = 0.7345;
    Statevector psi = zero_state(1);
    apply_ry(psi, 0, theta);
    EXPECT_NEAR(psi.amplitudes[0].real(), std::cos(theta / 2), 1e-15);
    EXPECT_NEAR(psi.amplitudes[1].real(), std::sin(theta / 2), 1e-15);
    EXPECT_NEAR(psi.amplitudes[0].imag(), 0.0, 1e-15);
    EXPECT_NEAR(psi.amplitudes[1].imag(), 0.0, 1e-15);
}

TEST(Statevector, RyInverseUndoes) {
    Rng rng(11);
    Statevector psi = random_state(4, rng);
    const Statevector before = psi;
    apply_ry(psi, 2, 1.234);
    apply_ry(psi, 2, -1.234);
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        EXPECT_NEAR(std::abs(psi.amplitudes[i] - before.amplitudes[i]), 0.0, 1e-14);
    }
}

TEST(Statevector, HadamardIsInvolution) {
    Rng rng(12);
    Statevector psi = random_state(4, rng);
    const Statevector before = psi;
    apply_h(psi, 3);
    apply_h(psi, 3);
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        EXPECT_NEAR(std::abs(psi.amplitudes[i] - before.amplitudes[i]), 0.0, 1e-14);
    }
}

TEST(Statevector, CnotTruthTable) {
    // Control is qubit 0 (LSB). |c t> ordering: index = t*2 + c.
    for (int input = 0; input < 4; ++input) {
        Statevector psi = zero_state(2);
        if (input & 1) apply_x(psi, 0);
        if (input & 2) apply_x(psi, 1);
        apply_cnot(psi, 0, 1);
        const int expected = (input & 1) ? input ^ 2 : input;
        EXPECT_NEAR(std::abs(psi.amplitudes[expected]), 1.0, 1e-15) << "input " << input;
    }
    Statevector psi = zero_state(2);
    EXPECT_THROW(apply_cnot(psi, 1, 1), std::invalid_argument);
    EXPECT_THROW(apply_cnot(psi, 0, 2), std::out_of_range);
}

TEST(Statevector, RandomGateSequencesPreserveNorm) {
    // 1000 random gates drawn from the full kernel set keep the state
    // normalized to 1e-12.
    Rng rng(99);
    Statevector psi = random_state(6, rng);
    for (int step = 0; step < 1000; ++step) {
        const int kind = static_cast<int>(rng.next_u64() % 4);
        const int q = static_cast<int>(rng.next_u64() % 6);
        switch (kind) {
            case 0: apply_ry(psi, q, rng.uniform_angle()); break;
            case 1: apply_h(psi, q); break;
            case 2: apply_x(psi, q); break;
            default: {
                int t = static_cast<int>(rng.next_u64() % 6);
                if (t == q) t = (t + 1) % 6;
                apply_cnot(psi, q, t);
            }
        }
    }
    EXPECT_NEAR(norm(psi), 1.0, 1e-12);
}

TEST(Expectation, SingleQubitPaulis) {
    Statevector zero = zero_state(1);
    const PauliTermSum z({{1.0, PauliString{0b1, 0}}});
    const PauliTermSum x({{1.0, PauliString{0, 0b1}}});
    EXPECT_NEAR(expectation(zero, z), 1.0, 1e-15);
    EXPECT_NEAR(expectation(zero, x), 0.0, 1e-15);

    Statevector one = zero_state(1);
    apply_x(one, 0);
    EXPECT_NEAR(expectation(one, z), -1.0, 1e-15);

    Statevector plus = zero_state(1);
    apply_h(plus, 0);
    EXPECT_NEAR(expectation(plus, x), 1.0, 1e-15);
    EXPECT_NEAR(expectation(plus, z), 0.0, 1e-15);
}

TEST(Expectation, LinearInTheOperator) {
    Rng rng(5);
    const Statevector psi = random_state(5, rng);
    const PauliString a{0b10110, 0};
    const PauliString b{0b00001, 0b00110};
    const double ea = expectation(psi, PauliTermSum({{1.0, a}}));
    const double eb = expectation(psi, PauliTermSum({{1.0, b}}));
    const double combined = expectation(psi, PauliTermSum({{2.5, a}, {-0.75, b}}));
    EXPECT_NEAR(combined, 2.5 * ea - 0.75 * eb, 1e-12);
}

TEST(Expectation, RejectsOversizedMasks) {
    const Statevector psi = zero_state(3);
    const PauliTermSum beyond({{1.0, PauliString{0b1000, 0}}});
    EXPECT_THROW(expectation(psi, beyond), std::invalid_argument);
}

TEST(CompiledSum, MatchesDirectExpectation) {
    Rng rng(21);
    const LatticeGeometry g = build_lattice(3, 2);
    const PauliTermSum h = hamiltonian_tcm(g, 0.37);
    const CompiledPauliSum compiled(h, g.n_qubits);
    for (int trial = 0; trial < 20; ++trial) {
        const Statevector psi = random_state(g.n_qubits, rng);
        EXPECT_NEAR(compiled.value(psi), expectation(psi, h), 1e-10);
    }
}

TEST(CompiledSum, ApplyMatchesQuadraticForm) {
    // <x|H|x> computed through apply() agrees with value() on real vectors.
    Rng rng(22);
    const LatticeGeometry g = build_lattice(2, 2);
    const PauliTermSum h = hamiltonian_tcm(g, 0.61);
    const CompiledPauliSum compiled(h, g.n_qubits);

    std::vector<double> x(compiled.dim()), y(compiled.dim());
    double nrm2 = 0.0;
    for (auto& v : x) {
        v = rng.uniform_unit() - 0.5;
        nrm2 += v * v;
    }
    for (auto& v : x) v /= std::sqrt(nrm2);
    compiled.apply(x, y);
    double quad = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) quad += x[i] * y[i];

    Statevector psi = zero_state(g.n_qubits);
    for (std::size_t i = 0; i < x.size(); ++i) psi.amplitudes[i] = x[i];
    EXPECT_NEAR(quad, compiled.value(psi), 1e-12);
}

TEST(ReducedDensityMatrix, ProductStateIsPure) {
    Statevector psi = zero_state(3);
    apply_ry(psi, 0, 0.9);
    apply_ry(psi, 1, 1.7);
    apply_ry(psi, 2, 2.2);
    const DensityMatrix rho = reduced_density_matrix(psi, {1});
    EXPECT_EQ(rho.k_qubits, 1);
    EXPECT_NEAR(rho.entries.trace().real(), 1.0, 1e-12);
    EXPECT_NEAR((rho.entries * rho.entries).trace().real(), 1.0, 1e-12);  // purity
    EXPECT_NEAR(von_neumann_entropy(rho), 0.0, 1e-10);
}

TEST(ReducedDensityMatrix, BellPairIsMaximallyMixed) {
    Statevector psi = zero_state(2);
    apply_h(psi, 0);
    apply_cnot(psi, 0, 1);
    const DensityMatrix rho = reduced_density_matrix(psi, {0});
    EXPECT_NEAR(std::abs(rho.entries(0, 0) - 0.5), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(rho.entries(1, 1) - 0.5), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(rho.entries(0, 1)), 0.0, 1e-12);
    EXPECT_NEAR(von_neumann_entropy(rho), ln2, 1e-12);
}

TEST(ReducedDensityMatrix, RejectsBadKeepSets) {
    const Statevector psi = zero_state(4);
    EXPECT_THROW(reduced_density_matrix(psi, {}), std::invalid_argument);
    EXPECT_THROW(reduced_density_matrix(psi, {1, 1}), std::invalid_argument);
    EXPECT_THROW(reduced_density_matrix(psi, {4}), std::out_of_range);
}

TEST(Entropy, ComplementSymmetry) {
    // For a pure state, S of a region equals S of its complement.
    Rng rng(31);
    const Statevector psi = random_state(6, rng);
    const std::vector<std::vector<int>> regions = {{0}, {0, 3}, {1, 2, 4}, {0, 1, 2, 3, 4}};
    for (const auto& keep : regions) {
        std::vector<int> complement;
        for (int q = 0; q < 6; ++q) {
            if (std::find(keep.begin(), keep.end(), q) == keep.end()) complement.push_back(q);
        }
        const double s_keep = von_neumann_entropy(reduced_density_matrix(psi, keep));
        const double s_comp = von_neumann_entropy(reduced_density_matrix(psi, complement));
        EXPECT_NEAR(s_keep, s_comp, 1e-8);
    }
}

TEST(Entropy, KeepOrderIrrelevant) {
    Rng rng(32);
    const Statevector psi = random_state(5, rng);
    const double a = von_neumann_entropy(reduced_density_matrix(psi, {0, 2, 4}));
    const double b = von_neumann_entropy(reduced_density_matrix(psi, {4, 0, 2}));
    EXPECT_NEAR(a, b, 1e-10);
}

TEST(Entropy, RejectsNonHermitian) {
    DensityMatrix rho;
    rho.k_qubits = 1;
    rho.entries = Eigen::MatrixXcd::Zero(2, 2);
    rho.entries(0, 1) = 0.3;
    EXPECT_THROW(von_neumann_entropy(rho), std::invalid_argument);
}

TEST(Fidelity, SelfAndOrthogonal) {
    Statevector a = zero_state(2);
    EXPECT_NEAR(fidelity(a, a), 1.0, 1e-15);
    Statevector b = zero_state(2);
    apply_x(b, 0);
    EXPECT_NEAR(fidelity(a, b), 0.0, 1e-15);
    apply_h(b, 1);
    EXPECT_NEAR(fidelity(a, b), 0.0, 1e-15);

    const Statevector c = zero_state(3);
    EXPECT_THROW(fidelity(a, c), std::invalid_argument);
}

}  // namespace
