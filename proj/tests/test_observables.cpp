#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "plgc/circuit.hpp"
#include "plgc/ed.hpp"
#include "plgc/observables.hpp"
#include "plgc/random.hpp"

namespace {

using namespace plgc;

constexpr double ln2 = std::numbers::ln2;

TEST(Magnetization, BasisStateFormula) {
    // A basis state with k flipped bonds has m_z = (N - 2k) / N.
    const LatticeGeometry g = build_lattice(3, 2);
    Statevector psi = zero_state(g.n_qubits);
    EXPECT_NEAR(magnetization(psi, g), 1.0, 1e-15);

    apply_x(psi, 0);
    apply_x(psi, 3);
    apply_x(psi, 6);
    EXPECT_NEAR(magnetization(psi, g), (g.n_qubits - 6.0) / g.n_qubits, 1e-15);

    const Statevector wrong = zero_state(3);
    EXPECT_THROW(magnetization(wrong, g), std::invalid_argument);
}

TEST(Magnetization, UniformSuperpositionIsZeroPerFlippedPair) {
    // |+> on one bond halves its sigma-z contribution to zero.
    const LatticeGeometry g = build_lattice(2, 2);
    Statevector psi = zero_state(g.n_qubits);
    apply_h(psi, 2);
    EXPECT_NEAR(magnetization(psi, g), 3.0 / 4.0, 1e-14);
}

TEST(StarExpectations, SingleFlipBreaksIncidentStars) {
    // Flipping one bond sends <A_s> to -1 exactly on the stars holding that
    // bond and leaves the others at +1.
    const LatticeGeometry g = build_lattice(3, 3);
    Statevector psi = zero_state(g.n_qubits);
    const int bond = 4;
    apply_x(psi, bond);
    const std::vector<double> stars = star_expectations(psi, g);
    for (int s = 0; s < g.n_vertices; ++s) {
        const bool incident = (g.star_mask(s) >> bond) & 1;
        EXPECT_NEAR(stars[s], incident ? -1.0 : 1.0, 1e-14);
    }
}

TEST(StarExpectations, AllPlusOneOnTheLoopGas) {
    const LatticeGeometry g = build_lattice(3, 3);
    const Statevector psi = run_circuit(build_toric_ground(g));
    for (double a : star_expectations(psi, g)) {
        EXPECT_NEAR(a, 1.0, 1e-12);
    }
}

TEST(Tee, ToricGroundStateGivesMinusLn2) {
    // The x = 0 ground state carries Z2 topological order; the seven-term
    // entropy combination lands on -ln 2 for both supported cluster defaults.
    for (auto [lx, ly] : {std::pair{3, 3}, {4, 3}}) {
        const LatticeGeometry g = build_lattice(lx, ly);
        const Statevector psi = run_circuit(build_toric_ground(g));
        EXPECT_NEAR(tee(psi, default_tripartition(g)), -ln2, 1e-6) << lx << "x" << ly;
    }
}

TEST(Tee, ProductStateGivesZero) {
    const LatticeGeometry g = build_lattice(3, 3);
    const Statevector psi = zero_state(g.n_qubits);
    EXPECT_NEAR(tee(psi, default_tripartition(g)), 0.0, 1e-10);
}

TEST(Tee, InvariantUnderRegionRelabeling) {
    // The combination is symmetric in A, B, C.
    const LatticeGeometry g = build_lattice(3, 3);
    const Statevector psi = run_circuit(build_toric_ground(g));
    const Tripartition t = default_tripartition(g);
    const Tripartition swapped{t.region_c, t.region_a, t.region_b};
    const Tripartition flipped{t.region_b, t.region_a, t.region_c};
    const double s0 = tee(psi, t);
    EXPECT_NEAR(tee(psi, swapped), s0, 1e-10);
    EXPECT_NEAR(tee(psi, flipped), s0, 1e-10);
}

TEST(Tee, EntropyOrderAndBounds) {
    // region_entropies returns A, B, C, AB, BC, AC, ABC. Every entry obeys
    // 0 <= S <= k ln 2 for a k-qubit region, and the seven-term combination
    // reproduces tee().
    const LatticeGeometry g = build_lattice(3, 3);
    const Statevector psi = run_circuit(build_toric_ground(g));
    const Tripartition t = default_tripartition(g);
    const std::array<double, 7> s = region_entropies(psi, t);
    const std::size_t na = t.region_a.size(), nb = t.region_b.size(), nc = t.region_c.size();
    const std::array<std::size_t, 7> sizes = {na, nb, nc, na + nb, nb + nc, na + nc,
                                              na + nb + nc};
    for (int i = 0; i < 7; ++i) {
        EXPECT_GE(s[i], -1e-10);
        EXPECT_LE(s[i], sizes[i] * ln2 + 1e-9);
    }
    const double combo = s[0] + s[1] + s[2] - s[3] - s[4] - s[5] + s[6];
    EXPECT_NEAR(combo, tee(psi, t), 1e-12);
}

TEST(Tee, SmallerSideShortcutMatchesDirectComplement) {
    // region_entropy uses whichever side of the cut is smaller; recomputing
    // the big side directly gives the same value on a pure state.
    Rng rng(81);
    const LatticeGeometry g = build_lattice(3, 2);
    Statevector psi = zero_state(g.n_qubits);
    for (auto& a : psi.amplitudes) a = {rng.uniform_unit() - 0.5, rng.uniform_unit() - 0.5};
    const double nrm = norm(psi);
    for (auto& a : psi.amplitudes) a /= nrm;

    const std::vector<int> big = {0, 1, 2, 3, 4};  // complement {5, 6}
    const double via_shortcut = detail::region_entropy(psi, big);
    const double direct = von_neumann_entropy(reduced_density_matrix(psi, big));
    EXPECT_NEAR(via_shortcut, direct, 1e-8);
}

TEST(Tee, FieldDrivesTopologicalOrderAway) {
    // Exact ground states: |S_topo| is large at weak field and collapses deep
    // in the polarized phase.
    const LatticeGeometry g = build_lattice(3, 3);
    const Tripartition t = default_tripartition(g);
    const double weak = tee(ed_ground_state(g, 0.1).ground_vector, t);
    const double strong = tee(ed_ground_state(g, 0.9).ground_vector, t);
    EXPECT_GT(std::abs(weak), 0.6);
    EXPECT_LT(std::abs(strong), 0.01);
}

TEST(Report, FieldsMatchComponentFunctions) {
    const LatticeGeometry g = build_lattice(3, 3);
    const double x = 0.35;
    const Statevector psi = run_circuit(build_toric_ground(g));
    const PauliTermSum h = hamiltonian_tcm(g, x);
    const Tripartition t = default_tripartition(g);
    const ObservableReport report = observable_report(psi, g, h, t);

    EXPECT_NEAR(report.energy, expectation(psi, h), 1e-12);
    EXPECT_NEAR(report.m_z, magnetization(psi, g), 1e-12);
    EXPECT_NEAR(report.s_topo, tee(psi, t), 1e-12);
    ASSERT_EQ(report.star_expectations.size(), static_cast<std::size_t>(g.n_vertices));
    const std::array<double, 7> s = region_entropies(psi, t);
    for (int i = 0; i < 7; ++i) {
        EXPECT_NEAR(report.per_region_entropies[i], s[i], 1e-12);
    }
}

}  // namespace
