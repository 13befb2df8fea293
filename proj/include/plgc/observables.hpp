#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "plgc/lattice.hpp"
#include "plgc/pauli.hpp"
#include "plgc/statevector.hpp"

namespace plgc {

namespace detail {

inline void check_state_matches(const Statevector& psi, const LatticeGeometry& geom) {
    if (psi.n_qubits != geom.n_qubits) {
        throw std::invalid_argument("state has " + std::to_string(psi.n_qubits) +
                                    " qubits but the geometry has " +
                                    std::to_string(geom.n_qubits));
    }
}

inline double parity_expectation(const Statevector& psi, uint64_t z_mask) {
    double acc = 0.0;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        const double p = std::norm(psi.amplitudes[i]);
        acc += (std::popcount(i & z_mask) & 1) ? -p : p;
    }
    return acc;
}

}  // namespace detail

// (1/N) sum_i <sigma-z_i>. For a basis state this is (N - 2 popcount) / N.
inline double magnetization(const Statevector& psi, const LatticeGeometry& geom) {
    detail::check_state_matches(psi, geom);
    const int n = geom.n_qubits;
    double acc = 0.0;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        acc += std::norm(psi.amplitudes[i]) *
               static_cast<double>(n - 2 * std::popcount(i));
    }
    return acc / n;
}

inline std::vector<double> star_expectations(const Statevector& psi,
                                             const LatticeGeometry& geom) {
    detail::check_state_matches(psi, geom);
    std::vector<double> out;
    out.reserve(geom.n_vertices);
    for (int v = 0; v < geom.n_vertices; ++v) {
        out.push_back(detail::parity_expectation(psi, geom.star_mask(v)));
    }
    return out;
}

namespace detail {

// Entropy of a region, computed on whichever side of the cut is smaller (a
// pure state has equal entropies on both sides).
inline double region_entropy(const Statevector& psi, const std::vector<int>& region) {
    const int n = psi.n_qubits;
    const int k = static_cast<int>(region.size());
    std::vector<int> side = region;
    if (n - k < k) {
        uint64_t in_region = 0;
        for (int q : region) in_region |= uint64_t{1} << q;
        side.clear();
        for (int q = 0; q < n; ++q) {
            if (!(in_region & (uint64_t{1} << q))) side.push_back(q);
        }
    }
    if (static_cast<int>(side.size()) > rdm_max_qubits) {
        throw std::invalid_argument("region combination of " + std::to_string(k) +
                                    " qubits (complement " + std::to_string(n - k) +
                                    ") exceeds the reduced-density-matrix cap of " +
                                    std::to_string(rdm_max_qubits));
    }
    return von_neumann_entropy(reduced_density_matrix(psi, side));
}

}  // namespace detail

// The seven entropies of the tripartition, in the order
// A, B, C, AB, BC, AC, ABC. Natural-log units.
inline std::array<double, 7> region_entropies(const Statevector& psi, const Tripartition& tri) {
    tri.validate(psi.n_qubits);
    auto join = [](const std::vector<int>& u, const std::vector<int>& v) {
        std::vector<int> out(u);
        out.insert(out.end(), v.begin(), v.end());
        std::sort(out.begin(), out.end());
        return out;
    };
    const std::vector<int>& a = tri.region_a;
    const std::vector<int>& b = tri.region_b;
    const std::vector<int>& c = tri.region_c;
    return {
        detail::region_entropy(psi, a),
        detail::region_entropy(psi, b),
        detail::region_entropy(psi, c),
        detail::region_entropy(psi, join(a, b)),
        detail::region_entropy(psi, join(b, c)),
        detail::region_entropy(psi, join(a, c)),
        detail::region_entropy(psi, join(join(a, b), c)),
    };
}

// S_topo = S_A + S_B + S_C - S_AB - S_BC - S_AC + S_ABC.
inline double tee(const Statevector& psi, const Tripartition& tri) {
    const std::array<double, 7> s = region_entropies(psi, tri);
    return s[0] + s[1] + s[2] - s[3] - s[4] - s[5] + s[6];
}

struct ObservableReport {
    double energy = 0.0;
    double m_z = 0.0;
    double s_topo = 0.0;
    std::vector<double> star_expectations;
    std::array<double, 7> per_region_entropies{};
};

inline ObservableReport observable_report(const Statevector& psi, const LatticeGeometry& geom,
                                          const PauliTermSum& ham, const Tripartition& tri) {
    detail::check_state_matches(psi, geom);
    ObservableReport report;
    report.energy = expectation(psi, ham);
    report.m_z = magnetization(psi, geom);
    report.star_expectations = star_expectations(psi, geom);
    report.per_region_entropies = region_entropies(psi, tri);
    const auto& s = report.per_region_entropies;
    report.s_topo = s[0] + s[1] + s[2] - s[3] - s[4] - s[5] + s[6];
    return report;
}

}  // namespace plgc
