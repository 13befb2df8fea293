#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plgc/lattice.hpp"

namespace plgc {

// Product of sigma-z on the z_mask qubits and sigma-x on the x_mask qubits.
// Overlapping masks would mean a Pauli Y, which this model never produces;
// construction rejects them so the gate kernels can stay pure-diagonal or
// pure-flip.
struct PauliString {
    uint64_t z_mask = 0;
    uint64_t x_mask = 0;

    PauliString() = default;
    PauliString(uint64_t z, uint64_t x) : z_mask(z), x_mask(x) {
        if ((z_mask & x_mask) != 0) {
            throw std::invalid_argument("overlapping z and x masks form a Pauli Y, "
                                        "which this model forbids");
        }
    }

    bool operator==(const PauliString& other) const {
        return z_mask == other.z_mask && x_mask == other.x_mask;
    }
    bool operator<(const PauliString& other) const {
        return std::pair{z_mask, x_mask} < std::pair{other.z_mask, other.x_mask};
    }
};

// Weighted sum of Pauli strings. Duplicate strings are merged on construction
// and zero-coefficient terms dropped, so the term list is canonical.
struct PauliTermSum {
    std::vector<std::pair<double, PauliString>> terms;

    PauliTermSum() = default;
    explicit PauliTermSum(std::vector<std::pair<double, PauliString>> raw) {
        std::map<PauliString, double> merged;
        for (const auto& [coeff, ps] : raw) {
            if (!std::isfinite(coeff)) {
                throw std::invalid_argument("Pauli term coefficients must be finite");
            }
            merged[ps] += coeff;
        }
        terms.reserve(merged.size());
        for (const auto& [ps, coeff] : merged) {
            if (coeff != 0.0) terms.emplace_back(coeff, ps);
        }
    }

    std::size_t size() const { return terms.size(); }
};

// H_TC: one -1 weighted z-string per vertex star and one -1 weighted x-string
// per plaquette.
inline PauliTermSum hamiltonian_tc(const LatticeGeometry& geom) {
    std::vector<std::pair<double, PauliString>> raw;
    raw.reserve(static_cast<std::size_t>(geom.n_vertices + geom.n_plaquettes));
    for (int v = 0; v < geom.n_vertices; ++v) {
        raw.emplace_back(-1.0, PauliString{geom.star_mask(v), 0});
    }
    for (int p = 0; p < geom.n_plaquettes; ++p) {
        raw.emplace_back(-1.0, PauliString{0, geom.plaquette_mask(p)});
    }
    return PauliTermSum(std::move(raw));
}

// (1-x) H_TC - x sum_i sigma-z_i. The interpolation is only defined on
// x in [0, 1].
inline PauliTermSum hamiltonian_tcm(const LatticeGeometry& geom, double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument("field parameter x must lie in [0, 1], got " +
                                    std::to_string(x));
    }
    std::vector<std::pair<double, PauliString>> raw;
    raw.reserve(static_cast<std::size_t>(geom.n_vertices + geom.n_plaquettes + geom.n_qubits));
    for (int v = 0; v < geom.n_vertices; ++v) {
        raw.emplace_back(-(1.0 - x), PauliString{geom.star_mask(v), 0});
    }
    for (int p = 0; p < geom.n_plaquettes; ++p) {
        raw.emplace_back(-(1.0 - x), PauliString{0, geom.plaquette_mask(p)});
    }
    for (int q = 0; q < geom.n_qubits; ++q) {
        raw.emplace_back(-x, PauliString{uint64_t{1} << q, 0});
    }
    return PauliTermSum(std::move(raw));
}

}  // namespace plgc
