#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plgc/lattice.hpp"
#include "plgc/statevector.hpp"

namespace plgc {

enum class GateKind { ry, h, x, cnot };

struct Gate {
    GateKind kind = GateKind::ry;
    int target = 0;
    int control = -1;    // cnot only
    double angle = 0.0;  // ry only
    int plaquette = -1;  // slot id of a parametrized ry, -1 for fixed gates
};

// N_p rotation angles, reduced into [0, 2pi) on construction.
struct ParamVector {
    std::vector<double> thetas;

    ParamVector() = default;
    explicit ParamVector(std::vector<double> values) : thetas(std::move(values)) {
        constexpr double two_pi = 6.28318530717958647692;
        for (double& t : thetas) {
            t = std::fmod(t, two_pi);
            if (t < 0.0) t += two_pi;
        }
    }

    std::size_t size() const { return thetas.size(); }
    double operator[](std::size_t i) const { return thetas[i]; }
};

// Layered circuit. Gates within a layer act on pairwise-disjoint qubits;
// param_slots[p] locates plaquette p's Ry as (layer, position in layer).
struct GateCircuit {
    int n_qubits = 0;
    std::vector<std::vector<Gate>> layers;
    std::vector<std::pair<int, int>> param_slots;

    std::size_t n_params() const { return param_slots.size(); }
};

inline int circuit_depth(const GateCircuit& circuit) {
    return static_cast<int>(circuit.layers.size());
}

namespace detail {

inline uint64_t gate_qubit_mask(const Gate& g) {
    uint64_t m = uint64_t{1} << g.target;
    if (g.kind == GateKind::cnot) m |= uint64_t{1} << g.control;
    return m;
}

// Greedy earliest-fit layering. Per qubit it tracks two floors: the layer
// after its last use in any role, and the layer after its last use as a
// rotation target or cnot control. A cnot's target only needs to clear the
// second floor, because cnots writing to the same target commute; every other
// role must follow all prior uses.
class LayerScheduler {
  public:
    explicit LayerScheduler(int n_qubits)
        : any_floor_(n_qubits, 0), target_floor_(n_qubits, 0) {}

    void place(std::vector<std::vector<Gate>>& layers, const Gate& g) {
        int floor;
        if (g.kind == GateKind::cnot) {
            floor = std::max(any_floor_[g.control], target_floor_[g.target]);
        } else {
            floor = any_floor_[g.target];
        }
        const uint64_t mask = gate_qubit_mask(g);
        int layer = floor;
        while (layer < static_cast<int>(occupancy_.size()) && (occupancy_[layer] & mask)) {
            ++layer;
        }
        if (layer >= static_cast<int>(occupancy_.size())) {
            occupancy_.resize(layer + 1, 0);
            layers.resize(layer + 1);
        }
        occupancy_[layer] |= mask;
        layers[layer].push_back(g);

        if (g.kind == GateKind::cnot) {
            any_floor_[g.control] = std::max(any_floor_[g.control], layer + 1);
            target_floor_[g.control] = std::max(target_floor_[g.control], layer + 1);
            // Later non-target uses of the target must follow this write; a
            // later same-target cnot may still slot in earlier.
            any_floor_[g.target] = std::max(any_floor_[g.target], layer + 1);
        } else {
            any_floor_[g.target] = std::max(any_floor_[g.target], layer + 1);
            target_floor_[g.target] = std::max(target_floor_[g.target], layer + 1);
        }
    }

  private:
    std::vector<int> any_floor_;
    std::vector<int> target_floor_;
    std::vector<uint64_t> occupancy_;
};

inline void check_layer_disjointness(const GateCircuit& circuit) {
    for (const auto& layer : circuit.layers) {
        uint64_t used = 0;
        for (const Gate& g : layer) {
            const uint64_t m = gate_qubit_mask(g);
            if (used & m) {
                throw std::logic_error("scheduler produced a layer with overlapping gates");
            }
            used |= m;
        }
    }
}

inline int gate_sort_key(const Gate& g) {
    if (g.kind == GateKind::cnot) return std::min(g.control, g.target);
    return g.target;
}

// One Ry (or H) on the plaquette's bottom bond followed by cnots fanning out
// to the top, left, and right bonds. Plaquettes are emitted row by row, top
// row first; the bottom bond is untouched by every earlier gate, so the block
// realizes one loop-gas factor on a fresh |0> qubit.
template <typename MakeRotation>
GateCircuit build_plaquette_circuit(const LatticeGeometry& geom, MakeRotation make_rotation) {
    GateCircuit circuit;
    circuit.n_qubits = geom.n_qubits;

    LayerScheduler scheduler(geom.n_qubits);
    for (int p = 0; p < geom.n_plaquettes; ++p) {
        const auto& members = geom.plaquette_members[p];
        const int rep = members[3];
        scheduler.place(circuit.layers, make_rotation(p, rep));
        for (int slot : {0, 1, 2}) {
            Gate cx;
            cx.kind = GateKind::cnot;
            cx.control = rep;
            cx.target = members[slot];
            scheduler.place(circuit.layers, cx);
        }
    }

    for (auto& layer : circuit.layers) {
        std::sort(layer.begin(), layer.end(),
                  [](const Gate& a, const Gate& b) { return gate_sort_key(a) < gate_sort_key(b); });
    }
    check_layer_disjointness(circuit);
    return circuit;
}

inline void index_param_slots(GateCircuit& circuit, int n_plaquettes) {
    circuit.param_slots.assign(n_plaquettes, {-1, -1});
    for (int l = 0; l < static_cast<int>(circuit.layers.size()); ++l) {
        const auto& layer = circuit.layers[l];
        for (int i = 0; i < static_cast<int>(layer.size()); ++i) {
            if (layer[i].plaquette >= 0) {
                circuit.param_slots[layer[i].plaquette] = {l, i};
            }
        }
    }
    for (const auto& [l, i] : circuit.param_slots) {
        if (l < 0) throw std::logic_error("missing parametrized rotation for a plaquette");
        (void)i;
    }
}

}  // namespace detail

inline GateCircuit build_plgc(const LatticeGeometry& geom, const ParamVector& thetas) {
    if (static_cast<int>(thetas.size()) != geom.n_plaquettes) {
        throw std::invalid_argument("expected " + std::to_string(geom.n_plaquettes) +
                                    " plaquette angles, got " + std::to_string(thetas.size()));
    }
    GateCircuit circuit = detail::build_plaquette_circuit(geom, [&](int p, int rep) {
        Gate ry;
        ry.kind = GateKind::ry;
        ry.target = rep;
        ry.angle = thetas[p];
        ry.plaquette = p;
        return ry;
    });
    detail::index_param_slots(circuit, geom.n_plaquettes);
    return circuit;
}

inline GateCircuit build_toric_ground(const LatticeGeometry& geom) {
    return detail::build_plaquette_circuit(geom, [](int, int rep) {
        Gate h;
        h.kind = GateKind::h;
        h.target = rep;
        return h;
    });
}

namespace detail {

inline void apply_gate(Statevector& psi, const Gate& g, double angle) {
    switch (g.kind) {
        case GateKind::ry:
            apply_ry(psi, g.target, angle);
            break;
        case GateKind::h:
            apply_h(psi, g.target);
            break;
        case GateKind::x:
            apply_x(psi, g.target);
            break;
        case GateKind::cnot:
            apply_cnot(psi, g.control, g.target);
            break;
    }
}

}  // namespace detail

// Executes the circuit on |00...0> with its stored angles.
inline Statevector run_circuit(const GateCircuit& circuit) {
    Statevector psi = zero_state(circuit.n_qubits);
    for (const auto& layer : circuit.layers) {
        for (const Gate& g : layer) detail::apply_gate(psi, g, g.angle);
    }
    return psi;
}

// Executes the circuit with thetas bound into the parametrized slots.
inline Statevector run_circuit(const GateCircuit& circuit, const ParamVector& thetas) {
    if (thetas.size() != circuit.n_params()) {
        throw std::invalid_argument("expected " + std::to_string(circuit.n_params()) +
                                    " parameters, got " + std::to_string(thetas.size()));
    }
    Statevector psi = zero_state(circuit.n_qubits);
    for (const auto& layer : circuit.layers) {
        for (const Gate& g : layer) {
            const double angle = (g.plaquette >= 0) ? thetas[g.plaquette] : g.angle;
            detail::apply_gate(psi, g, angle);
        }
    }
    return psi;
}

inline constexpr int direct_loopgas_max_qubits = 20;

// Brute-force oracle: applies the loop-gas factors
// cos(theta_p/2) I + sin(theta_p/2) B_p as explicit state transforms, in the
// given plaquette order.
inline Statevector direct_loopgas_state(const LatticeGeometry& geom, const ParamVector& thetas,
                                        const std::vector<int>& order) {
    if (geom.n_qubits > direct_loopgas_max_qubits) {
        throw std::invalid_argument("direct loop-gas construction supports at most " +
                                    std::to_string(direct_loopgas_max_qubits) + " qubits, got " +
                                    std::to_string(geom.n_qubits));
    }
    if (static_cast<int>(thetas.size()) != geom.n_plaquettes) {
        throw std::invalid_argument("expected " + std::to_string(geom.n_plaquettes) +
                                    " plaquette angles, got " + std::to_string(thetas.size()));
    }
    if (static_cast<int>(order.size()) != geom.n_plaquettes) {
        throw std::invalid_argument("plaquette order must list every plaquette exactly once");
    }
    Statevector psi = zero_state(geom.n_qubits);
    for (int p : order) {
        if (p < 0 || p >= geom.n_plaquettes) {
            throw std::invalid_argument("plaquette id " + std::to_string(p) + " outside [0, " +
                                        std::to_string(geom.n_plaquettes) + ")");
        }
        const double c = std::cos(thetas[p] / 2.0);
        const double s = std::sin(thetas[p] / 2.0);
        const std::size_t mask = geom.plaquette_mask(p);
        for (std::size_t i = 0; i < psi.dim(); ++i) {
            const std::size_t j = i ^ mask;
            if (j < i) continue;
            const std::complex<double> a = psi.amplitudes[i];
            const std::complex<double> b = psi.amplitudes[j];
            psi.amplitudes[i] = c * a + s * b;
            psi.amplitudes[j] = c * b + s * a;
        }
    }
    return psi;
}

inline Statevector direct_loopgas_state(const LatticeGeometry& geom, const ParamVector& thetas) {
    std::vector<int> order(geom.n_plaquettes);
    for (int p = 0; p < geom.n_plaquettes; ++p) order[p] = p;
    return direct_loopgas_state(geom, thetas, order);
}

// OpenQASM 2.0 text: gates in layer order, within a layer by ascending qubit.
inline std::string export_qasm(const GateCircuit& circuit) {
    std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" +
                      std::to_string(circuit.n_qubits) + "];\n";
    char buf[64];
    for (const auto& layer : circuit.layers) {
        for (const Gate& g : layer) {
            switch (g.kind) {
                case GateKind::ry:
                    std::snprintf(buf, sizeof(buf), "%.17g", g.angle);
                    out += "ry(" + std::string(buf) + ") q[" + std::to_string(g.target) + "];\n";
                    break;
                case GateKind::h:
                    out += "h q[" + std::to_string(g.target) + "];\n";
                    break;
                case GateKind::x:
                    out += "x q[" + std::to_string(g.target) + "];\n";
                    break;
                case GateKind::cnot:
                    out += "cx q[" + std::to_string(g.control) + "],q[" +
                           std::to_string(g.target) + "];\n";
                    break;
            }
        }
    }
    return out;
}

}  // namespace plgc
