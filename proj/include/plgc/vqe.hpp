#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plgc/circuit.hpp"
#include "plgc/lattice.hpp"
#include "plgc/pauli.hpp"
#include "plgc/random.hpp"
#include "plgc/spsa.hpp"
#include "plgc/statevector.hpp"

namespace plgc {

struct VqeResult {
    ParamVector best_thetas;
    double best_energy = 0.0;
    int best_restart = 0;
    std::vector<double> energy_trace;        // trace of the best restart
    std::vector<double> restart_energies;    // best energy per restart
    std::vector<double> restart_fidelities;  // overlap^2 of each restart's state with the best
};

// Energy objective for a fixed cluster and field: theta -> <H_TCM(x)> on the
// circuit state. Built once per (cluster, x); const and safe to share across
// concurrent restarts.
class EnergyObjective {
  public:
    EnergyObjective(const LatticeGeometry& geom, double x)
        : n_params_(geom.n_plaquettes),
          circuit_(build_plgc(geom, ParamVector(std::vector<double>(geom.n_plaquettes, 0.0)))),
          compiled_(hamiltonian_tcm(geom, x), geom.n_qubits) {}

    double operator()(const ParamVector& thetas) const {
        return compiled_.value(run_circuit(circuit_, thetas));
    }

    Statevector state(const ParamVector& thetas) const { return run_circuit(circuit_, thetas); }
    const GateCircuit& circuit() const { return circuit_; }
    int n_params() const { return n_params_; }

  private:
    int n_params_;
    GateCircuit circuit_;
    CompiledPauliSum compiled_;
};

struct RestartOutcome {
    ParamVector thetas;
    double energy = 0.0;
    std::vector<double> trace;
};

// One restart: theta0 is drawn uniformly from [0, 2pi)^Np with seed XOR
// restart-index, then the optimizer gets a fresh sub-seed from the same
// stream, so no two restarts share RNG state.
inline RestartOutcome vqe_restart(const EnergyObjective& objective, const SpsaConfig& cfg,
                                  int restart_index) {
    Rng rng(cfg.seed ^ static_cast<uint64_t>(restart_index));
    std::vector<double> theta0(objective.n_params());
    for (double& t : theta0) t = rng.uniform_angle();

    SpsaConfig restart_cfg = cfg;
    restart_cfg.seed = rng.next_u64();
    Objective f = [&objective](const ParamVector& thetas) { return objective(thetas); };
    SpsaResult spsa = spsa_minimize(f, ParamVector(std::move(theta0)), restart_cfg);

    RestartOutcome outcome;
    outcome.thetas = std::move(spsa.best_thetas);
    outcome.energy = spsa.best_value;
    outcome.trace = std::move(spsa.trace);
    return outcome;
}

// Combines per-restart outcomes: picks the lowest energy and reports every
// restart's overlap with that winner. Deterministic regardless of the order
// the outcomes were produced in.
inline VqeResult assemble_vqe_result(const EnergyObjective& objective,
                                     std::vector<RestartOutcome> outcomes) {
    if (outcomes.empty()) {
        throw std::invalid_argument("need at least one restart outcome");
    }
    VqeResult result;
    result.restart_energies.reserve(outcomes.size());
    int best = 0;
    for (int r = 0; r < static_cast<int>(outcomes.size()); ++r) {
        result.restart_energies.push_back(outcomes[r].energy);
        if (outcomes[r].energy < outcomes[best].energy) best = r;
    }
    result.best_restart = best;
    result.best_energy = outcomes[best].energy;
    result.best_thetas = outcomes[best].thetas;
    result.energy_trace = std::move(outcomes[best].trace);

    const Statevector best_state = objective.state(result.best_thetas);
    result.restart_fidelities.reserve(outcomes.size());
    for (const RestartOutcome& outcome : outcomes) {
        result.restart_fidelities.push_back(fidelity(best_state, objective.state(outcome.thetas)));
    }
    return result;
}

inline VqeResult vqe_run(const LatticeGeometry& geom, double x, const SpsaConfig& cfg,
                         int n_restarts) {
    if (n_restarts < 1) {
        throw std::invalid_argument("need at least one restart, got " +
                                    std::to_string(n_restarts));
    }
    cfg.validate();
    const EnergyObjective objective(geom, x);
    std::vector<RestartOutcome> outcomes;
    outcomes.reserve(n_restarts);
    for (int r = 0; r < n_restarts; ++r) {
        outcomes.push_back(vqe_restart(objective, cfg, r));
    }
    return assemble_vqe_result(objective, std::move(outcomes));
}

// d<E>/d theta_p via the parameter-shift rule; exact because each theta_p
// enters through a single Ry.
inline std::vector<double> parameter_shift_gradient(const LatticeGeometry& geom, double x,
                                                    const ParamVector& thetas) {
    if (static_cast<int>(thetas.size()) != geom.n_plaquettes) {
        throw std::invalid_argument("expected " + std::to_string(geom.n_plaquettes) +
                                    " plaquette angles, got " + std::to_string(thetas.size()));
    }
    const EnergyObjective objective(geom, x);
    constexpr double half_pi = 1.57079632679489661923;
    std::vector<double> grad(thetas.size());
    std::vector<double> shifted = thetas.thetas;
    for (std::size_t p = 0; p < thetas.size(); ++p) {
        const double original = shifted[p];
        shifted[p] = original + half_pi;
        const double e_plus = objective(ParamVector(shifted));
        shifted[p] = original - half_pi;
        const double e_minus = objective(ParamVector(shifted));
        shifted[p] = original;
        grad[p] = (e_plus - e_minus) / 2.0;
    }
    return grad;
}

}  // namespace plgc
