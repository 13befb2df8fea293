// Prints the parametrized loop-gas circuit for a 2x2 cluster as OpenQASM 2.0.
// At theta = pi/2 each rotation maps its plaquette representative to
// (|0> + |1>)/sqrt(2) and the CNOT fan-out completes the closed loop.
#include <cstdio>
#include <numbers>

#include "plgc/circuit.hpp"

int main() {
    using namespace plgc;

    const LatticeGeometry geom = build_lattice(2, 2);
    const ParamVector thetas(std::vector<double>(geom.n_plaquettes, std::numbers::pi / 2));
    const GateCircuit circuit = build_plgc(geom, thetas);

    std::printf("%s", export_qasm(circuit).c_str());
    std::fprintf(stderr, "depth %d, %zu parametrized rotations\n", circuit_depth(circuit),
                 circuit.n_params());
    return 0;
}
