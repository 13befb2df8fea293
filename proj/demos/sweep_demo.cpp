// Minimal programmatic sweep: one cluster, three field values, results on
// stdout and in /tmp. The CLI front end (apps/sweep_main.cpp) exposes the same
// pipeline with config files and flags.
#include <cstdio>

#include "plgc/sweep.hpp"

int main() {
    using namespace plgc;

    SweepConfig cfg;
    cfg.clusters = {{3, 3}};
    cfg.x_values = {0.0, 0.5, 1.0};
    cfg.n_restarts = 4;
    cfg.spsa.max_iterations = 150;
    cfg.spsa.seed = 42;
    cfg.output_path = "/tmp/plgc_sweep_demo.csv";

    const auto rows = run_sweep(cfg, [](const SweepRow& r) {
        std::printf("x=%.1f  E_vqe=%+.6f  E_ed=%+.6f  mz=%.4f  stopo=%+.4f  (restart %d won)\n",
                    r.x, r.energy_vqe, *r.energy_ed, r.mz_vqe, r.stopo_vqe, r.best_restart);
    });

    std::printf("%zu rows written to %s (+ .json sidecar)\n", rows.size(),
                cfg.output_path.c_str());
    return 0;
}
