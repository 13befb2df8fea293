#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plgc/sweep.hpp"
#include "plgc/version.hpp"

namespace {

std::vector<std::pair<int, int>> parse_clusters(const std::string& s) {
    std::vector<std::pair<int, int>> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        const std::string item = s.substr(pos, comma - pos);
        const std::size_t cross = item.find('x');
        if (cross == std::string::npos || cross == 0 || cross + 1 >= item.size()) {
            throw CLI::ValidationError("--clusters", "expected LXxLY pairs like 3x3,4x3");
        }
        out.emplace_back(std::stoi(item.substr(0, cross)), std::stoi(item.substr(cross + 1)));
        pos = comma + 1;
    }
    if (out.empty()) {
        throw CLI::ValidationError("--clusters", "expected at least one LXxLY pair");
    }
    return out;
}

std::vector<double> parse_x_grid(const std::string& s) {
    const std::size_t c1 = s.find(':');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos : s.find(':', c1 + 1);
    if (c2 == std::string::npos) {
        throw CLI::ValidationError("--x-grid", "expected start:stop:step like 0:1:0.1");
    }
    return plgc::x_grid(std::stod(s.substr(0, c1)), std::stod(s.substr(c1 + 1, c2 - c1 - 1)),
                        std::stod(s.substr(c2 + 1)));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Loop-gas VQE x-sweep over toric-code clusters"};
    app.set_version_flag("--version", std::string(plgc::version));

    std::string config_path;
    std::string clusters_arg;
    std::string x_grid_arg;
    std::optional<int> restarts;
    std::optional<int> iters;
    std::optional<uint64_t> seed;
    bool no_ed = false;
    std::optional<std::string> output;
    std::optional<std::string> export_qasm_dir;
    std::optional<std::string> tripartition_path;

    app.add_option("--config", config_path, "JSON config file; flags below override its fields")
        ->check(CLI::ExistingFile);
    app.add_option("--clusters", clusters_arg, "comma-separated LXxLY list, e.g. 3x3,4x3");
    app.add_option("--x-grid", x_grid_arg, "field grid start:stop:step, e.g. 0:1:0.1");
    app.add_option("--restarts", restarts, "optimizer restarts per (cluster, x) point");
    app.add_option("--iters", iters, "SPSA iterations per restart");
    app.add_option("--seed", seed, "base seed; every row seed derives from it");
    app.add_flag("--no-ed", no_ed, "skip exact diagonalization (ED columns left empty)");
    app.add_option("--output", output, "results CSV path (sidecar written next to it)");
    app.add_option("--export-qasm", export_qasm_dir, "directory for per-point OpenQASM circuits");
    app.add_option("--tripartition", tripartition_path,
                   "JSON file with regions A/B/C overriding the default tripartition");

    CLI11_PARSE(app, argc, argv);

    try {
        plgc::SweepConfig cfg =
            config_path.empty() ? plgc::default_sweep_config() : plgc::load_sweep_config(config_path);
        if (!clusters_arg.empty()) cfg.clusters = parse_clusters(clusters_arg);
        if (!x_grid_arg.empty()) cfg.x_values = parse_x_grid(x_grid_arg);
        if (restarts) cfg.n_restarts = *restarts;
        if (iters) cfg.spsa.max_iterations = *iters;
        if (seed) cfg.spsa.seed = *seed;
        if (no_ed) cfg.run_ed = false;
        if (output) cfg.output_path = *output;
        if (export_qasm_dir) cfg.export_qasm_dir = *export_qasm_dir;
        if (tripartition_path) cfg.tripartition_override = *tripartition_path;
        cfg.validate();

        if (cfg.export_qasm_dir) {
            std::filesystem::create_directories(*cfg.export_qasm_dir);
        }

        const std::vector<plgc::SweepRow> rows = plgc::run_sweep(cfg, [](const plgc::SweepRow& r) {
            if (r.energy_ed) {
                std::printf("%dx%d x=%-5g E_vqe=%+.6f E_ed=%+.6f mz=%.4f stopo=%+.4f\n", r.lx, r.ly,
                            r.x, r.energy_vqe, *r.energy_ed, r.mz_vqe, r.stopo_vqe);
            } else {
                std::printf("%dx%d x=%-5g E_vqe=%+.6f mz=%.4f stopo=%+.4f\n", r.lx, r.ly, r.x,
                            r.energy_vqe, r.mz_vqe, r.stopo_vqe);
            }
            std::fflush(stdout);
        });
        std::printf("wrote %zu rows to %s\n", rows.size(), cfg.output_path.c_str());

        // Finite-size extrapolation of the per-qubit energy deviation, per x,
        // when at least three distinct system sizes carry ED references.
        std::map<double, std::vector<std::pair<double, double>>> by_x;
        for (const plgc::SweepRow& r : rows) {
            if (r.energy_ed) {
                by_x[r.x].emplace_back(r.n_qubits, (r.energy_vqe - *r.energy_ed) / r.n_qubits);
            }
        }
        bool printed_header = false;
        for (const auto& [x, pts] : by_x) {
            std::set<double> sizes;
            for (const auto& [n, de] : pts) {
                (void)de;
                sizes.insert(n);
            }
            if (sizes.size() < 3) continue;
            if (!printed_header) {
                std::printf("extrapolated delta_e0 (N -> infinity):\n");
                printed_header = true;
            }
            std::printf("  x=%-5g  %+.6e\n", x, plgc::extrapolate_delta_e(pts));
        }
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
